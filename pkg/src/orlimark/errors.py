"""Exception types shared across the package."""


class OrlimarkError(Exception):
    """Base class for all package-specific failures."""


class DomainEvaluationError(OrlimarkError):
    """Integrand produced a non-finite value at a quadrature node."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class ConvergenceFailureError(OrlimarkError):
    """Adaptive refinement exhausted its depth or panel budget.

    Carries the best available estimate and an error bound so callers can
    decide whether the partial answer is still usable.
    """

    def __init__(self, message, best_estimate=None, error_bound=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_bound = error_bound


class PoleProximityError(OrlimarkError):
    """Rational evaluation hit a denominator value too close to zero."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class CoefficientOverflowError(OrlimarkError):
    """Coefficient growth left the representable floating-point range."""


class RejectedInputError(OrlimarkError):
    """Input is structurally outside what an operation can handle."""


class ConstructionError(OrlimarkError):
    """Failed to build a convex spliced Orlicz function for the given phi."""


class ConjugateDivergenceError(OrlimarkError):
    """The conjugate supremum did not stabilize inside the search range."""


class SummabilityError(OrlimarkError):
    """A series required by a constant did not certifiably converge."""


class LuxemburgBracketError(OrlimarkError):
    """Bisection bracket for the Luxemburg norm failed its sign check."""


class ScanDivergenceError(OrlimarkError):
    """A sup-over-p scan kept growing after all grid extensions."""


class DegenerateInputError(OrlimarkError):
    """Operation requires a nonzero function but received zero."""


class ConfigError(OrlimarkError):
    """Configuration text failed validation.

    ``problems`` is a list of human-readable strings, each prefixed with the
    line number it refers to.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
