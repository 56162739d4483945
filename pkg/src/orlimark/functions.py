"""Function families the norm and inequality machinery operates on.

Four representations: algebraic polynomials in monomial coefficients,
trigonometric polynomials on the circle, pole-free rational functions, and
products of absolute powers |x - z_j|^(r_j) with complex nodes.  All evaluate
vectorized over numpy arrays and serialize to a plain text form that round
trips exactly ("repr" floats).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import (
    CoefficientOverflowError,
    DegenerateInputError,
    PoleProximityError,
    RejectedInputError,
)
from .quadrature import Domain

_poly = np.polynomial.polynomial


def _trim(coeffs) -> tuple[float, ...]:
    c = [float(v) for v in coeffs]
    while c and c[-1] == 0.0:
        c.pop()
    return tuple(c)


def _check_coeffs(coeffs):
    arr = np.asarray(coeffs, dtype=float)
    if arr.size and not np.isfinite(arr).all():
        raise CoefficientOverflowError("non-finite coefficient")
    if arr.size and np.max(np.abs(arr)) > 1e300:
        raise CoefficientOverflowError("coefficient magnitude exceeds 1e300")
    return arr


class PolynomialRep:
    """Algebraic polynomial in monomial coefficients, low degree first.

    Large cancelling monomial coefficients (orthogonal families, Chebyshev
    products) make Horner evaluation lose digits in proportion to the
    coefficient magnitude.  Constructors that know an accurate Chebyshev
    expansion pass it as ``cheb``; evaluation then runs through Clenshaw,
    which is backward stable on the interval.
    """

    kind = "polynomial"

    def __init__(self, coeffs, cheb=None):
        self.coeffs = _trim(_check_coeffs(coeffs))
        if cheb is not None:
            arr = np.asarray(cheb, dtype=float)
            self._cheb = arr if arr.size else np.zeros(1)
        else:
            self._cheb = None

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 marks the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def natural_domain(self) -> Domain:
        return Domain.interval()

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        if not self.coeffs:
            return np.zeros(xs.shape)
        if self._cheb is not None:
            return np.polynomial.chebyshev.chebval(xs, self._cheb)
        if self.degree > 60:
            return self._eval_mixed(xs)
        return _poly.polyval(xs, np.asarray(self.coeffs))

    def _eval_mixed(self, xs):
        # Monomial Horner loses digits near the interval ends at high degree;
        # switch to a Chebyshev-basis Clenshaw evaluation for |x| > 0.8.  The
        # float-converted expansion inherits whatever cancellation the
        # monomial coefficients carry, so this is best effort only.
        cheb = np.polynomial.chebyshev.poly2cheb(np.asarray(self.coeffs))
        out = np.empty(xs.shape)
        near = np.abs(xs) > 0.8
        if near.any():
            out[near] = np.polynomial.chebyshev.chebval(xs[near], cheb)
        if (~near).any():
            out[~near] = _poly.polyval(xs[~near], np.asarray(self.coeffs))
        return out

    def derivative(self, order: int = 1) -> "PolynomialRep":
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        c = np.asarray(self.coeffs) if self.coeffs else np.zeros(1)
        cheb = self._cheb
        for _ in range(order):
            c = _poly.polyder(c)
            if cheb is not None:
                cheb = np.polynomial.chebyshev.chebder(cheb) if cheb.size > 1 else np.zeros(1)
        return PolynomialRep(_check_coeffs(c), cheb=cheb)

    def __eq__(self, other):
        return isinstance(other, PolynomialRep) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"PolynomialRep({list(self.coeffs)!r})"


class TrigPolynomialRep:
    """a0 + sum a_k cos(kx) + b_k sin(kx) on the circle."""

    kind = "trig"

    def __init__(self, cos_coeffs, sin_coeffs):
        a = [float(v) for v in cos_coeffs]
        b = [float(v) for v in sin_coeffs]
        if not a:
            a = [0.0]
        if len(b) != len(a) - 1:
            raise ValueError(
                f"need one sine coefficient per k >= 1: got {len(a)} cosine "
                f"and {len(b)} sine coefficients"
            )
        _check_coeffs(a)
        _check_coeffs(b)
        n = len(a) - 1
        while n >= 1 and a[n] == 0.0 and b[n - 1] == 0.0:
            a.pop()
            b.pop()
            n -= 1
        self.cos_coeffs = tuple(a)
        self.sin_coeffs = tuple(b)

    @property
    def degree(self) -> int:
        n = len(self.cos_coeffs) - 1
        if n == 0:
            return 0 if self.cos_coeffs[0] != 0.0 else -1
        return n

    @property
    def natural_domain(self) -> Domain:
        return Domain.circle()

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        n = len(self.cos_coeffs) - 1
        out = np.full(xs.shape, self.cos_coeffs[0])
        if n >= 1:
            k = np.arange(1, n + 1, dtype=float)
            kx = xs[..., None] * k
            out = out + np.cos(kx) @ np.asarray(self.cos_coeffs[1:])
            out = out + np.sin(kx) @ np.asarray(self.sin_coeffs)
        return out

    def derivative(self, order: int = 1) -> "TrigPolynomialRep":
        a = list(self.cos_coeffs)
        b = list(self.sin_coeffs)
        for _ in range(order):
            n = len(a) - 1
            new_a = [0.0] + [k * b[k - 1] for k in range(1, n + 1)]
            new_b = [-k * a[k] for k in range(1, n + 1)]
            a, b = new_a, new_b
        return TrigPolynomialRep(a, b)

    def __eq__(self, other):
        return (
            isinstance(other, TrigPolynomialRep)
            and self.cos_coeffs == other.cos_coeffs
            and self.sin_coeffs == other.sin_coeffs
        )

    def __repr__(self):
        return f"TrigPolynomialRep({list(self.cos_coeffs)!r}, {list(self.sin_coeffs)!r})"


class RationalRep:
    """Quotient of two polynomials; callers must keep the denominator pole-free."""

    kind = "rational"

    def __init__(self, num: PolynomialRep, den: PolynomialRep):
        if isinstance(num, (list, tuple)):
            num = PolynomialRep(num)
        if isinstance(den, (list, tuple)):
            den = PolynomialRep(den)
        if den.degree < 0:
            raise DegenerateInputError("denominator is the zero polynomial")
        self.num = num
        self.den = den

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    @property
    def natural_domain(self) -> Domain:
        return Domain.interval()

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        dv = self.den(xs)
        tiny = np.abs(dv) < 1e-14
        if tiny.any():
            idx = int(np.argmax(tiny))
            bad = float(np.ravel(xs)[idx])
            raise PoleProximityError(
                f"denominator magnitude below 1e-14 at x = {bad!r}", abscissa=bad
            )
        return self.num(xs) / dv

    def derivative(self, order: int = 1) -> "RationalRep":
        num = np.asarray(self.num.coeffs) if self.num.coeffs else np.zeros(1)
        den = np.asarray(self.den.coeffs)
        for _ in range(order):
            dn = _poly.polyder(num) if num.size > 1 else np.zeros(1)
            dd = _poly.polyder(den) if den.size > 1 else np.zeros(1)
            num = _poly.polysub(_poly.polymul(dn, den), _poly.polymul(num, dd))
            den = _poly.polymul(den, den)
            _check_coeffs(num)
            _check_coeffs(den)
        return RationalRep(PolynomialRep(num), PolynomialRep(den))

    def __eq__(self, other):
        return (
            isinstance(other, RationalRep)
            and self.num == other.num
            and self.den == other.den
        )

    def __repr__(self):
        return f"RationalRep({self.num!r}, {self.den!r})"


class GapRep:
    """Product of |x - z_j|^(r_j) with z_j = a_j + i b_j and real r_j >= 1."""

    kind = "gap"

    def __init__(self, factors):
        fs = []
        for a, b, r in factors:
            a, b, r = float(a), float(b), float(r)
            if not (r >= 1.0):
                raise ValueError(f"factor exponent must be >= 1, got {r!r}")
            fs.append((a, b, r))
        if not fs:
            raise ValueError("need at least one factor")
        self.factors = tuple(fs)

    @property
    def degree(self) -> float:
        """Sum of exponents; real-valued by design."""
        return sum(r for _a, _b, r in self.factors)

    @property
    def natural_domain(self) -> Domain:
        return Domain.interval()

    def log_abs(self, x):
        xs = np.asarray(x, dtype=float)
        out = np.zeros(xs.shape)
        with np.errstate(divide="ignore"):
            for a, b, r in self.factors:
                out = out + 0.5 * r * np.log((xs - a) ** 2 + b * b)
        return out

    def __call__(self, x):
        return np.exp(self.log_abs(x))

    def __eq__(self, other):
        return isinstance(other, GapRep) and self.factors == other.factors

    def __repr__(self):
        return f"GapRep({list(self.factors)!r})"


class InversePowerRep:
    """(1 - x)^(-q) on [-1, 1]: the model integrable singularity.

    Unbounded at the right endpoint, so only quadrature that keeps its nodes
    interior (Gauss rules) may touch it; sup-based routines must cap it
    first.  ||f||_beta is finite exactly when q * beta < 1; enforcing that is
    the caller's job since it depends on the exponent in play.
    """

    kind = "inverse-power"

    def __init__(self, q: float):
        q = float(q)
        if not (q > 0.0):
            raise ValueError(f"exponent must be positive, got {q!r}")
        self.q = q

    @property
    def natural_domain(self) -> Domain:
        return Domain.interval()

    def log_abs(self, x):
        xs = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return -self.q * np.log(1.0 - xs)

    def __call__(self, x):
        return np.exp(self.log_abs(x))

    def __eq__(self, other):
        return isinstance(other, InversePowerRep) and self.q == other.q

    def __repr__(self):
        return f"InversePowerRep({self.q!r})"


class GapDerivative:
    """First derivative of a GapRep via logarithmic differentiation.

    Q'(x) = Q(x) * sum_j r_j (x - a_j) / |x - z_j|^2.  Real nodes inside the
    interval with unit exponent make |x - a_j| non-differentiable, so those
    inputs are rejected at construction.
    """

    def __init__(self, rep: GapRep):
        for a, b, r in rep.factors:
            if b == 0.0 and abs(a) <= 1.0 and r == 1.0:
                raise RejectedInputError(
                    f"factor |x - {a!r}| with unit exponent and real node inside "
                    "the interval is not differentiable there"
                )
        self.rep = rep

    @property
    def natural_domain(self) -> Domain:
        return Domain.interval()

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        s = np.zeros(xs.shape)
        for a, b, r in self.rep.factors:
            s = s + r * (xs - a) / ((xs - a) ** 2 + b * b)
        return self.rep(xs) * s


def eval_rep(rep, x):
    """Evaluate any representation at scalar or array x."""
    return rep(x)


def derivative(rep, order: int = 1):
    """Derivative within the same family; GapRep gets the log-derivative object."""
    if isinstance(rep, GapRep):
        if order != 1:
            raise RejectedInputError("only first derivatives are available for gap products")
        return GapDerivative(rep)
    return rep.derivative(order)


def _jacobi22_exact(n: int) -> list[Fraction]:
    # n-th derivative of (1 - x^2)^(n+2), then exact division by (1 - x^2)^2.
    top = [Fraction(0)] * (2 * (n + 2) + 1)
    for k in range(n + 2 + 1):
        top[2 * k] = Fraction((-1) ** k * math.comb(n + 2, k))
    deriv = [Fraction(0)] * (len(top) - n)
    for j in range(len(top)):
        if j >= n and top[j] != 0:
            fall = Fraction(1)
            for t in range(n):
                fall *= j - t
            deriv[j - n] = top[j] * fall
    # divide by (x^2 - 1)^2 = x^4 - 2x^2 + 1; monic so the quotient is exact
    divisor = [Fraction(1), Fraction(0), Fraction(-2), Fraction(0), Fraction(1)]
    rem = list(deriv)
    q = [Fraction(0)] * (len(rem) - 4)
    for i in range(len(rem) - 1, 3, -1):
        c = rem[i]
        q[i - 4] = c
        if c != 0:
            for j, d in enumerate(divisor):
                rem[i - 4 + j] -= c * d
    if any(r != 0 for r in rem[:4]):
        raise ArithmeticError("exact division failed; construction is inconsistent")
    scale = Fraction((-1) ** n, 2**n * math.factorial(n))
    return [c * scale for c in q]


def _cheb_from_monomial(fracs: list[Fraction]) -> list[Fraction]:
    # Exact change of basis: triangular back-substitution against the integer
    # monomial expansions of T_k.  Keeps the conversion free of the
    # cancellation that a float poly2cheb on large coefficients would inherit.
    n = len(fracs) - 1
    table: list[list[Fraction]] = [[Fraction(1)]]
    if n >= 1:
        table.append([Fraction(0), Fraction(1)])
    for k in range(2, n + 1):
        row = [Fraction(0)] * (k + 1)
        for j, c in enumerate(table[k - 1]):
            row[j + 1] += 2 * c
        for j, c in enumerate(table[k - 2]):
            row[j] -= c
        table.append(row)
    work = list(fracs)
    out = [Fraction(0)] * (n + 1)
    for k in range(n, -1, -1):
        c = work[k] / table[k][k]
        out[k] = c
        if c != 0:
            for j, t in enumerate(table[k]):
                work[j] -= c * t
    return out


def _jacobi22_next(pm1: np.ndarray, pm2: np.ndarray, n: int) -> np.ndarray:
    # three-term recurrence for weight (1-x^2)^2, i.e. both exponents equal 2
    a = 2.0 * n * (n + 4) * (2 * n + 2)
    b = (2 * n + 3) * (2 * n + 4) * (2 * n + 2)
    c = 2.0 * (n + 1) * (n + 1) * (2 * n + 4)
    out = np.zeros(n + 1)
    out[1:] += b * pm1
    out[: len(pm2)] -= c * pm2
    return out / a


def jacobi22(n: int) -> PolynomialRep:
    """Ultraspherical polynomial with both weight exponents 2, degree n.

    Exact rational arithmetic up to degree 40; floating-point recurrence
    beyond that, capped at 200.
    """
    if not (0 <= n <= 200):
        raise ValueError(f"degree out of range [0, 200]: {n!r}")
    if n <= 40:
        exact = _jacobi22_exact(n)
        cheb = [float(c) for c in _cheb_from_monomial(exact)]
        return PolynomialRep([float(c) for c in exact], cheb=cheb)
    pm2 = np.array([1.0])
    pm1 = np.array([0.0, 3.0])
    for k in range(2, n + 1):
        pm2, pm1 = pm1, _jacobi22_next(pm1, pm2, k)
    return PolynomialRep(pm1)


def chebyshev_t(n: int) -> PolynomialRep:
    """Chebyshev polynomial of the first kind in monomial coefficients."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    c = np.zeros(n + 1)
    c[n] = 1.0
    return PolynomialRep(np.polynomial.chebyshev.cheb2poly(c), cheb=c)


class PoleCheck:
    def __init__(self, pole_free: bool, certified_min: float, witness: float | None):
        self.pole_free = pole_free
        self.certified_min = certified_min
        self.witness = witness

    def __bool__(self):
        return self.pole_free


def check_no_poles(rat: RationalRep, grid: int = 4096) -> PoleCheck:
    """Certify that the denominator stays away from zero on [-1, 1].

    Subdivision with a global derivative bound: on a cell of width h the
    denominator cannot drop more than L*h/2 below its midpoint sample, where
    L = sum k |d_k| bounds |den'| on the interval.  Threshold combines the
    coefficient-scaled floor with an absolute floor of 1e-7.
    """
    den = rat.den
    coeffs = np.asarray(den.coeffs)
    max_coeff = float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
    threshold = max(1e-9 * (1.0 + max_coeff), 1e-7)
    lipschitz = float(sum(k * abs(c) for k, c in enumerate(den.coeffs)))
    n = grid
    for _round in range(24):
        xs = np.linspace(-1.0, 1.0, n + 1)
        vals = np.abs(den(xs))
        h = 2.0 / n
        lower = vals - 0.5 * lipschitz * h
        i = int(np.argmin(vals))
        if float(vals[i]) <= threshold:
            return PoleCheck(False, float(vals[i]), float(xs[i]))
        if float(np.min(lower)) > threshold:
            return PoleCheck(True, float(np.min(lower)), None)
        n *= 2
        if n > 2**22:
            break
    i = int(np.argmin(vals))
    return PoleCheck(False, float(vals[i]), float(xs[i]))


def random_family(kind: str, n: int, seed: int):
    """Deterministic random representative of the given family and degree."""
    kinds = ("polynomial", "trig", "rational", "gap")
    if kind not in kinds:
        raise ValueError(f"unknown family {kind!r}; expected one of {kinds}")
    if n < 1:
        raise ValueError("degree must be at least 1")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(kinds.index(kind), n)))
    if kind == "polynomial":
        c = rng.uniform(-1.0, 1.0, size=n + 1)
        if abs(c[n]) < 0.1:
            c[n] = 0.1 if c[n] >= 0 else -0.1
        return PolynomialRep(c)
    if kind == "trig":
        a = rng.uniform(-1.0, 1.0, size=n + 1)
        b = rng.uniform(-1.0, 1.0, size=n)
        if max(abs(a[n]), abs(b[n - 1])) < 0.1:
            a[n] = 0.5
        return TrigPolynomialRep(a, b)
    if kind == "rational":
        num = rng.uniform(-1.0, 1.0, size=max(1, n))
        if num[-1] == 0.0:
            num[-1] = 0.3
        den = np.array([1.0])
        deg_left = n
        while deg_left >= 2:
            c = rng.uniform(0.3, 2.0)
            den = _poly.polymul(den, np.array([c, 0.0, 1.0]))
            deg_left -= 2
        if deg_left == 1:
            d = rng.uniform(1.5, 3.0) * rng.choice([-1.0, 1.0])
            den = _poly.polymul(den, np.array([-d, 1.0]))
        return RationalRep(PolynomialRep(num), PolynomialRep(den))
    count = min(3, n)
    base = [1.0] * count
    extra = float(n - count)
    weights = rng.dirichlet(np.ones(count))
    exps = [base[i] + extra * weights[i] for i in range(count)]
    # nudge so the exponent sum is exactly n despite float dirichlet round-off
    exps[-1] += n - sum(exps)
    factors = [
        (rng.uniform(-1.2, 1.2), rng.uniform(0.3, 1.5), exps[i]) for i in range(count)
    ]
    return GapRep(factors)


def _floats(parts):
    # commas or whitespace both separate; to_text emits commas
    return [float(s) for s in parts.replace(",", " ").split()]


def to_text(rep) -> str:
    """Serialize a representation; floats use repr so parsing is exact."""
    if isinstance(rep, PolynomialRep):
        return "poly:" + ",".join(repr(c) for c in (rep.coeffs or (0.0,)))
    if isinstance(rep, TrigPolynomialRep):
        a = ",".join(repr(c) for c in rep.cos_coeffs)
        b = ",".join(repr(c) for c in rep.sin_coeffs)
        return f"trig:{a}|{b}"
    if isinstance(rep, RationalRep):
        num = ",".join(repr(c) for c in (rep.num.coeffs or (0.0,)))
        den = ",".join(repr(c) for c in rep.den.coeffs)
        return f"rational:{num}|{den}"
    if isinstance(rep, GapRep):
        return "gap:" + ";".join(f"{a!r},{b!r},{r!r}" for a, b, r in rep.factors)
    raise TypeError(f"cannot serialize {type(rep).__name__}")


def from_text(text: str):
    """Parse the text form produced by to_text."""
    if ":" not in text:
        raise ValueError(f"malformed function text {text!r}: missing kind prefix")
    kind, _, body = text.partition(":")
    kind = kind.strip()
    body = body.strip()
    try:
        if kind == "poly":
            return PolynomialRep(_floats(body))
        if kind == "trig":
            a, _, b = body.partition("|")
            return TrigPolynomialRep(_floats(a), _floats(b))
        if kind == "rational":
            num, _, den = body.partition("|")
            return RationalRep(PolynomialRep(_floats(num)), PolynomialRep(_floats(den)))
        if kind == "gap":
            factors = []
            for part in body.split(";"):
                a, b, r = _floats(part)
                factors.append((a, b, r))
            return GapRep(factors)
    except ValueError as exc:
        raise ValueError(f"malformed {kind!r} function text: {exc}") from exc
    raise ValueError(f"unknown function kind {kind!r}")
