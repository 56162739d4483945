"""Empirical checks of the Markov and Bernstein type inequalities.

Each check evaluates both sides of one inequality with explicitly computed
constants and reports margins (bound minus measured value), never boolean
verdicts alone, so a failing run shows how badly and where.  Unknown
absolute constants are fitted, reported, and only their boundedness or
scaling is asserted.

The polynomial Markov bound chain:

    ratio in the spliced-Orlicz norm <= n^2 * K(4) * max(1, psi(4)) * C4 * C3

carries C4 in log form since it overflows floats for fast-growing weights;
margins against an overflowing bound are +inf, which is correct and sorts
last.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .conjugate import ConjugateCache, PhiSpec, power_log, psi
from .errors import DegenerateInputError, RejectedInputError
from .functions import (
    GapRep,
    PolynomialRep,
    RationalRep,
    TrigPolynomialRep,
    chebyshev_t,
    check_no_poles,
    derivative,
    jacobi22,
    random_family,
)
from .norms import (
    NormContext,
    NormSpec,
    equivalence_constants,
    evaluate_norm,
    g_norm,
    luxemburg_norm,
    orlicz_spec,
    sup_ratio_from,
    v_quasinorm,
    weighted_lorentz_g,
)
from .quadrature import (
    DEFAULT_CONFIG,
    SINGULAR_CONFIG,
    LevelSampler,
    QuadratureConfig,
    lp_quasinorm,
)

_SEARCH_CONFIG = QuadratureConfig(rel_tol=1e-7, max_depth=40)


# ---------------------------------------------------------------------------
# named constants


def k_constant(p: float) -> float:
    """Sharp constant of the L_p polynomial derivative bound, p > 2."""
    p = float(p)
    if not (p > 2.0):
        raise ValueError(f"constant defined only for p > 2, got {p!r}")
    return (4.0 * math.pi * (p + 3.0) ** 2 / (p * math.sin(2.0 * math.pi / p))) ** (1.0 / p)


def d_constant_log(r: int) -> float:
    r = _check_order(r)
    return (
        1.0 / math.e
        + math.lgamma(r + 1.0)
        + (r + 0.25) * (math.log(4.0 / 3.0) + math.log(r + 0.25))
    )


def d_constant(r: int) -> float:
    """Rational-derivative constant: exp(1/e) r! (4/3)^(r+1/4) (r+1/4)^(r+1/4)."""
    r = _check_order(r)
    if r <= 20:
        return (
            math.exp(1.0 / math.e)
            * math.factorial(r)
            * (4.0 / 3.0) ** (r + 0.25)
            * (r + 0.25) ** (r + 0.25)
        )
    return math.exp(d_constant_log(r))


def _check_order(r) -> int:
    if int(r) != r or r < 1:
        raise ValueError(f"derivative order must be an integer >= 1, got {r!r}")
    return int(r)


# ---------------------------------------------------------------------------
# ratios and sweeps


def markov_ratio(f, spec: NormSpec, domain=None, ctx: NormContext | None = None) -> float:
    """||f'|| / ||f|| in the requested norm."""
    context = ctx if ctx is not None else NormContext()
    dom = domain if domain is not None else f.natural_domain
    den = evaluate_norm(f, spec, dom, context)
    if den == 0.0:
        raise DegenerateInputError("norm of the function is zero; the ratio is undefined")
    num = evaluate_norm(derivative(f, 1), spec, dom, context)
    return num / den


@dataclass(frozen=True)
class RatioRow:
    n: int
    ratio: float
    bound: float
    margin: float


@dataclass
class RatioReport:
    family: str
    norm_label: str
    phi_label: str
    rows: list[RatioRow]
    slope: float
    slope_ci: tuple[float, float]
    c5_estimate: float
    constants: dict[str, float] = field(default_factory=dict)

    @property
    def min_margin(self) -> float:
        return min((row.margin for row in self.rows), default=math.inf)


def _fit_loglog(ns, ratios) -> tuple[float, tuple[float, float]]:
    # The exponent of interest is asymptotic; small degrees sit in a
    # pre-asymptotic transient that drags an equal-weight fit well below the
    # limiting slope.  Fit the upper half of the swept degrees, never fewer
    # than five.
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(ratios, dtype=float))
    if x.size < 5:
        return math.nan, (math.nan, math.nan)
    keep = max(5, (x.size + 1) // 2)
    x, y = x[-keep:], y[-keep:]
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    dof = x.size - 2
    sxx = float(np.sum((x - x.mean()) ** 2))
    se = math.sqrt(float(np.sum(resid**2)) / dof / sxx)
    tq = float(stats.t.ppf(0.975, dof))
    return float(slope), (float(slope - tq * se), float(slope + tq * se))


def _family_member(family: str, n: int, seed: int):
    if n == 0:
        return PolynomialRep([1.0])
    if family == "jacobi22":
        return jacobi22(n)
    if family == "chebyshev":
        return chebyshev_t(n)
    if family == "random-poly":
        return random_family("polynomial", n, seed)
    raise ValueError(f"unknown sweep family {family!r}")


def markov_factor_log(phi: PhiSpec, ctx: NormContext | None = None) -> float:
    """log of the n-free factor K(4) * max(1, psi(4)) * C4 * C3."""
    context = ctx if ctx is not None else NormContext()
    consts = equivalence_constants(context.orlicz(phi))
    psi4 = psi(phi, 4.0)
    return (
        math.log(k_constant(4.0))
        + math.log(max(1.0, psi4))
        + consts.b_over_g_log
        + math.log(consts.g_over_b)
    )


def markov_sweep(
    phi: PhiSpec,
    family: str,
    n_range,
    norm: NormSpec | None = None,
    ctx: NormContext | None = None,
    seed: int = 0,
) -> RatioReport:
    """Derivative-to-function norm ratios across degrees, with bounds.

    The bound column carries n^2 * K(p) for plain L_p (p > 2) and the full
    constant chain for the spliced-Orlicz and sup-ratio norms; norms without
    a proven constant get +inf (ratio recorded, nothing asserted).
    """
    ns = sorted(set(int(n) for n in n_range))
    if not ns:
        raise ValueError("empty degree range")
    context = ctx if ctx is not None else NormContext()
    spec = norm if norm is not None else orlicz_spec(phi)
    consts: dict[str, float] = {"k4": k_constant(4.0), "psi4": psi(phi, 4.0)}
    if spec.kind == "lp":
        factor_log = math.log(k_constant(spec.p)) if spec.p > 2.0 else math.inf
        consts["kp"] = math.exp(factor_log) if math.isfinite(factor_log) else math.inf
    elif spec.kind in ("orlicz", "gnorm"):
        factor_log = markov_factor_log(phi, context)
        eq = equivalence_constants(context.orlicz(phi))
        consts["c3"] = eq.g_over_b
        consts["c4_log"] = eq.b_over_g_log
    else:
        factor_log = math.inf
    rows = []
    for n in ns:
        f = _family_member(family, n, seed)
        ratio = 0.0 if n == 0 else markov_ratio(f, spec, ctx=context)
        if n == 0:
            bound = 0.0
        elif math.isfinite(factor_log):
            try:
                bound = math.exp(factor_log + 2.0 * math.log(n))
            except OverflowError:
                bound = math.inf
        else:
            bound = math.inf
        rows.append(RatioRow(n, ratio, bound, bound - ratio))
    fit_rows = [row for row in rows if row.n >= 2 and row.ratio > 0.0]
    slope, ci = _fit_loglog([r.n for r in fit_rows], [r.ratio for r in fit_rows])
    c5 = min((row.ratio / row.n**2 for row in rows if row.n >= 1), default=math.nan)
    return RatioReport(family, spec.label, phi.label, rows, slope, ci, c5, consts)


def bernstein_trig_check(q: TrigPolynomialRep, spec: NormSpec, ctx: NormContext | None = None) -> float:
    """deg q * ||q|| - ||q'|| in the given norm; nonnegative when the bound holds."""
    context = ctx if ctx is not None else NormContext()
    deg = max(q.degree, 0)
    value = evaluate_norm(q, spec, ctx=context)
    dvalue = evaluate_norm(q.derivative(), spec, ctx=context)
    return deg * value - dvalue


# ---------------------------------------------------------------------------
# rational-derivative checks


@dataclass(frozen=True)
class RationalCheck:
    margin: float
    lhs: float
    rhs: float
    rhs_log: float
    gamma: float
    order: int
    degree: float


def _require_pole_free(q: RationalRep):
    pc = check_no_poles(q)
    if not pc:
        raise RejectedInputError(
            f"denominator reaches magnitude {pc.certified_min:.3e} near "
            f"x = {pc.witness!r}; the function is outside the pole-free class"
        )


def lp_rational_check(q: RationalRep, p: float, r: int, cfg: QuadratureConfig = DEFAULT_CONFIG) -> RationalCheck:
    """Power-norm form: ||q^(r)||_gamma <= D(r) * deg^r * ||q||_p, p >= 4."""
    r = _check_order(r)
    p = float(p)
    if not (p >= 4.0):
        raise ValueError(f"the explicit constant needs p >= 4, got {p!r}")
    _require_pole_free(q)
    gamma = p / (p * r + 1.0)
    dom = q.natural_domain
    lhs = lp_quasinorm(derivative(q, r), gamma, dom, cfg)
    deg = float(q.degree)
    rhs = d_constant(r) * deg**r * lp_quasinorm(q, p, dom, cfg)
    rhs_log = math.log(rhs) if rhs > 0 else -math.inf
    return RationalCheck(rhs - lhs, lhs, rhs, rhs_log, gamma, r, deg)


def rational_orlicz_check(
    q: RationalRep,
    phi: PhiSpec,
    r: int,
    ctx: NormContext | None = None,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> RationalCheck:
    """Orlicz form: derivative-weighted quasinorm of q^(r) against C4 D(r) deg^r ||q||."""
    r = _check_order(r)
    _require_pole_free(q)
    context = ctx if ctx is not None else NormContext(cfg)
    dom = q.natural_domain
    lhs = v_quasinorm(
        derivative(q, r), phi, float(r), dom, cfg, cache=context.conjugates(phi, p_lo=4.0)
    )
    b = luxemburg_norm(q, context.orlicz(phi), dom, cfg)
    consts = equivalence_constants(context.orlicz(phi))
    deg = float(q.degree)
    if deg == 0.0 or b == 0.0:
        rhs_log = -math.inf
    else:
        rhs_log = consts.b_over_g_log + d_constant_log(r) + r * math.log(deg) + math.log(b)
    try:
        rhs = math.exp(rhs_log)
    except OverflowError:
        rhs = math.inf
    gamma = 4.0 / (4.0 * r + 1.0)
    return RationalCheck(rhs - lhs, lhs, rhs, rhs_log, gamma, r, deg)


def scaled_rational_family(base_num: PolynomialRep, den: PolynomialRep, n: int) -> RationalRep:
    """Degree-n member: numerator multiplied by Chebyshev factors, fixed denominator."""
    num = base_num
    while num.degree < n:
        step = min(n - num.degree, 4)
        extra = chebyshev_t(step)
        num = PolynomialRep(np.polynomial.polynomial.polymul(np.asarray(num.coeffs), np.asarray(extra.coeffs)))
    return RationalRep(num, den)


# ---------------------------------------------------------------------------
# products of absolute powers


@dataclass(frozen=True)
class GapRow:
    n: float
    ratio: float
    scaled: float


@dataclass
class GapReport:
    p: float
    rows: list[GapRow]
    max_scaled: float
    trend_slope: float


def gap_check(base: GapRep, p: float, n_range, cfg: QuadratureConfig = DEFAULT_CONFIG) -> GapReport:
    """Ratio / degree^2 across exponent-scaled copies of ``base``.

    The absolute constant of the underlying inequality is unknown, so the
    check is a scaling one: ratio/(deg^2) must stay bounded with a trend
    slope near zero.
    """
    if not (p > 0.0):
        raise ValueError(f"exponent must be positive, got {p!r}")
    deg0 = base.degree
    rows = []
    for n in sorted(set(float(n) for n in n_range)):
        scale = n / deg0
        factors = [(a, b, r * scale) for a, b, r in base.factors]
        if any(r < 1.0 for _a, _b, r in factors):
            raise ValueError(
                f"degree {n:g} would push an exponent below 1; start the range at {deg0:g}"
            )
        member = GapRep(factors)
        dom = member.natural_domain
        num = lp_quasinorm(derivative(member, 1), p, dom, cfg)
        den = lp_quasinorm(member, p, dom, cfg)
        ratio = num / den
        rows.append(GapRow(n, ratio, ratio / n**2))
    slope, _ci = _fit_loglog([r.n for r in rows], [max(r.scaled, 1e-300) for r in rows])
    return GapReport(p, rows, max(r.scaled for r in rows), slope)


# ---------------------------------------------------------------------------
# tail characterization


class _CappedAbs:
    """|f| clipped at a finite cap so dense samplers accept unbounded f.

    Superlevel measures below the cap are unchanged, which is all the tail
    analysis reads.
    """

    def __init__(self, f, cap: float):
        self._f = f
        self.cap = float(cap)
        self.natural_domain = f.natural_domain

    def __call__(self, x):
        with np.errstate(over="ignore"):
            return np.minimum(np.abs(self._f(x)), self.cap)


@dataclass
class TailReport:
    u_grid: np.ndarray
    t_values: np.ndarray
    model_values: np.ndarray
    prefactor: float
    max_violation: float
    normalizer: float
    converse_norm: float
    beta_exponent_measured: float
    beta_exponent_model: float


def tail_check(
    f,
    m: float,
    r: int,
    cfg: QuadratureConfig = SINGULAR_CONFIG,
    u_max: float = 1e3,
    points: int = 49,
    ctx: NormContext | None = None,
) -> TailReport:
    """Distribution-tail bound and its converse for the weighted quasinorm.

    Forward: normalizes f by its derivative-weighted quasinorm, then fits the
    smallest prefactor making T(|f|,u) <= prefactor * u^(-1/r) (log u)^(1/(mr))
    hold on [3, u_max].  Converse: re-scans the quasinorm with the tail-adapted
    weight family and fits how ||f||_beta blows up as beta approaches 1/r.
    """
    r = _check_order(r)
    if not (m > 0.0):
        raise ValueError(f"growth index must be positive, got {m!r}")
    context = ctx if ctx is not None else NormContext(cfg)
    phi = power_log(m, 0.0)
    dom = f.natural_domain
    v = v_quasinorm(f, phi, float(r), dom, cfg, cache=context.conjugates(phi, p_lo=4.0))
    if v == 0.0:
        raise DegenerateInputError("function is zero; tail analysis is undefined")
    cap = 8.0 * u_max * v
    sampler = LevelSampler(_CappedAbs(f, cap), dom)
    us = np.geomspace(3.0, u_max, points)
    t = sampler.measure_above_batch(us * v)
    model = us ** (-1.0 / r) * np.log(us) ** (1.0 / (m * r))
    ratios = t / model
    prefactor = float(np.max(ratios))
    max_violation = float(np.max(t - prefactor * model))
    m2 = m / (m * r + 1.0)
    phi2 = power_log(m2, 0.0)
    converse = (
        v_quasinorm(f, phi2, float(r), dom, cfg, cache=context.conjugates(phi2, p_lo=4.0)) / v
    )
    ps = np.array([8.0, 16.0, 32.0, 64.0, 128.0])
    betas = ps / (ps * r + 1.0)
    gaps = 1.0 / r - betas
    norms = np.array([lp_quasinorm(f, float(b), dom, cfg) / v for b in betas])
    slope, _ci = _fit_loglog(gaps, norms)
    return TailReport(
        u_grid=us,
        t_values=t,
        model_values=model,
        prefactor=prefactor,
        max_violation=max_violation,
        normalizer=v,
        converse_norm=converse,
        beta_exponent_measured=slope,
        beta_exponent_model=-(m * r + 1.0) / m,
    )


# ---------------------------------------------------------------------------
# extremal search


def extremal_search(
    phi: PhiSpec,
    n: int,
    restarts: int = 3,
    ctx: NormContext | None = None,
    seed: int = 0,
) -> tuple[PolynomialRep, float]:
    """Best-effort maximizer of the spliced-Orlicz Markov ratio at degree n.

    Coordinate-wise golden ascent on the coefficient unit sphere (the ratio
    is scale invariant), restarted from the ultraspherical seed plus random
    directions; the search runs on a loosened quadrature budget and the
    winner is re-scored at full accuracy, so the returned ratio never falls
    below the re-scored seed.
    """
    if n < 1:
        raise ValueError(f"degree must be at least 1, got {n!r}")
    spec = orlicz_spec(phi)
    search_ctx = NormContext(_SEARCH_CONFIG)
    final_ctx = ctx if ctx is not None else NormContext()

    def score(coeffs, context) -> float:
        rep = PolynomialRep(coeffs)
        if rep.degree < 1:
            return 0.0
        return markov_ratio(rep, spec, ctx=context)

    def unit(c):
        c = np.asarray(c, dtype=float)
        norm = float(np.linalg.norm(c))
        return c / norm if norm > 0 else c

    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(101, n)))
    seeds = [unit(jacobi22(n).coeffs)]
    for _ in range(max(0, restarts - 1)):
        seeds.append(unit(rng.standard_normal(n + 1)))

    golden = (math.sqrt(5.0) - 1.0) / 2.0
    best_c, best_val = seeds[0], -math.inf
    for start in seeds:
        c = start.copy()
        val = score(c, search_ctx)
        for _sweep in range(2):
            for j in range(n + 1):
                a, b = -1.5, 1.5

                def line(t):
                    cand = c.copy()
                    cand[j] += t
                    cand = unit(cand)
                    return score(cand, search_ctx), cand

                x1 = b - golden * (b - a)
                x2 = a + golden * (b - a)
                f1, c1 = line(x1)
                f2, c2 = line(x2)
                for _ in range(8):
                    if f1 < f2:
                        a, x1, f1, c1 = x1, x2, f2, c2
                        x2 = a + golden * (b - a)
                        f2, c2 = line(x2)
                    else:
                        b, x2, f2, c2 = x2, x1, f1, c1
                        x1 = b - golden * (b - a)
                        f1, c1 = line(x1)
                cand_val, cand_c = (f1, c1) if f1 >= f2 else (f2, c2)
                if cand_val > val:
                    val, c = cand_val, cand_c
        if val > best_val:
            best_val, best_c = val, c

    jac = unit(jacobi22(n).coeffs)
    jac_val = score(jac, final_ctx)
    final_val = score(best_c, final_ctx)
    if jac_val > final_val:
        return PolynomialRep(jac), jac_val
    return PolynomialRep(best_c), final_val


# ---------------------------------------------------------------------------
# corpus and equivalence band


def build_corpus(seed: int = 7) -> list[tuple[str, object]]:
    """Fixed evaluation corpus: 30 polynomials, 10 gap products, 10 rationals, 10 trig."""
    corpus: list[tuple[str, object]] = []
    for n in range(1, 31):
        corpus.append((f"poly-{n:02d}", random_family("polynomial", n, seed)))
    for n in range(1, 11):
        corpus.append((f"gap-{n:02d}", random_family("gap", n, seed)))
    for n in range(1, 11):
        corpus.append((f"rational-{n:02d}", random_family("rational", n, seed)))
    for n in range(1, 11):
        corpus.append((f"trig-{n:02d}", random_family("trig", n, seed)))
    return corpus


def small_corpus(seed: int = 7) -> list[tuple[str, object]]:
    """Eight-member slice used by fast module tests."""
    picks = [("polynomial", (1, 3, 7)), ("gap", (2, 4)), ("rational", (2, 5)), ("trig", (3,))]
    out = []
    for kind, degrees in picks:
        for n in degrees:
            out.append((f"{kind}-{n:02d}", random_family(kind, n, seed)))
    return out


@dataclass(frozen=True)
class BandRow:
    label: str
    b_norm: float
    g_norm: float
    log_ratio: float
    lower_ok: bool
    upper_ok: bool
    used_fallback: bool


@dataclass
class BandReport:
    phi_label: str
    rows: list[BandRow]
    violations: int
    fallback_count: int
    empirical_lo: float
    empirical_hi: float
    c3: float
    c4_log: float

    @property
    def clean(self) -> bool:
        return self.violations == 0


def equivalence_band(
    corpus,
    phi: PhiSpec,
    ctx: NormContext | None = None,
    slack: float = 1e-6,
) -> BandReport:
    """Two-sided norm comparison over a corpus with computed constants.

    A member passes when C3^-1 <= B/G <= C4 up to relative ``slack``; the
    slack is load bearing because constant functions land exactly on the
    lower edge.  An upper miss that fits under e^2 * C4 is recorded as a
    fallback, not a violation.
    """
    context = ctx if ctx is not None else NormContext()
    n_func = context.orlicz(phi)
    consts = equivalence_constants(n_func)
    cache = context.conjugates(phi)
    log_slack = math.log1p(slack)
    lo_edge = -math.log(consts.g_over_b)
    rows = []
    violations = 0
    fallback = 0
    ratios = []
    for label, f in corpus:
        b = luxemburg_norm(f, n_func, cfg=context.cfg)
        g = g_norm(f, phi, cfg=context.cfg, cache=cache)
        log_ratio = math.log(b) - math.log(g)
        ratios.append(math.exp(log_ratio))
        lower_ok = log_ratio >= lo_edge - log_slack
        upper_ok = log_ratio <= consts.b_over_g_log + log_slack
        fallback_ok = log_ratio <= 2.0 + consts.b_over_g_log + log_slack
        used_fallback = (not upper_ok) and fallback_ok
        if used_fallback:
            fallback += 1
        if not lower_ok or not fallback_ok:
            violations += 1
        rows.append(BandRow(label, b, g, log_ratio, lower_ok, upper_ok, used_fallback))
    return BandReport(
        phi_label=phi.label,
        rows=rows,
        violations=violations,
        fallback_count=fallback,
        empirical_lo=min(ratios),
        empirical_hi=max(ratios),
        c3=consts.g_over_b,
        c4_log=consts.b_over_g_log,
    )


@dataclass(frozen=True)
class SandwichRow:
    label: str
    restricted_sup: float
    full_sup: float
    factor_displayed: float
    factor_corrected: float

    @property
    def lower_ok(self) -> bool:
        return self.restricted_sup <= self.full_sup * (1.0 + 1e-9)

    @property
    def corrected_ok(self) -> bool:
        return self.full_sup <= self.factor_corrected * self.restricted_sup * (1.0 + 1e-6)

    @property
    def displayed_ok(self) -> bool:
        return self.full_sup <= self.factor_displayed * self.restricted_sup * (1.0 + 1e-6)


def _min_psi(cache: ConjugateCache, p_lo: float, p_hi: float) -> float:
    mask = (cache.grid >= p_lo) & (cache.grid <= p_hi)
    vals = cache.psi_log_grid[mask]
    return math.exp(float(np.min(vals)))


def lyapunov_sandwich(f, phi: PhiSpec, ctx: NormContext | None = None, label: str = "") -> SandwichRow:
    """Relates the full sup-ratio norm to its restriction to exponents >= 4.

    The factor as printed in the source material, max(1, psi(4)), fails on
    constants; the factor max(1, psi(4)/min psi over [1,4]) follows from the
    same moment monotonicity argument and is reported alongside.
    """
    context = ctx if ctx is not None else NormContext()
    cache = context.conjugates(phi)
    cache4 = context.conjugates(phi, p_lo=4.0)
    restricted = sup_ratio_from(f, phi, 4.0, cfg=context.cfg, cache=cache4)
    full = g_norm(f, phi, cfg=context.cfg, cache=cache)
    psi4 = psi(phi, 4.0)
    corrected = max(1.0, psi4 / _min_psi(cache, 1.0, 4.0))
    return SandwichRow(label, restricted, full, max(1.0, psi4), corrected)


@dataclass
class ThreeWayReport:
    """Pairwise ratio ranges between the Orlicz, sup-ratio, and Lorentz-sup norms."""

    columns: tuple[str, ...]
    values: dict[str, dict[str, float]]
    ranges: dict[str, tuple[float, float]]


def three_way_report(corpus, phi: PhiSpec, bs=(1.0, 2.0, math.inf), ctx: NormContext | None = None) -> ThreeWayReport:
    context = ctx if ctx is not None else NormContext()
    n_func = context.orlicz(phi)
    cache = context.conjugates(phi)
    cols = ["orlicz", "gnorm"] + [f"lorentz-g(b={b:g})" for b in bs]
    values: dict[str, dict[str, float]] = {}
    for label, f in corpus:
        row = {
            "orlicz": luxemburg_norm(f, n_func, cfg=context.cfg),
            "gnorm": g_norm(f, phi, cfg=context.cfg, cache=cache),
        }
        for b in bs:
            row[f"lorentz-g(b={b:g})"] = weighted_lorentz_g(f, phi, b, cfg=context.cfg, cache=cache)
        values[label] = row
    ranges = {}
    for i, ci in enumerate(cols):
        for cj in cols[i + 1 :]:
            rs = [values[lb][ci] / values[lb][cj] for lb in values]
            ranges[f"{ci}/{cj}"] = (min(rs), max(rs))
    return ThreeWayReport(tuple(cols), values, ranges)
