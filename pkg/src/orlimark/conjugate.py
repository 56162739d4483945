"""Growth functions phi, their log-reparametrization h, and conjugates.

The admissible class consists of phi with phi(0) = 0 whose reparametrization
h(y) = phi(e^y) is strictly increasing and convex and whose consecutive gaps
h(k+1) - h(k) grow fast enough that sum_k exp(h(k) - h(k+1)) converges.  Two
built-in families cover the use cases:

* power_log(m, r):  phi(z) = z^m * log(exp(m + |r|) + z)^(-m r).  With r = 0
  this is exactly z^m, for which every conjugate quantity has a closed form
  used as a test oracle.
* log_power(nu):    phi(z) = log(1 + z)^(1 + nu), nu > 0.

The Young-Fenchel transform h*(p) = sup_y (p y - h(y)) is computed by
expanding a bracket around the concave objective until it encloses the
maximum and then polishing by golden section.  psi(p) = exp(h*(p) / p) is the
weight the sup-based norms divide by; it is nondecreasing for admissible phi
because h*(0) = 0 and h* is convex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConjugateDivergenceError, SummabilityError

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PhiSpec:
    family: str
    m: float = math.nan
    r: float = math.nan
    nu: float = math.nan
    fn: object = None
    table: tuple = None

    @property
    def label(self) -> str:
        if self.family == "power-log":
            return f"power-log(m={self.m:g},r={self.r:g})"
        if self.family == "log-power":
            return f"log-power(nu={self.nu:g})"
        if self.family == "tabulated":
            return f"tabulated({len(self.table[0])} points)"
        return "custom"

    # -- pointwise evaluation ------------------------------------------------

    def phi(self, z):
        zs = np.asarray(z, dtype=float)
        if self.family == "power-log":
            a = self.m + abs(self.r)
            lg = np.log(math.exp(a) + zs)
            with np.errstate(over="ignore"):
                return zs**self.m * lg ** (-self.m * self.r)
        if self.family == "log-power":
            return np.log1p(zs) ** (1.0 + self.nu)
        if self.family == "custom":
            return np.asarray(self.fn(zs), dtype=float)
        return self._table_h(_safe_log(zs))

    def h(self, y):
        """phi(e^y), evaluated in a way that stays stable for large |y|."""
        ys = np.asarray(y, dtype=float)
        if self.family == "power-log":
            lg = np.logaddexp(self.m + abs(self.r), ys)  # log(e^(m+|r|) + e^y)
            with np.errstate(over="ignore"):
                return np.exp(self.m * ys - self.m * self.r * np.log(lg))
        if self.family == "log-power":
            soft = np.where(ys > 30.0, ys, np.log1p(np.exp(np.minimum(ys, 30.0))))
            return soft ** (1.0 + self.nu)
        if self.family == "custom":
            with np.errstate(over="ignore"):
                return np.asarray(self.fn(np.exp(ys)), dtype=float)
        return self._table_h(ys)

    def _table_h(self, ys):
        ys = np.asarray(ys, dtype=float)
        ty, th = self.table
        ty = np.asarray(ty)
        th = np.asarray(th)
        out = np.interp(ys, ty, th)
        # linear continuation by the edge slopes; clamp at zero below
        s_lo = (th[1] - th[0]) / (ty[1] - ty[0])
        s_hi = (th[-1] - th[-2]) / (ty[-1] - ty[-2])
        below = ys < ty[0]
        above = ys > ty[-1]
        out = np.where(below, th[0] + s_lo * (ys - ty[0]), out)
        out = np.where(above, th[-1] + s_hi * (ys - ty[-1]), out)
        return np.maximum(out, 0.0)

    def dphi(self, z):
        zs = np.asarray(z, dtype=float)
        if self.family == "power-log":
            m, r = self.m, self.r
            a = math.exp(m + abs(r))
            lg = np.log(a + zs)
            return m * zs ** (m - 1.0) * lg ** (-m * r) * (1.0 - r * zs / (lg * (a + zs)))
        if self.family == "log-power":
            return (1.0 + self.nu) * np.log1p(zs) ** self.nu / (1.0 + zs)
        step = np.maximum(1e-7 * np.abs(zs), 1e-9)
        lo = np.maximum(zs - step, 0.0)
        return (self.phi(zs + step) - self.phi(lo)) / (zs + step - lo)


def _safe_log(zs):
    with np.errstate(divide="ignore"):
        return np.log(zs)


def power_log(m: float, r: float = 0.0) -> PhiSpec:
    if not (m > 0.0):
        raise ValueError("m must be positive")
    return PhiSpec("power-log", m=float(m), r=float(r))


def log_power(nu: float) -> PhiSpec:
    if not (nu > 0.0):
        raise ValueError("nu must be positive")
    return PhiSpec("log-power", nu=float(nu))


def custom_phi(fn) -> PhiSpec:
    return PhiSpec("custom", fn=fn)


def tabulated_phi(zs, phis) -> PhiSpec:
    """Tabulated curve (z_i, phi_i); piecewise linear in y = log z.

    Validation requires strictly increasing z and phi and nondecreasing chord
    slopes in y, which preserves convexity of h on the table span.
    """
    zs = [float(v) for v in zs]
    phis = [float(v) for v in phis]
    if len(zs) != len(phis) or len(zs) < 2:
        raise ValueError("need at least two (z, phi) pairs of equal length")
    if any(z <= 0 for z in zs):
        raise ValueError("tabulated z values must be positive")
    if any(zs[i + 1] <= zs[i] for i in range(len(zs) - 1)):
        raise ValueError("tabulated z values must increase strictly")
    if any(phis[i + 1] <= phis[i] for i in range(len(phis) - 1)):
        raise ValueError("tabulated phi values must increase strictly")
    ty = [math.log(z) for z in zs]
    slopes = [
        (phis[i + 1] - phis[i]) / (ty[i + 1] - ty[i]) for i in range(len(ty) - 1)
    ]
    if any(slopes[i + 1] < slopes[i] - 1e-12 for i in range(len(slopes) - 1)):
        raise ValueError("tabulated curve is not convex in log z")
    return PhiSpec("tabulated", table=(tuple(ty), tuple(phis)))


def h_eval(phi: PhiSpec, y):
    return phi.h(y)


@dataclass
class MembershipReport:
    monotone: bool
    convex: bool
    summable: bool
    partial_sum: float
    tail_bound: float
    detail: str = ""

    @property
    def admissible(self) -> bool:
        return self.monotone and self.convex and self.summable


def phi_membership_check(
    phi: PhiSpec,
    y_lo: float = -30.0,
    y_hi: float = 30.0,
    grid: int = 601,
    k_max: int = 200,
) -> MembershipReport:
    """Certify admissibility on a bounded window plus a series horizon.

    Monotonicity and convexity are checked on a y-grid (second differences
    above -1e-9 after scaling).  Summability is certified when the series
    terms either underflow outright or the last 20 term ratios all fall at
    or below one half, which bounds the tail by a geometric series.
    """
    ys = np.linspace(y_lo, y_hi, grid)
    hv = phi.h(ys)
    finite = np.isfinite(hv)
    ys = ys[finite]
    hv = hv[finite]
    if ys.size < 8:
        return MembershipReport(False, False, False, math.nan, math.nan, "h not finite on window")
    d1 = np.diff(hv)
    monotone = bool(np.all(d1 > 0.0))
    scale = np.maximum.accumulate(np.maximum(np.abs(hv[:-2]), 1.0))
    d2 = hv[2:] - 2.0 * hv[1:-1] + hv[:-2]
    convex = bool(np.all(d2 >= -1e-9 * scale))

    terms = []
    partial = 0.0
    summable = False
    tail_bound = math.inf
    detail = ""
    for k in range(3, k_max + 1):
        hk = float(phi.h(np.array([float(k)]))[0])
        hk1 = float(phi.h(np.array([float(k + 1)]))[0])
        if not (math.isfinite(hk) and math.isfinite(hk1)):
            gap = -math.inf  # h overflowed: gaps this deep dwarf the float range
        else:
            gap = hk - hk1
        term = math.exp(gap) if gap > -745.0 else 0.0
        partial += term
        terms.append(term)
        if term < 1e-300:
            summable = True
            tail_bound = 0.0
            detail = f"terms vanish beyond k = {k}"
            break
    if not summable and len(terms) >= 21:
        last = terms[-20:]
        ratios = [last[i + 1] / last[i] if last[i] > 0 else 0.0 for i in range(19)]
        if all(rho <= 0.5 for rho in ratios):
            summable = True
            tail_bound = terms[-1]  # geometric with ratio <= 1/2: tail <= last term
            partial += tail_bound
            detail = "geometric tail certified at horizon"
        else:
            detail = f"term ratios near horizon reach {max(ratios):.3f}"
    return MembershipReport(monotone, convex, summable, partial, tail_bound, detail)


def _golden_max(obj, a, b, tol=1e-12, iters=200):
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1 = obj(x1)
    f2 = obj(x2)
    for _ in range(iters):
        if b - a <= tol * (1.0 + abs(a) + abs(b)):
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = obj(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = obj(x1)
    if f1 >= f2:
        return x1, f1
    return x2, f2


def young_fenchel(
    phi: PhiSpec,
    p: float,
    p_min: float = 0.5,
    y0: float = 0.0,
    step0: float = 1.0,
    tol: float = 1e-12,
) -> float:
    """h*(p) = sup_y (p y - h(y)) for p >= p_min.

    The objective is concave, so doubling steps away from y0 until the value
    drops on both sides encloses the maximum.  If the objective is still
    rising after the expansion cap, the supremum sits at infinity for this p
    and a divergence error names the offending phi.
    """
    if not (p >= p_min):
        raise ValueError(f"p = {p!r} below the allowed minimum {p_min!r}")

    def obj(y: float) -> float:
        hv = float(phi.h(np.array([y]))[0])
        if math.isnan(hv):
            return -math.inf
        return p * y - hv

    f0 = obj(y0)
    # expand right
    step = step0
    yr, fr = y0, f0
    rising = True
    for _ in range(200):
        cand = yr + step
        fc = obj(cand)
        if fc > fr:
            yr, fr = cand, fc
            step *= 2.0
        else:
            rising = False
            hi = cand
            break
        if abs(cand) > 1e9:
            break
    if rising:
        raise ConjugateDivergenceError(
            f"conjugate supremum for {phi.label} diverges at p = {p!r}"
        )
    # expand left
    step = step0
    yl, fl = y0, f0
    falling_left = True
    for _ in range(200):
        cand = yl - step
        fc = obj(cand)
        if fc > fl:
            yl, fl = cand, fc
            step *= 2.0
        else:
            falling_left = False
            lo = cand
            break
        if abs(cand) > 1e9:
            break
    if falling_left:
        lo = yl - step
    _y, val = _golden_max(obj, lo, hi, tol=tol)
    best = max(val, fr, fl, f0)
    return best


def young_fenchel_or_inf(phi: PhiSpec, p: float, **kw) -> float:
    """Scan-friendly variant: divergence collapses to +inf instead of raising."""
    try:
        return young_fenchel(phi, p, **kw)
    except ConjugateDivergenceError:
        return math.inf


def psi_log(phi: PhiSpec, p: float) -> float:
    return young_fenchel(phi, p) / p


def psi(phi: PhiSpec, p: float) -> float:
    """exp(h*(p)/p), the weight dividing ||f||_p in the sup-based norms."""
    return math.exp(psi_log(phi, p))


@dataclass
class ConjugateCache:
    """Conjugate values precomputed on a geometric p-grid.

    Grid density is 64 points per decade.  Scans read the exact grid values;
    arbitrary p in between interpolate linearly in log p, and asserted values
    are always recomputed exactly via young_fenchel.
    """

    phi: PhiSpec
    p_lo: float = 1.0
    p_hi: float = 1024.0
    per_decade: int = 64
    grid: np.ndarray = field(init=False, repr=False)
    hstar: np.ndarray = field(init=False, repr=False)
    psi_log_grid: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self._build(self.p_lo, self.p_hi)

    def _build(self, p_lo, p_hi):
        decades = math.log10(p_hi / p_lo)
        count = max(2, int(round(decades * self.per_decade)) + 1)
        grid = np.geomspace(p_lo, p_hi, count)
        hstar = np.array([young_fenchel_or_inf(self.phi, float(p)) for p in grid])
        object.__setattr__(self, "p_lo", float(p_lo))
        object.__setattr__(self, "p_hi", float(p_hi))
        self.grid = grid
        self.hstar = hstar
        with np.errstate(invalid="ignore"):
            self.psi_log_grid = hstar / grid
        self._check_convexity()

    def _check_convexity(self):
        finite = np.isfinite(self.hstar)
        g = self.grid[finite]
        v = self.hstar[finite]
        if g.size < 3:
            return
        slopes = np.diff(v) / np.diff(g)
        scale = np.maximum(np.abs(v[1:-1]), 1.0)
        if np.any(np.diff(slopes) < -1e-9 * scale):
            raise SummabilityError(
                f"conjugate of {self.phi.label} is not convex on the grid; "
                "phi is outside the admissible class"
            )

    def extend(self, factor: float = 4.0):
        self._build(self.p_lo, self.p_hi * factor)

    def psi_log_at(self, p: float) -> float:
        """Interpolated log psi; exact at grid points."""
        return float(np.interp(math.log(p), np.log(self.grid), self.psi_log_grid))


def fenchel_moreau_check(phi: PhiSpec, ys, p_lo: float = 1e-6, p_hi: float = 4096.0) -> float:
    """Max relative deviation of the biconjugate from h on the given y values.

    For convex h the biconjugate reproduces h exactly; the returned deviation
    is therefore a direct measure of conjugate-transform numerics.
    """
    worst = 0.0
    for y in np.asarray(ys, dtype=float):
        hv = float(phi.h(np.array([y]))[0])

        def obj(t: float) -> float:
            p = math.exp(t)
            return p * y - young_fenchel_or_inf(phi, p, p_min=0.0)

        # concave in p; search over log p with golden section after a coarse
        # scan, widening the window whenever the maximizer sits on its edge
        hi_p = p_hi
        while True:
            ts = np.linspace(math.log(p_lo), math.log(hi_p), 120)
            vals = np.array([obj(t) for t in ts])
            k = int(np.argmax(vals))
            if k < len(ts) - 2 or hi_p >= 1e12:
                break
            hi_p *= 256.0
        lo = ts[max(0, k - 1)]
        hi = ts[min(len(ts) - 1, k + 1)]
        _t, biconj = _golden_max(obj, lo, hi, tol=1e-13)
        biconj = max(biconj, float(np.max(vals)))
        dev = abs(biconj - hv) / max(abs(hv), 1e-12)
        worst = max(worst, dev)
    return worst
