"""Inequality harness: constants, sweeps, rational checks, tails, corpus."""

import math

import numpy as np
import pytest

from orlimark.conjugate import power_log
from orlimark.errors import DegenerateInputError, RejectedInputError
from orlimark.functions import (
    GapRep,
    InversePowerRep,
    PolynomialRep,
    RationalRep,
    TrigPolynomialRep,
    jacobi22,
)
from orlimark.harness import (
    bernstein_trig_check,
    build_corpus,
    d_constant,
    d_constant_log,
    equivalence_band,
    extremal_search,
    gap_check,
    k_constant,
    lp_rational_check,
    lyapunov_sandwich,
    markov_ratio,
    markov_sweep,
    rational_orlicz_check,
    scaled_rational_family,
    small_corpus,
    tail_check,
    markov_factor_log,
    three_way_report,
)
from orlimark.norms import evaluate_norm, lp_spec, orlicz_spec


def sin_n(n: int) -> TrigPolynomialRep:
    b = np.zeros(n)
    b[n - 1] = 1.0
    return TrigPolynomialRep(np.zeros(n + 1), b)


class TestConstants:
    def test_k4_closed_form(self):
        assert k_constant(4.0) == pytest.approx((49.0 * math.pi) ** 0.25, rel=1e-14)

    def test_k_formula(self):
        p = 6.0
        expect = (4.0 * math.pi * (p + 3.0) ** 2 / (p * math.sin(2.0 * math.pi / p))) ** (1.0 / p)
        assert k_constant(p) == pytest.approx(expect, rel=1e-14)

    def test_k_requires_p_above_two(self):
        with pytest.raises(ValueError):
            k_constant(2.0)

    def test_d_constant_formula(self):
        r = 1
        expect = math.exp(1.0 / math.e) * math.factorial(r) * (4.0 / 3.0) ** (r + 0.25) * (r + 0.25) ** (r + 0.25)
        assert d_constant(r) == pytest.approx(expect, rel=1e-12)

    def test_d_constant_log_consistent(self):
        for r in (1, 2, 3, 10):
            assert d_constant_log(r) == pytest.approx(math.log(d_constant(r)), rel=1e-12)

    def test_d_constant_rejects_bad_order(self):
        with pytest.raises(ValueError):
            d_constant(0)
        with pytest.raises(ValueError):
            d_constant(1.5)


class TestMarkovRatio:
    def test_l2_jacobi2_oracle(self, ctx):
        # ||d/dx (2x^2-1)||_2 / ||2x^2-1||_2 = 4 sqrt(5/7)
        got = markov_ratio(PolynomialRep([-1.0, 0.0, 2.0]), lp_spec(2.0), ctx=ctx)
        assert got == pytest.approx(4.0 * math.sqrt(5.0 / 7.0), rel=1e-10)

    def test_scale_invariance(self, phi2, ctx):
        f = jacobi22(4)
        g = PolynomialRep([1e3 * c for c in f.coeffs])
        a = markov_ratio(f, orlicz_spec(phi2), ctx=ctx)
        b = markov_ratio(g, orlicz_spec(phi2), ctx=ctx)
        assert b == pytest.approx(a, rel=1e-8)

    def test_zero_rejected(self, ctx):
        with pytest.raises(DegenerateInputError):
            markov_ratio(PolynomialRep([0.0]), lp_spec(2.0), ctx=ctx)


class TestMarkovSweep:
    def test_l4_jacobi_small(self, phi2, ctx):
        rep = markov_sweep(phi2, "jacobi22", range(2, 9), norm=lp_spec(4.0), ctx=ctx)
        assert len(rep.rows) == 7
        assert rep.min_margin > 0.0
        assert rep.c5_estimate > 0.0
        assert rep.slope_ci[0] <= rep.slope <= rep.slope_ci[1]

    def test_orlicz_bound_uses_markov_factor(self, phi2, ctx):
        rep = markov_sweep(phi2, "jacobi22", range(2, 7), norm=orlicz_spec(phi2), ctx=ctx)
        expect_log = markov_factor_log(phi2, ctx)
        for row in rep.rows:
            assert math.log(row.bound) == pytest.approx(expect_log + 2.0 * math.log(row.n), rel=1e-12)
            assert row.ratio <= row.bound

    def test_other_families_run(self, phi2, ctx):
        for family in ("chebyshev", "random-poly"):
            rep = markov_sweep(phi2, family, range(2, 7), norm=lp_spec(4.0), ctx=ctx, seed=5)
            assert all(r.ratio > 0.0 for r in rep.rows)
            assert rep.min_margin > 0.0


class TestBernsteinTrig:
    def test_sine_equality(self, ctx):
        for n in (1, 5, 12):
            q = sin_n(n)
            margin = bernstein_trig_check(q, lp_spec(2.0), ctx=ctx)
            bound = n * evaluate_norm(q, lp_spec(2.0), ctx=ctx)
            assert abs(margin) <= 1e-8 * max(bound, 1.0)

    def test_random_trig_orlicz(self, phi2, ctx):
        rng = np.random.default_rng(2)
        for n in (3, 8):
            q = TrigPolynomialRep(rng.standard_normal(n + 1), rng.standard_normal(n))
            dnorm = evaluate_norm(q.derivative(), orlicz_spec(phi2), ctx=ctx)
            margin = bernstein_trig_check(q, orlicz_spec(phi2), ctx=ctx)
            assert margin >= -1e-8 * dnorm

    def test_constant_is_exact_zero(self, ctx):
        q = TrigPolynomialRep([3.0], [])
        assert bernstein_trig_check(q, lp_spec(2.0), ctx=ctx) == 0.0


class TestRationalChecks:
    def test_lp_margin_positive(self):
        q = RationalRep([1.0], [1.0, 0.0, 1.0])
        chk = lp_rational_check(q, 4.0, 1)
        assert chk.margin > 0.0
        assert chk.gamma == pytest.approx(0.8)

    def test_polynomial_as_rational(self):
        q = RationalRep([0.0, 1.0, 2.0], [1.0])
        chk = lp_rational_check(q, 4.0, 1)
        assert chk.margin > 0.0

    def test_requires_p_at_least_four(self):
        q = RationalRep([1.0], [1.0, 0.0, 1.0])
        with pytest.raises(ValueError):
            lp_rational_check(q, 3.0, 1)

    def test_pole_rejection(self):
        q = RationalRep([1.0], [-0.25, 0.0, 1.0])
        with pytest.raises(RejectedInputError):
            lp_rational_check(q, 4.0, 1)

    def test_orlicz_margin_positive(self, phi2, ctx):
        q = RationalRep([1.0], [2.0, 0.0, 1.0])
        chk = rational_orlicz_check(q, phi2, 1, ctx=ctx)
        assert chk.margin > 0.0
        assert math.isfinite(chk.lhs)

    def test_degree_scaling_grows_margin(self, phi2, ctx):
        base_num = PolynomialRep([1.0])
        den = PolynomialRep([2.0, 0.0, 1.0])
        fam = [scaled_rational_family(base_num, den, n) for n in (1, 2, 3)]
        margins = [rational_orlicz_check(q, phi2, 1, ctx=ctx).margin for q in fam]
        assert margins == sorted(margins)


class TestGapCheck:
    def test_scaled_ratio_bounded(self):
        base = GapRep([(0.3, 0.5, 2.0), (-0.6, 1.0, 2.0)])
        rep = gap_check(base, 4.0, [4, 6, 8, 12, 16, 20])
        assert math.isfinite(rep.max_scaled)
        # boundedness shows as a non-growing trend; powered copies of a fixed
        # base approach linear ratio growth so decay is expected
        assert rep.trend_slope <= 0.1

    def test_single_smooth_factor(self):
        rep = gap_check(GapRep([(0.0, 2.0, 1.0)]), 2.0, [1, 2, 3, 4, 5])
        assert all(math.isfinite(r.ratio) for r in rep.rows)

    def test_exponent_below_start_rejected(self):
        # scaling a mixed-exponent product down to degree 2 would push the
        # unit factor below order 1
        base = GapRep([(0.0, 1.0, 1.0), (0.5, 1.0, 2.0)])
        with pytest.raises(ValueError):
            gap_check(base, 2.0, [2, 6])


class TestTail:
    def test_forward_and_converse(self, ctx):
        rep = tail_check(InversePowerRep(0.5), m=2.0, r=1, u_max=200.0, points=25, ctx=ctx)
        assert math.isfinite(rep.prefactor) and rep.prefactor > 0.0
        assert rep.max_violation <= 1e-12
        assert math.isfinite(rep.converse_norm) and rep.converse_norm > 0.0
        assert rep.beta_exponent_model == pytest.approx(-1.5)

    def test_bounded_function_trivial_tail(self, ctx):
        rep = tail_check(PolynomialRep([0.0, 1.0]), m=2.0, r=1, u_max=50.0, points=13, ctx=ctx)
        # T vanishes past the (normalized) sup, so any prefactor works
        assert rep.max_violation <= 1e-12


class TestExtremal:
    def test_beats_jacobi_seed(self, phi2, ctx):
        poly, value = extremal_search(phi2, 5, restarts=1, ctx=ctx, seed=0)
        seeded = markov_ratio(jacobi22(5), orlicz_spec(phi2), ctx=ctx)
        assert value >= seeded - 1e-6
        assert poly.degree == 5

    def test_value_below_markov_factor_bound(self, phi2, ctx):
        _poly, value = extremal_search(phi2, 3, restarts=1, ctx=ctx, seed=1)
        bound = math.exp(markov_factor_log(phi2, ctx)) * 9.0
        assert value <= bound

    def test_degree_one_prefers_odd(self, phi2, ctx):
        # symmetric norms push the constant term of the maximizer to zero
        poly, _value = extremal_search(phi2, 1, restarts=3, ctx=ctx, seed=4)
        c = np.asarray(poly.coeffs)
        assert abs(c[0]) <= 0.2 * abs(c[1])

    def test_deterministic(self, phi2, ctx):
        a = extremal_search(phi2, 2, restarts=2, ctx=ctx, seed=9)[1]
        b = extremal_search(phi2, 2, restarts=2, ctx=ctx, seed=9)[1]
        assert a == b


class TestCorpus:
    def test_build_corpus_composition(self):
        corpus = build_corpus(seed=7)
        assert len(corpus) == 60
        labels = [lbl for lbl, _f in corpus]
        assert len(set(labels)) == 60
        assert sum(1 for lbl in labels if lbl.startswith("poly")) == 30
        assert sum(1 for lbl in labels if lbl.startswith("gap")) == 10
        assert sum(1 for lbl in labels if lbl.startswith("rational")) == 10
        assert sum(1 for lbl in labels if lbl.startswith("trig")) == 10

    def test_corpus_deterministic(self):
        a = build_corpus(seed=7)
        b = build_corpus(seed=7)
        assert all(fa == fb for (_la, fa), (_lb, fb) in zip(a, b))

    def test_small_corpus(self):
        assert len(small_corpus(seed=7)) == 8


class TestEquivalenceBand:
    def test_small_corpus_clean(self, phi2, ctx):
        band = equivalence_band(small_corpus(seed=7), phi2, ctx=ctx)
        assert band.clean
        assert band.violations == 0
        assert band.empirical_lo >= 1.0 / band.c3 - 1e-6

    def test_rows_report_both_edges(self, phi2, ctx):
        band = equivalence_band(small_corpus(seed=7), phi2, ctx=ctx)
        for row in band.rows:
            assert row.lower_ok and row.upper_ok
            assert row.b_norm > 0.0 and row.g_norm > 0.0


class TestSandwich:
    def test_displayed_factor_fails_on_constants(self, phi2, ctx):
        # the constant function is the equality case that breaks the
        # displayed factor max(1, psi(4)) < 1/psi(1); the corrected factor
        # max(1, psi(4)/min psi) holds with near equality
        row = lyapunov_sandwich(PolynomialRep([1.0]), phi2, ctx=ctx, label="one")
        assert row.lower_ok
        assert not row.displayed_ok
        assert row.corrected_ok
        assert row.factor_corrected == pytest.approx(2.0, rel=1e-6)

    def test_generic_member_within_corrected(self, phi2, ctx):
        row = lyapunov_sandwich(PolynomialRep([0.1, 1.0, -0.4]), phi2, ctx=ctx)
        assert row.lower_ok and row.corrected_ok


def test_three_way_report_shape(phi2, ctx):
    rep = three_way_report(small_corpus(seed=7)[:4], phi2, bs=(1.0, math.inf), ctx=ctx)
    assert "orlicz" in rep.columns and "gnorm" in rep.columns
    for _pair, (lo, hi) in rep.ranges.items():
        assert 0.0 < lo <= hi < math.inf
