"""Norm layer: N-splice, Luxemburg, grand-Lebesgue scans, Lorentz, V, constants."""

import math

import numpy as np
import pytest

from orlimark.conjugate import power_log
from orlimark.errors import ScanDivergenceError
from orlimark.functions import InversePowerRep, PolynomialRep
from orlimark.norms import (
    EquivalenceConstants,
    NormContext,
    construct_N,
    equivalence_constants,
    evaluate_norm,
    g_norm,
    g_norm_info,
    gnorm_spec,
    lorentz_norm,
    lorentz_spec,
    lp_spec,
    luxemburg_norm,
    orlicz_spec,
    v_quasinorm,
    v_quasinorm_info,
    vnorm_spec,
    weighted_lorentz_g,
)
from orlimark.norms import _luxemburg_detail
from orlimark.quadrature import DEFAULT_CONFIG, Domain, integrate, lp_quasinorm

INTERVAL = Domain.interval()

# closed-form splice constants: C1 solves u phi'(u) = 1, C2 = exp(phi(C1))/C1
PHI2_C1 = 1.0 / math.sqrt(2.0)
PHI2_C2 = 2.3316439815971246
PHI1_C1 = 1.0
PHI1_C2 = math.e


class TestSplice:
    def test_phi2_constants(self, phi2):
        n = construct_N(phi2)
        assert n.splice_point == pytest.approx(PHI2_C1, rel=1e-10)
        assert n.linear_slope == pytest.approx(PHI2_C2, rel=1e-10)

    def test_phi1_constants(self, phi1):
        n = construct_N(phi1)
        assert n.splice_point == pytest.approx(PHI1_C1, rel=1e-10)
        assert n.linear_slope == pytest.approx(PHI1_C2, rel=1e-10)

    def test_n_properties(self, phi2):
        n = construct_N(phi2)
        us = np.linspace(1e-6, 5.0, 200)
        vals = n.n_eval(us)
        # N(u)/u nondecreasing and midpoint convexity on the sample grid
        slopes = vals / us
        assert np.all(np.diff(slopes) >= -1e-9)
        mid = n.n_eval((us[:-1] + us[1:]) / 2.0)
        assert np.all(mid <= (vals[:-1] + vals[1:]) / 2.0 + 1e-9)

    def test_no_overflow_for_huge_arguments(self, phi2):
        n = construct_N(phi2)
        # log N stays finite-valued arithmetic even when u = exp(1e6)
        out = n.n_log_from_log_u(np.array([1e6]))
        assert np.isfinite(out).all() or np.all(out > 0)


class TestLuxemburg:
    def test_constant_hits_linear_branch(self, phi2, ctx):
        # B(1) = C2 exactly: the modular of a constant solves on the chord
        n = ctx.orlicz(phi2)
        assert luxemburg_norm(PolynomialRep([1.0]), n) == pytest.approx(PHI2_C2, rel=1e-9)

    def test_zero(self, phi2, ctx):
        assert luxemburg_norm(PolynomialRep([0.0]), ctx.orlicz(phi2)) == 0.0

    def test_defining_property(self, phi2, ctx):
        # at the returned l*, the modular must sit within 1e-6 of one
        n = ctx.orlicz(phi2)
        f = PolynomialRep([0.3, 1.0, -0.7])
        value, residual, ok = _luxemburg_detail(f, n, INTERVAL, DEFAULT_CONFIG)
        assert ok
        modular = integrate(lambda x: n.n_eval(np.abs(f(x)) / value), INTERVAL)
        assert 1.0 - 1e-6 <= modular <= 1.0 + 1e-6

    def test_residual_postcondition(self, phi2, ctx):
        n = ctx.orlicz(phi2)
        for coeffs in ([1.0, 2.0], [0.0, 0.0, 5.0], [2.0, -1.0, 0.5, 0.25]):
            _value, residual, ok = _luxemburg_detail(
                PolynomialRep(coeffs), n, INTERVAL, DEFAULT_CONFIG
            )
            assert ok
            assert abs(residual) <= 1e-8

    def test_fast_orlicz_function(self, ctx):
        # phi_{4,0} makes the modular explode far from the root; the solver
        # must still converge through the sign-only fallback
        phi4 = power_log(4.0)
        n = ctx.orlicz(phi4)
        value = luxemburg_norm(PolynomialRep([0.0, 0.0, 3.0]), n)
        assert value > 0.0


class TestGNorm:
    def test_constant_value(self, phi2, ctx):
        # G(1) = 1/psi(1) = C2 by the tangency identity
        got = g_norm(PolynomialRep([1.0]), phi2, cache=ctx.conjugates(phi2))
        assert got == pytest.approx(PHI2_C2, rel=1e-6)

    def test_scan_result_fields(self, phi2, ctx):
        info = g_norm_info(PolynomialRep([0.0, 1.0]), phi2, cache=ctx.conjugates(phi2))
        assert info.value > 0.0
        assert info.p_star >= 1.0
        assert info.tolerance_met

    def test_scan_winner_is_consistent(self, phi2, ctx):
        f = PolynomialRep([0.5, 0.0, 1.0])
        info = g_norm_info(f, phi2, cache=ctx.conjugates(phi2))
        from orlimark.conjugate import psi_log

        direct = lp_quasinorm(f, info.p_star, INTERVAL) * math.exp(-psi_log(phi2, info.p_star))
        assert info.value == pytest.approx(direct, rel=1e-9)

    def test_zero(self, phi2, ctx):
        assert g_norm(PolynomialRep([0.0]), phi2, cache=ctx.conjugates(phi2)) == 0.0

    def test_divergent_scan_raises(self, phi2, ctx):
        # (1-x)^{-0.3} has ||f||_p = inf for p >= 10/3, so the sup diverges
        with pytest.raises(ScanDivergenceError):
            g_norm(InversePowerRep(0.3), phi2, cache=ctx.conjugates(phi2))


class TestVQuasinorm:
    def test_constant_value(self, phi2, ctx):
        # V(1) = 1/psi(4): beta(p) -> sup at the left endpoint p = 4
        expect = 1.1658219907985623
        got = v_quasinorm(PolynomialRep([1.0]), phi2, 1.0, cache=ctx.conjugates(phi2, p_lo=4.0))
        assert got == pytest.approx(expect, rel=1e-6)

    def test_info_fields(self, phi2, ctx):
        info = v_quasinorm_info(
            PolynomialRep([0.0, 1.0]), phi2, 1.0, cache=ctx.conjugates(phi2, p_lo=4.0)
        )
        assert info.value > 0.0
        assert info.p_star >= 4.0
        assert info.tolerance_met

    def test_singular_member_finite(self, phi2, ctx):
        # (1-x)^{-1/2} with r=1: beta(p) < 1 keeps every scanned norm finite
        got = v_quasinorm(InversePowerRep(0.5), phi2, 1.0, cache=ctx.conjugates(phi2, p_lo=4.0))
        assert math.isfinite(got) and got > 0.0


class TestLorentz:
    def test_diagonal_matches_lp(self):
        f = PolynomialRep([0.0, 1.0])
        for p in (1.0, 2.0, 3.0):
            expect = (1.0 / (p + 1.0)) ** (1.0 / p)
            assert lorentz_norm(f, p, p) == pytest.approx(expect, rel=1e-6)

    def test_constant_all_parameters(self):
        f = PolynomialRep([2.0])
        for b in (1.0, 2.0, math.inf):
            assert lorentz_norm(f, 2.0, b) == pytest.approx(2.0, rel=1e-6)

    def test_sup_variant(self):
        f = PolynomialRep([0.0, 1.0])
        # sup_x x * (1-x)^{1/2} at x = 2/3
        expect = (2.0 / 3.0) * (1.0 / 3.0) ** 0.5
        assert lorentz_norm(f, 2.0, math.inf) == pytest.approx(expect, rel=1e-6)

    def test_zero(self):
        assert lorentz_norm(PolynomialRep([0.0]), 2.0, 1.0) == 0.0


class TestWeightedLorentzG:
    def test_constant(self, phi2, ctx):
        got = weighted_lorentz_g(PolynomialRep([1.0]), phi2, 1.0, cache=ctx.conjugates(phi2))
        assert got == pytest.approx(PHI2_C2, rel=1e-4)

    def test_zero(self, phi2, ctx):
        assert weighted_lorentz_g(PolynomialRep([0.0]), phi2, 2.0, cache=ctx.conjugates(phi2)) == 0.0

    def test_positive_on_generic_member(self, phi2, ctx):
        got = weighted_lorentz_g(
            PolynomialRep([0.5, -1.0, 2.0]), phi2, 2.0, cache=ctx.conjugates(phi2)
        )
        assert math.isfinite(got) and got > 0.0


class TestEquivalenceConstants:
    def test_phi2_frozen_values(self, phi2, ctx):
        consts = equivalence_constants(ctx.orlicz(phi2), cache=ctx.conjugates(phi2))
        assert isinstance(consts, EquivalenceConstants)
        assert consts.g_over_b == pytest.approx(1.0, rel=1e-12)
        assert consts.b_over_g_log == pytest.approx(405.4287934927351, rel=1e-9)
        assert consts.split_index == pytest.approx(5.0, rel=1e-6)
        # both series underflow to zero: first gap is h(5)-h(6) ~ -1e5
        assert consts.series_sum == 0.0
        assert consts.series_sum_alt == 0.0

    def test_exponential_form(self, phi2, ctx):
        consts = equivalence_constants(ctx.orlicz(phi2), cache=ctx.conjugates(phi2))
        assert consts.b_over_g == pytest.approx(math.exp(consts.b_over_g_log), rel=1e-12)
        assert consts.b_over_g > math.exp(2.0)

    def test_phi4_log_finite_exp_overflows(self, ctx):
        phi4 = power_log(4.0)
        consts = equivalence_constants(ctx.orlicz(phi4), cache=ctx.conjugates(phi4))
        assert math.isfinite(consts.b_over_g_log)
        assert consts.b_over_g == math.inf

    def test_c3_lower_edge_is_tight(self, phi2, ctx):
        # the tangency identity makes constants exact equality cases, so the
        # lower edge 1/C3 with C3 = max(1, C1, 1/C2) is attained
        consts = equivalence_constants(ctx.orlicz(phi2), cache=ctx.conjugates(phi2))
        b = luxemburg_norm(PolynomialRep([1.0]), ctx.orlicz(phi2))
        g = g_norm(PolynomialRep([1.0]), phi2, cache=ctx.conjugates(phi2))
        assert b / g >= 1.0 / consts.g_over_b - 1e-6


class TestDispatch:
    def test_all_spec_kinds(self, phi2, ctx):
        f = PolynomialRep([0.2, 1.0])
        pairs = [
            (lp_spec(2.0), lp_quasinorm(f, 2.0, INTERVAL)),
            (orlicz_spec(phi2), luxemburg_norm(f, ctx.orlicz(phi2))),
            (gnorm_spec(phi2), g_norm(f, phi2, cache=ctx.conjugates(phi2))),
            (lorentz_spec(2.0, 2.0), lorentz_norm(f, 2.0, 2.0)),
            (vnorm_spec(phi2, 1.0), v_quasinorm(f, phi2, 1.0, cache=ctx.conjugates(phi2, p_lo=4.0))),
        ]
        for spec, direct in pairs:
            assert evaluate_norm(f, spec, ctx=ctx) == pytest.approx(direct, rel=1e-9)

    def test_labels_are_informative(self, phi2):
        assert "2" in lp_spec(2.0).label
        assert "orlicz" in orlicz_spec(phi2).label

    def test_context_caches(self, phi2):
        local = NormContext()
        assert local.orlicz(phi2) is local.orlicz(phi2)
        assert local.conjugates(phi2) is local.conjugates(phi2)
