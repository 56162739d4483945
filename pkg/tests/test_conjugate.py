"""Convex transform layer: h, Young-Fenchel conjugate, psi, admissibility."""

import math

import numpy as np
import pytest

from orlimark.conjugate import (
    ConjugateCache,
    PhiSpec,
    custom_phi,
    fenchel_moreau_check,
    h_eval,
    log_power,
    phi_membership_check,
    power_log,
    psi,
    psi_log,
    tabulated_phi,
    young_fenchel,
    young_fenchel_or_inf,
)
from orlimark.errors import SummabilityError


def hstar_power_closed_form(m: float, p: float) -> float:
    # for phi(u) = u^m: h*(p) = (p/m)(ln(p/m) - 1)
    return (p / m) * (math.log(p / m) - 1.0)


class TestYoungFenchel:
    def test_closed_form_phi2(self, phi2):
        for p in (1.0, 2.0, 4.0, 10.0, 64.0):
            assert young_fenchel(phi2, p) == pytest.approx(
                hstar_power_closed_form(2.0, p), rel=1e-9, abs=1e-12
            )

    def test_small_p_limit_vanishes(self, phi2):
        # h(y) = e^{2y} has infimum slope 0 at -inf where h -> 0, so the
        # conjugate tends to 0 from below as p -> 0+
        val = young_fenchel(phi2, 1e-9, p_min=0.0)
        closed = (1e-9 / 2.0) * (math.log(1e-9 / 2.0) - 1.0)
        assert val == pytest.approx(closed, rel=1e-6)
        assert -1e-6 < val < 0.0

    def test_default_floor_guards_tiny_p(self, phi2):
        with pytest.raises(ValueError):
            young_fenchel(phi2, 1e-9)

    def test_bracket_invariance(self, phi2):
        a = young_fenchel(phi2, 7.0, y0=0.0, step0=1.0)
        b = young_fenchel(phi2, 7.0, y0=-3.0, step0=0.25)
        assert a == pytest.approx(b, abs=1e-9)

    def test_psi_closed_form(self):
        for m in (1.0, 2.0, 4.0):
            phi = power_log(m)
            for p in np.geomspace(max(1.0, m / 2.0), 100.0, 12):
                expect = (p / m) ** (1.0 / m) * math.exp(-1.0 / m)
                assert psi(phi, float(p)) == pytest.approx(expect, rel=1e-6)

    def test_psi_log_consistency(self, phi2):
        assert math.exp(psi_log(phi2, 4.0)) == pytest.approx(psi(phi2, 4.0), rel=1e-12)


class TestConjugateCache:
    def test_grid_layout(self, phi2):
        cache = ConjugateCache(phi2)
        assert cache.grid[0] == pytest.approx(1.0)
        assert cache.grid[-1] == pytest.approx(1024.0, rel=1e-12)

    def test_hstar_convex_on_grid(self, phi2):
        cache = ConjugateCache(phi2)
        second = np.diff(cache.hstar, 2)
        assert second.min() >= -1e-9

    def test_psi_nondecreasing_on_grid(self, phi1, phi2, phi_nu1):
        for phi in (phi1, phi2, phi_nu1):
            cache = ConjugateCache(phi)
            steps = np.diff(cache.psi_log_grid)
            assert steps.min() >= -1e-12

    def test_extend(self, phi2):
        cache = ConjugateCache(phi2)
        n0 = cache.grid.size
        cache.extend(4.0)
        assert cache.grid[-1] == pytest.approx(4096.0, rel=1e-12)
        assert cache.grid.size > n0

    def test_psi_log_at_matches_exact(self, phi2):
        cache = ConjugateCache(phi2)
        for p in (1.7, 5.3, 99.0, 700.0):
            expect = math.log((p / 2.0) ** 0.5) - 0.5
            assert cache.psi_log_at(p) == pytest.approx(expect, abs=1e-6)


class TestMembership:
    def test_power_log_families_admissible(self):
        for phi in (power_log(1.0), power_log(2.0), power_log(4.0)):
            rep = phi_membership_check(phi)
            assert rep.admissible, rep.detail

    def test_log_power_admissible(self, phi_nu1):
        # h(k) ~ k^2 so the gap series diverges and the family passes
        rep = phi_membership_check(phi_nu1)
        assert rep.admissible, rep.detail

    def test_non_convex_table_rejected(self):
        # strictly increasing values whose chord slopes in log z decay;
        # the constructor itself is the gatekeeper here
        with pytest.raises(ValueError, match="convex"):
            tabulated_phi([1.0, 2.0, 4.0, 8.0, 16.0], [0.1, 0.9, 1.0, 1.05, 1.08])

    def test_non_convex_callable_rejected(self):
        def wavy(z):
            t = np.log1p(np.asarray(z, dtype=float))
            return t ** 2 + 2.0 * np.sin(2.0 * np.where(np.isfinite(t), t, 0.0))

        rep = phi_membership_check(custom_phi(wavy))
        assert not rep.convex
        assert not rep.admissible

    def test_custom_phi_wraps_callable(self):
        phi = custom_phi(lambda z: np.asarray(z) ** 2)
        assert isinstance(phi, PhiSpec)
        assert h_eval(phi, 0.0) == pytest.approx(1.0)

    def test_decaying_gap_series_fails(self):
        # phi(z) = log(1+z): h(k) ~ k, gaps h(k)-h(k+1) bounded, series of
        # exp(-const) diverges from summability's standpoint? no: terms do
        # not shrink, so the summability check must fail
        phi = custom_phi(lambda z: np.log1p(np.asarray(z)))
        rep = phi_membership_check(phi)
        assert not rep.summable


def test_fenchel_moreau_round_trip(phi1, phi2, phi_nu1):
    ys = np.linspace(-2.0, 3.0, 21)
    for phi in (phi1, phi2, phi_nu1):
        dev = fenchel_moreau_check(phi, ys)
        assert dev < 1e-5


def test_cache_rejects_nonconvex(phi2):
    # a table cannot smuggle non-convexity past its constructor, but a
    # callable can; the cache detects it through kinks in the computed
    # conjugate grid
    def wavy(z):
        t = np.log1p(np.asarray(z, dtype=float))
        return t ** 2 + 2.0 * np.sin(2.0 * np.where(np.isfinite(t), t, 0.0))

    with pytest.raises(SummabilityError):
        ConjugateCache(custom_phi(wavy))
