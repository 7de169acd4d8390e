"""Twist map orbits, invariant circles, breakup, periodic orbits."""

import numpy as np
import pytest

from perturblab.twistmap import (
    HAVE_NUMBA,
    NoBreakupTransition,
    ResonantFrequency,
    breakup_scan,
    invariant_circle,
    iterate_orbit,
    pb_periodic_orbits,
    phase_portrait,
    standard_map,
)
from perturblab.twistmap.circles import _newton_at_resolution
from perturblab.twistmap.kernels import orbit_batch_numba, orbit_batch_numpy
from perturblab.twistmap.maps import TWO_PI

GOLD = (np.sqrt(5.0) - 1.0) / 2.0


class TestMaps:
    def test_standard_map_preserves_area(self):
        tm = standard_map(0.4)
        assert tm.area_preserving_defect() < 1e-8
        assert tm.is_area_preserving()

    def test_zero_coupling_rotation_number_is_exact(self):
        tm = standard_map(0.0)
        orb = iterate_orbit(tm, 0.3, TWO_PI * GOLD, 20_000)
        assert abs(orb.rotation_number - GOLD) < 1e-9

    def test_rotation_number_invariant_under_full_turn_of_seed(self):
        tm = standard_map(0.2)
        a = iterate_orbit(tm, 0.7, TWO_PI * GOLD, 10_000)
        b = iterate_orbit(tm, 0.7 + TWO_PI, TWO_PI * GOLD, 10_000)
        assert abs(a.rotation_number - b.rotation_number) < 1e-9

    def test_portrait_shape_and_determinism(self):
        tm = standard_map(0.5)
        cloud = phase_portrait(tm, n_seeds=5, n_steps=50, rng_seed=3)
        again = phase_portrait(tm, n_seeds=5, n_steps=50, rng_seed=3)
        assert cloud.shape == (5 * 51, 3)
        assert np.array_equal(cloud, again)
        assert np.all(cloud[:, 0] >= 0.0) and np.all(cloud[:, 0] < TWO_PI)
        assert set(np.unique(cloud[:, 2])) == {0.0, 1.0, 2.0, 3.0, 4.0}


class TestKernels:
    @pytest.mark.skipif(not HAVE_NUMBA, reason="compiled path unavailable")
    def test_backends_agree(self):
        rng = np.random.default_rng(5)
        phi0 = rng.uniform(0.0, TWO_PI, 16)
        act0 = rng.uniform(0.0, TWO_PI, 16)
        p_nb, a_nb = orbit_batch_numba(phi0, act0, 0.2, 200)
        p_np, a_np = orbit_batch_numpy(phi0, act0, 0.2, 200)
        assert np.max(np.abs(p_nb - p_np)) < 1e-10
        assert np.max(np.abs(a_nb - a_np)) < 1e-10


class TestInvariantCircle:
    def test_first_sweep_solves_linearized_conjugacy(self):
        # one Newton sweep from the flat start must produce the exact
        # first order parametrization: v(psi+a) - v(psi) = eps sin(psi)
        # and u(psi+a) - u(psi) = v(psi+a), the advanced action offset
        eps, n = 0.05, 128
        psi = TWO_PI * np.arange(n) / n
        u0 = np.zeros(n)
        v0 = np.zeros(n)
        u, v, act_offset, _, used, _ = _newton_at_resolution(
            eps, GOLD, n, u0, v0, TWO_PI * GOLD, 1e-30, 1, None)
        assert used == 1
        ks = np.fft.fftfreq(n, d=1.0 / n)
        mover = np.exp(2j * np.pi * ks * GOLD)
        u_ahead = np.fft.ifft(np.fft.fft(u) * mover).real
        v_ahead = np.fft.ifft(np.fft.fft(v) * mover).real
        rhs = eps * np.sin(psi)
        assert np.max(np.abs((v_ahead - v) - rhs)) < 1e-13
        assert np.max(np.abs((u_ahead - u) - v_ahead)) < 1e-13

    @pytest.mark.parametrize("eps", [0.3, 0.5])
    def test_circle_conjugates_map_to_rotation(self, eps):
        circle = invariant_circle(standard_map(eps), GOLD, tol=1e-12)
        assert circle.converged
        assert circle.conjugacy_residual(standard_map(eps), 512) < 1e-10

    def test_certified_denominator_floor_accepts_golden(self):
        circle = invariant_circle(standard_map(0.3), GOLD, tol=1e-12,
                                  certificate=(0.25, 1.0))
        assert circle.converged

    def test_rational_frequency_is_rejected(self):
        with pytest.raises(ResonantFrequency):
            invariant_circle(standard_map(0.1), 0.5)

    def test_orbit_on_circle_stays_confined(self):
        eps = 0.3
        circle = invariant_circle(standard_map(eps), GOLD, tol=1e-12)
        psi = TWO_PI * np.arange(256) / 256.0
        _, acts_on_circle = circle.evaluate(psi)
        phi0, act0 = circle.evaluate(0.0)
        orb = iterate_orbit(standard_map(eps), float(phi0[0]), float(act0[0]),
                            20_000)
        assert np.max(orb.actions) < np.max(acts_on_circle) + 0.05
        assert np.min(orb.actions) > np.min(acts_on_circle) - 0.05

    def test_orbit_rotation_number_matches_circle_frequency(self):
        eps = 0.5
        circle = invariant_circle(standard_map(eps), GOLD, tol=1e-12)
        phi0, act0 = circle.evaluate(0.0)
        orb = iterate_orbit(standard_map(eps), float(phi0[0]), float(act0[0]),
                            400_000)
        assert abs(orb.rotation_number - GOLD) < 1e-6

    def test_breakup_flagged_beyond_critical_coupling(self):
        circle = invariant_circle(standard_map(1.2), GOLD, tol=1e-10)
        assert not circle.converged
        assert circle.breakup_suspected


class TestBreakupScan:
    def test_bracket_straddles_the_transition(self):
        br = breakup_scan(GOLD, 0.1, 1.4, bracket_width=0.05, tol=1e-10)
        assert br.width <= 0.05
        assert 0.8 < br.eps_survives < br.eps_fails < 1.1

    def test_scan_needs_a_transition_inside_the_range(self):
        with pytest.raises(NoBreakupTransition):
            breakup_scan(GOLD, 0.1, 0.3, bracket_width=0.05)
        with pytest.raises(NoBreakupTransition):
            breakup_scan(GOLD, 1.5, 2.0, bracket_width=0.05)


class TestPeriodicOrbits:
    def test_fixed_point_traces_and_stability(self):
        eps = 0.3
        orbits = pb_periodic_orbits(standard_map(eps), 1, 1)
        assert len(orbits) == 2
        by_kind = {o.stability: o for o in orbits}
        assert set(by_kind) == {"elliptic", "hyperbolic"}
        assert abs(by_kind["hyperbolic"].trace - (2.0 + eps)) < 1e-8
        assert abs(by_kind["elliptic"].trace - (2.0 - eps)) < 1e-8
        assert abs(by_kind["hyperbolic"].points[0, 0] - 0.0) < 1e-8
        assert abs(by_kind["elliptic"].points[0, 0] - np.pi) < 1e-8

    def test_period_two_pair(self):
        eps = 0.3
        orbits = pb_periodic_orbits(standard_map(eps), 1, 2)
        kinds = sorted(o.stability for o in orbits)
        assert kinds == ["elliptic", "hyperbolic"]
        elliptic = next(o for o in orbits if o.stability == "elliptic")
        # the orbit through (0, pi) and (pi, pi) has trace 2 - eps^2
        assert abs(elliptic.trace - (2.0 - eps * eps)) < 1e-8
        assert elliptic.points.shape == (2, 2)
        for o in orbits:
            assert o.residual < 1e-10
            assert o.rotation_number == 0.5
