"""Flow toolbox tests: closed forms, flow properties, sections, Floquet."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perturblab.odeflow import (ContractionLost, HyperplaneSection,
                                NonFiniteRightHandSide, SingularOrbitJacobian,
                                StepUnderflow, StroboscopicSection,
                                VectorField, characteristic_exponents,
                                find_periodic_orbit, floquet_data, flow_map,
                                gronwall_bound, integrate, picard_iterate,
                                poincare_section, variational_matrix)


def decay_field():
    return VectorField(1, lambda x, t, p: -x, name="decay")


def rotation_field(omega=1.0):
    def rhs(x, t, p):
        return np.array([-omega * x[1], omega * x[0]])
    return VectorField(2, rhs, name="rotation")


def limit_cycle_field():
    # radial attraction dr/dt = r (1 - r^2), unit angular speed
    def rhs(x, t, p):
        r2 = x[0] ** 2 + x[1] ** 2
        return np.array([x[0] * (1.0 - r2) - x[1],
                         x[1] * (1.0 - r2) + x[0]])
    return VectorField(2, rhs, name="limit-cycle")


class TestIntegrate:
    def test_exponential_decay(self):
        traj = integrate(decay_field(), [1.0], (0.0, 3.0), tol=1e-10)
        assert abs(traj.states[-1, 0] - np.exp(-3.0)) < 1e-9

    def test_dense_output_matches_closed_form(self):
        traj = integrate(rotation_field(), [1.0, 0.0], (0.0, 7.0), tol=1e-11)
        ts = np.linspace(0.0, 7.0, 137)
        vals = traj.evaluate(ts)
        assert np.max(np.abs(vals[:, 0] - np.cos(ts))) < 1e-8
        assert np.max(np.abs(vals[:, 1] - np.sin(ts))) < 1e-8

    def test_tolerance_halving_monotone(self):
        # three closed forms: decay, rotation, logistic
        logistic = VectorField(1, lambda x, t, p: x * (1.0 - x))

        def exact_logistic(t, x0=0.1):
            return x0 * np.exp(t) / (1.0 + x0 * (np.exp(t) - 1.0))

        cases = [
            (decay_field(), [1.0], lambda t: np.exp(-t)),
            (rotation_field(), [1.0, 0.0], lambda t: np.cos(t)),
            (logistic, [0.1], exact_logistic),
        ]
        for field, x0, exact in cases:
            errs = []
            tol = 1e-6
            for _ in range(8):
                traj = integrate(field, x0, (0.0, 5.0), tol=tol)
                err = np.max(np.abs(traj.states[:, 0] - exact(traj.times)))
                errs.append(err)
                tol /= 2.0
            for a, b in zip(errs, errs[1:]):
                assert b <= a * 1.05 + 1e-13

    def test_stats_populated(self):
        traj = integrate(limit_cycle_field(), [0.2, 0.0], (0.0, 10.0),
                         tol=1e-8)
        assert traj.stats.steps == len(traj.times) - 1
        assert traj.stats.nfev > traj.stats.steps
        assert traj.stats.tol == 1e-8

    def test_nonfinite_rhs_reported(self):
        bad = VectorField(1, lambda x, t, p: np.array([np.nan]))
        with pytest.raises(NonFiniteRightHandSide) as exc:
            integrate(bad, [1.0], (0.0, 1.0))
        assert exc.value.time == 0.0

    def test_blowup_reports_escape_estimate(self):
        # dx/dt = x^2 escapes at t* = 1/x0
        blow = VectorField(1, lambda x, t, p: x ** 2)
        with pytest.raises(StepUnderflow) as exc:
            integrate(blow, [1.0], (0.0, 2.0), tol=1e-9)
        assert exc.value.time < 1.001
        assert exc.value.escape_time_estimate is not None
        assert abs(exc.value.escape_time_estimate - 1.0) < 1e-2
        assert np.all(np.isfinite(exc.value.state))

    def test_implicit_midpoint_energy_drift(self):
        # symmetric method: harmonic oscillator energy stays bounded
        traj = integrate(rotation_field(), [1.0, 0.0], (0.0, 50.0),
                         method="implicit_midpoint", first_step=0.01)
        energy = traj.states[:, 0] ** 2 + traj.states[:, 1] ** 2
        assert np.max(np.abs(energy - 1.0)) < 1e-4

    @given(st.floats(0.2, 2.0), st.floats(0.2, 2.0))
    @settings(max_examples=10, deadline=None)
    def test_flow_property(self, s, t):
        field = limit_cycle_field()
        x0 = np.array([0.3, -0.4])
        one_shot = flow_map(field, x0, s + t, tol=1e-11)
        two_step = flow_map(field, flow_map(field, x0, s, tol=1e-11), t,
                            tol=1e-11)
        assert np.max(np.abs(one_shot - two_step)) < 1e-8


class TestPicard:
    def test_iterates_contract_geometrically(self):
        eps = 0.2
        field = VectorField(1, lambda x, t, p: -x + eps * np.sin(x))
        res = picard_iterate(field, [1.0], eps=eps, n_iter=6, t_max=5.0)
        assert res.lam < 1.0
        ratios = res.sup_differences[1:] / res.sup_differences[:-1]
        assert np.all(ratios <= res.lam + 0.05)

    def test_final_iterate_within_tail_bound(self):
        eps = 0.15
        field = VectorField(1, lambda x, t, p: -x + eps * np.sin(x))
        res = picard_iterate(field, [1.0], eps=eps, n_iter=8, t_max=4.0)
        ref = integrate(field, [1.0], (0.0, 4.0), tol=1e-12)
        ref_vals = ref.evaluate(res.times)
        err = np.max(np.abs(res.final - ref_vals))
        assert err <= res.tail_bound + 1e-6

    def test_refuses_lost_contraction(self):
        eps = 2.5  # eps K > 1 for g = sin
        field = VectorField(1, lambda x, t, p: -x + eps * np.sin(x))
        with pytest.raises(ContractionLost):
            picard_iterate(field, [1.0], eps=eps, n_iter=3, t_max=10.0)

    def test_gronwall_bound_tight_on_linear_growth(self):
        # dx/dt = K x + eps M deviates exactly by the bound
        lipschitz, mag, eps = 0.7, 1.3, 1e-3
        field = VectorField(1, lambda x, t, p: lipschitz * x + eps * mag)
        traj = integrate(field, [0.0], (0.0, 3.0), tol=1e-12)
        bound = gronwall_bound(lipschitz, mag, eps, traj.times)
        assert np.max(np.abs(traj.states[:, 0] - bound)) < 1e-10
        # and it really bounds a nonlinear O(eps) perturbation of decay
        pert = VectorField(1, lambda x, t, p: -x + eps * np.cos(3 * x))
        base = VectorField(1, lambda x, t, p: -x)
        tp = integrate(pert, [1.0], (0.0, 3.0), tol=1e-12)
        tb = integrate(base, [1.0], (0.0, 3.0), tol=1e-12)
        dev = np.abs(tp.states[:, 0] - tb.evaluate(tp.times)[:, 0])
        assert np.all(dev <= gronwall_bound(1.0, 1.0, eps, tp.times) + 1e-12)


class TestPoincare:
    def test_limit_cycle_crossings_converge_to_unit(self):
        section = HyperplaneSection([0.0, 1.0], 0.0)  # y = 0
        events = poincare_section(limit_cycle_field(), section, [0.25, 0.0],
                                  6, direction=+1)
        xs = np.array([e.state[0] for e in events])
        assert abs(xs[-1] - 1.0) < 1e-6
        assert all(e.transversal for e in events)
        # crossings of y = 0 with positive y-velocity happen once per turn
        gaps = np.diff([e.time for e in events])
        assert np.max(np.abs(gaps - 2.0 * np.pi)) < 1e-3

    def test_crossing_times_refined(self):
        # rotation: x = cos t crosses x = 0 at odd multiples of pi/2
        section = HyperplaneSection([1.0, 0.0], 0.0)
        events = poincare_section(rotation_field(), section, [1.0, 0.0], 4)
        expected = np.array([0.5, 1.5, 2.5, 3.5]) * np.pi
        times = np.array([e.time for e in events])
        assert np.max(np.abs(times - expected)) < 1e-8

    def test_direction_filter(self):
        section = HyperplaneSection([1.0, 0.0], 0.0)
        events = poincare_section(rotation_field(), section, [1.0, 0.0], 2,
                                  direction=-1)
        assert all(e.direction == -1 for e in events)

    def test_tangential_crossing_flagged(self):
        # normal velocity 1e-12 of unit speed: crossing must be flagged
        creep = VectorField(2, lambda x, t, p: np.array([1e-12, 1.0]))
        section = HyperplaneSection([1.0, 0.0], 0.0)
        events = poincare_section(creep, section, [-5e-13, 0.0], 1,
                                  t_max=10.0)
        assert not events[0].transversal
        assert events[0].direction == 0

    def test_stroboscopic_section(self):
        forcing = VectorField(1, lambda x, t, p: np.array([np.cos(t)]),
                              period=2 * np.pi)
        events = poincare_section(forcing, StroboscopicSection(2 * np.pi),
                                  [0.0], 3)
        assert [e.crossing_index for e in events] == [0, 1, 2]
        for e in events:
            assert abs(e.state[0]) < 1e-9  # sin(2 pi k) = 0


class TestPeriodicOrbit:
    def test_limit_cycle_found_and_exponent(self):
        orbit = find_periodic_orbit(limit_cycle_field(), [1.3, 0.0],
                                    t_guess=6.0)
        assert abs(orbit.period - 2.0 * np.pi) < 1e-8
        assert abs(np.linalg.norm(orbit.orbit.states[0]) - 1.0) < 1e-8
        mults = sorted(np.abs(orbit.floquet.multipliers))
        # multipliers {exp(-4 pi), 1}
        assert abs(mults[1] - 1.0) < 1e-6
        assert abs(mults[0] - np.exp(-4.0 * np.pi)) < 1e-6

    def test_characteristic_exponents_closed_form(self):
        orbit = find_periodic_orbit(limit_cycle_field(), [1.2, 0.0],
                                    t_guess=6.3)
        ce = characteristic_exponents(limit_cycle_field(), orbit.orbit,
                                      orbit.period)
        assert abs(ce.nontrivial - (-2.0)) < 1e-6
        assert ce.discrepancy < 1e-6
        assert ce.hyperbolic

    def test_monodromy_fixes_flow_direction(self):
        # exp(B T) f(x*) = f(x*)
        field = limit_cycle_field()
        orbit = find_periodic_orbit(field, [1.1, 0.0], t_guess=6.3)
        x_star = orbit.orbit.states[0]
        f_star = field.f(x_star, 0.0)
        image = orbit.floquet.monodromy @ f_star
        assert np.max(np.abs(image - f_star)) < 1e-5 * np.linalg.norm(f_star)

    def test_center_family_reports_singular(self):
        # closed orbits of a center come in families: Newton matrix singular
        with pytest.raises(SingularOrbitJacobian):
            find_periodic_orbit(rotation_field(), [1.1, 0.05], t_guess=6.2)

    def test_forced_orbit_near_equilibrium(self):
        # dx/dt = -x + eps sin t has a unique periodic response
        eps = 0.1

        def rhs(x, t, p):
            return np.array([-x[0] + eps * np.sin(t)])

        field = VectorField(1, rhs, period=2 * np.pi)
        orbit = find_periodic_orbit(field, [0.0])
        # closed form x(t) = eps (sin t - cos t)/2
        assert abs(orbit.orbit.states[0, 0] - (-eps / 2.0)) < 1e-8
        assert abs(orbit.period - 2 * np.pi) < 1e-14
        mult = orbit.floquet.multipliers[0]
        assert abs(mult - np.exp(-2 * np.pi)) < 1e-8


class TestFloquetIdentities:
    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=8, deadline=None)
    def test_det_identity_random_linear_periodic(self, seed):
        rng = np.random.default_rng(seed)
        a0 = rng.uniform(-1.0, 1.0, size=(2, 2))
        a1 = rng.uniform(-1.0, 1.0, size=(2, 2))

        def rhs(x, t, p):
            return (a0 + np.sin(t) * a1) @ x

        def jac(x, t, p):
            return a0 + np.sin(t) * a1

        field = VectorField(2, rhs, jac=jac, period=2 * np.pi)
        fd = floquet_data(field, [1.0, 0.0], 2 * np.pi)
        assert fd.det_identity_residual < 1e-6 * max(1.0, abs(fd.det_monodromy))

    def test_variational_matrix_linear_exact(self):
        a = np.array([[0.0, 1.0], [-1.0, -0.5]])
        field = VectorField(2, lambda x, t, p: a @ x,
                            jac=lambda x, t, p: a)
        traj = integrate(field, np.array([1.0, 0.0]), (0.0, 2.0), tol=1e-11)
        u_final, samples = variational_matrix(field, traj)
        from scipy.linalg import expm
        assert np.max(np.abs(u_final - expm(2.0 * a))) < 1e-7
        t_mid, u_mid = samples[len(samples) // 2]
        assert np.max(np.abs(u_mid - expm(t_mid * a))) < 1e-7
