"""Slow manifolds, expansions, Tihonov rates, delayed exits, relaxation."""

import math

import mpmath as mp
import numpy as np
import pytest

from perturblab.odeflow import integrate
from perturblab.slowfast import (
    AsymptoticExpansion,
    FoldPointError,
    NotAttracting,
    T0_SINGULAR,
    ThresholdNotCrossed,
    asymptotic_expansion,
    buffer_point,
    cauchy_drive,
    delayed_hopf_system,
    disordering_crossing,
    drifted_hopf_system,
    fold_crossing_constant,
    fourier_periodic_solution,
    hopf_delay,
    linear_decay_system,
    optimal_truncation,
    relaxation_cycle,
    relaxation_scaling,
    scalar_drive_expansion,
    sin_drive,
    slow_manifold,
    tihonov_verify,
    vdp_system,
)
from perturblab.slowfast.delay import _contour_psi


@pytest.fixture(scope="module")
def sin_chart():
    sys_l = linear_decay_system(math.sin, math.cos)
    grid = np.linspace(0.0, 2.0 * np.pi, 257)
    return sys_l, slow_manifold(sys_l, grid, x_guess=[0.0])


@pytest.fixture(scope="module")
def vdp_chart():
    sys_v = vdp_system()
    xs = np.linspace(1.3, 2.3, 201)   # spacing 0.005 puts x* = 2 on the grid
    return sys_v, slow_manifold(sys_v, xs ** 3 / 3.0 - xs, x_guess=[2.3])


@pytest.fixture(scope="module")
def hopf_result():
    return hopf_delay(delayed_hopf_system(), y0=-0.5, eps=0.01,
                      r0=0.1, r_threshold=0.1)


@pytest.fixture(scope="module")
def buffer_result():
    return buffer_point(drifted_hopf_system(), t0=-0.5, eps=0.005)


class TestSlowManifold:
    def test_driven_decay_chart_is_the_drive(self, sin_chart):
        _, chart = sin_chart
        assert np.max(np.abs(chart.x_values[:, 0]
                             - np.sin(chart.y_grid))) < 1e-12
        assert chart.residual_sup() < 1e-10

    def test_chart_derivative_matches_implicit_formula(self, sin_chart):
        _, chart = sin_chart
        for y in (0.3, 2.0, 4.7):
            gap = np.abs(chart.dx_star_dy(y) - chart.implicit_derivative(y))
            assert np.max(gap) < 1e-6

    def test_trivial_linear_chart(self):
        sys_l = linear_decay_system(lambda y: y, lambda y: 1.0)
        chart = slow_manifold(sys_l, np.linspace(-1.0, 1.0, 41), [0.0])
        assert np.max(np.abs(chart.x_values[:, 0] - chart.y_grid)) < 1e-12
        assert chart.spectral_margin == pytest.approx(1.0)
        assert chart.A(0.0)[0, 0] == pytest.approx(-1.0)

    def test_vdp_fold_is_reported_with_location(self):
        with pytest.raises(FoldPointError) as info:
            slow_manifold(vdp_system(), np.linspace(0.5, -1.0, 80),
                          x_guess=[1.9])
        assert abs(info.value.y + 2.0 / 3.0) < 0.05
        assert abs(info.value.x[0] - 1.0) < 0.1

    def test_repelling_branch_is_refused(self):
        sys_r = linear_decay_system(math.sin)
        sys_r = type(sys_r)(n_fast=1, n_slow=1,
                            f=lambda x, y: np.array([x[0] - math.sin(y[0])]),
                            g=sys_r.g, name="repelling")
        with pytest.raises(NotAttracting):
            slow_manifold(sys_r, np.linspace(0.0, 3.0, 31), [0.0])

    def test_lyapunov_margin_matches_normal_spectrum(self):
        chart = slow_manifold(delayed_hopf_system(),
                              np.linspace(-2.0, -0.5, 31), [0.0, 0.0])
        # normal jacobian: the quadratic-form rate equals the spectral one
        assert chart.lyapunov_margin(-0.5) == pytest.approx(0.5, rel=1e-8)
        assert chart.spectral_margin == pytest.approx(0.5, rel=1e-8)

    def test_grid_validation(self):
        sys_l = linear_decay_system(math.sin)
        with pytest.raises(ValueError):
            slow_manifold(sys_l, [0.0, 1.0, 0.5, 2.0], [0.0])
        with pytest.raises(ValueError):
            slow_manifold(sys_l, [0.0, 1.0], [0.0])


class TestExpansion:
    def test_generic_recursion_matches_exact_derivatives(self, sin_chart):
        sys_l, chart = sin_chart
        got = asymptotic_expansion(sys_l, chart, r=3)
        exact = scalar_drive_expansion(sin_drive(), r=3, y_grid=chart.y_grid)
        tols = [1e-12, 1e-6, 1e-4, 2e-3]
        for k in range(4):
            gap = np.max(np.abs(got.terms[k][:, 0] - exact.terms[k][:, 0]))
            assert gap < tols[k], f"order {k}: {gap}"

    def test_sin_terms_are_shifted_sines(self, sin_chart):
        _, chart = sin_chart
        exp = scalar_drive_expansion(sin_drive(), r=3, y_grid=chart.y_grid)
        y = chart.y_grid
        for k, ref in enumerate([np.sin(y), -np.cos(y),
                                 -np.sin(y), np.cos(y)]):
            assert np.max(np.abs(exp.terms[k][:, 0] - ref)) < 1e-12

    def test_resummation_hits_the_periodic_solution(self, sin_chart):
        _, chart = sin_chart
        eps = 0.05
        exp12 = scalar_drive_expansion(sin_drive(), r=12, y_grid=chart.y_grid)
        y = chart.y_grid
        closed = (np.sin(y) - eps * np.cos(y)) / (1.0 + eps * eps)
        assert np.max(np.abs(exp12.evaluate(eps)[:, 0] - closed)) < 1e-12

    def test_fourier_route_agrees_with_resummation(self, sin_chart):
        _, chart = sin_chart
        eps = 0.05
        exp12 = scalar_drive_expansion(sin_drive(), r=12, y_grid=chart.y_grid)
        four = np.array([fourier_periodic_solution({1: -0.5j, -1: 0.5j},
                                                   eps, y).real
                         for y in chart.y_grid])
        assert np.max(np.abs(exp12.evaluate(eps)[:, 0] - four)) < 1e-8

    def test_partial_sum_residual_order(self, sin_chart):
        sys_l, chart = sin_chart
        exp = scalar_drive_expansion(sin_drive(), r=2, y_grid=chart.y_grid)
        y = chart.y_grid
        sups = []
        eps_list = [0.1, 0.05, 0.025]
        for eps in eps_list:
            xk = exp.evaluate(eps)[:, 0]
            dxk = np.gradient(xk, y)
            sups.append(np.max(np.abs(eps * dxk + xk - np.sin(y))[8:-8]))
        slope = np.polyfit(np.log(eps_list), np.log(sups), 1)[0]
        assert abs(slope - 3.0) < 0.4

    def test_vdp_first_corrections_match_closed_forms(self, vdp_chart):
        sys_v, chart = vdp_chart
        exp = asymptotic_expansion(sys_v, chart, r=2)
        xs = chart.x_values[:, 0]
        u1 = xs / (xs ** 2 - 1.0) ** 2
        u2 = -xs * (3.0 * xs ** 2 + 2.0) / (xs ** 2 - 1.0) ** 5
        i = int(np.argmin(np.abs(xs - 2.0)))
        assert exp.terms[1][i, 0] == pytest.approx(2.0 / 9.0, abs=1e-7)
        assert np.max(np.abs(exp.terms[1][:, 0] - u1) / np.abs(u1)) < 1e-4
        assert np.max(np.abs(exp.terms[2][:, 0] - u2) / np.abs(u2)) < 5e-3

    def test_unforced_fast_variable_has_zero_corrections(self):
        sys_c = linear_decay_system(lambda y: 1.0, lambda y: 0.0)
        chart = slow_manifold(sys_c, np.linspace(0.0, 2.0, 41), [1.0])
        exp = asymptotic_expansion(sys_c, chart, r=3)
        for k in range(1, 4):
            assert np.max(np.abs(exp.terms[k])) < 1e-9

    def test_factorial_amplitudes_optimal_truncation(self):
        amps = np.array([math.factorial(k) for k in range(21)], dtype=float)
        exp = AsymptoticExpansion.from_amplitudes(amps)
        res = optimal_truncation(exp, 0.1)
        assert res.k_star == 10          # exact tie with k = 9; larger wins
        assert res.remainder_estimate == pytest.approx(3.6288e-4, rel=1e-12)
        assert 1.0 / 10.0 < res.remainder_estimate / math.exp(-10.0) < 10.0
        assert res.disordered

    def test_larger_eps_truncates_earlier(self):
        amps = np.array([math.factorial(k) for k in range(21)], dtype=float)
        exp = AsymptoticExpansion.from_amplitudes(amps)
        assert optimal_truncation(exp, 0.5).k_star == 2

    def test_convergent_series_is_not_disordered(self):
        exp = AsymptoticExpansion.from_amplitudes(2.0 ** np.arange(9))
        res = optimal_truncation(exp, 0.1)
        assert res.k_star == 8           # all orders usable
        assert not res.disordered

    def test_cauchy_drive_amplitudes_are_factorials(self):
        exp = scalar_drive_expansion(cauchy_drive(), r=12,
                                     y_grid=np.linspace(-2.0, 0.0, 21))
        for k in (3, 7, 12):
            assert exp.amplitudes[k] == pytest.approx(math.factorial(k),
                                                      rel=1e-12)

    def test_disordering_crossing_scales_like_fold_distance(self):
        sys_v = vdp_system()
        xs = np.concatenate([np.linspace(1.045, 1.2, 140),
                             np.linspace(1.205, 1.9, 80)])
        chart = slow_manifold(sys_v, xs ** 3 / 3.0 - xs, x_guess=[1.045])
        exp = asymptotic_expansion(sys_v, chart, r=2)
        eps_list = [1e-3, 3e-3, 1e-2, 3e-2]
        dists = [disordering_crossing(exp, e) + 2.0 / 3.0 for e in eps_list]
        slope = np.polyfit(np.log(eps_list), np.log(dists), 1)[0]
        assert abs(slope - 2.0 / 3.0) < 0.1


@pytest.fixture(scope="module")
def coupled_report():
    # slow equation that feels the fast offset: y' = 1 + 0.3 (x - sin y),
    # so the reduced-flow error carries a genuine O(eps) signal
    from perturblab.slowfast import SlowFastSystem

    sys_c = SlowFastSystem(
        n_fast=1, n_slow=1,
        f=lambda x, y: np.array([-x[0] + math.sin(y[0])]),
        g=lambda x, y: np.array([1.0 + 0.3 * (x[0] - math.sin(y[0]))]),
        name="coupled decay", fx=lambda x, y: np.array([[-1.0]]))
    chart = slow_manifold(sys_c, np.linspace(0.0, 2.0 * np.pi, 257), [0.0])
    return tihonov_verify(sys_c, chart, x0=[0.8], y0=0.0,
                          eps_list=[0.1, 0.05, 0.02])


class TestTihonov:
    def test_distance_scales_linearly_in_eps(self, coupled_report):
        assert abs(coupled_report.d_slope - 1.0) < 0.1

    def test_transient_decay_rate_matches_fast_eigenvalue(self, coupled_report):
        for k0 in coupled_report.k0_estimates:
            assert abs(k0 - 1.0) < 0.25

    def test_slow_variable_error_is_order_eps(self, coupled_report):
        assert abs(coupled_report.reduced_slope - 1.0) < 0.25

    def test_uncoupled_slow_flow_is_reproduced_exactly(self, sin_chart):
        sys_l, chart = sin_chart
        rep = tihonov_verify(sys_l, chart, x0=[0.8], y0=0.0,
                             eps_list=[0.1, 0.02])
        assert np.max(rep.reduced_sup_err) < 1e-8
        assert abs(rep.d_slope - 1.0) < 0.1

    def test_full_solution_tracks_the_explicit_attractor(self):
        # eps x' = -x + sin y, y' = 1 has an exact periodic attractor;
        # after the transient the trajectory must sit within 2 eps^2 of it
        sys_l = linear_decay_system(math.sin, math.cos)
        for eps in (0.1, 0.05, 0.02):
            field = sys_l.full_field(eps)
            traj = integrate(field, [0.8, 0.0], (0.0, 3.0), tol=1e-11)
            t_on = 5.0 * eps * abs(math.log(eps))
            tt = np.linspace(t_on, 3.0, 400)
            worst = 0.0
            for t in tt:
                x, y = traj.evaluate(t)
                xbar = (math.sin(y) - eps * math.cos(y)) / (1.0 + eps * eps)
                worst = max(worst, abs(x - xbar))
            assert worst < 2.0 * eps * eps


class TestHopfDelay:
    def test_exit_lands_opposite_the_entry(self, hopf_result):
        assert abs(hopf_result.observed_exit - 0.5) < 0.05
        assert hopf_result.predicted_exit == pytest.approx(0.5)
        assert hopf_result.buffer_point is None

    def test_radial_profile_matches_closed_form(self, hopf_result):
        y0, eps, r0 = -0.5, 0.01, 0.1
        t_mid = 0.5 * hopf_result.meta["t_exit"]
        i = int(np.argmin(np.abs(hopf_result.samples[:, 0] - t_mid)))
        t = hopf_result.samples[i, 0]
        quad = mp.quad(lambda s: mp.e ** ((2 * (y0 * s + s * s / 2)) / eps),
                       [0, t])
        c = (1 + 2 * r0 ** 2 / eps * quad) ** mp.mpf(-0.5)
        exact = float(r0 * c * mp.e ** ((y0 * t + t * t / 2) / eps))
        assert hopf_result.samples[i, 2] == pytest.approx(exact, rel=1e-4)

    def test_orbit_approaches_the_limit_radius(self, hopf_result):
        assert hopf_result.orbit_approach_error < 0.02

    def test_threshold_sensitivity_is_small(self, hopf_result):
        assert hopf_result.threshold_sensitivity < 0.05
        assert hopf_result.sensitivity_mode == "threshold x2"

    def test_exit_drift_across_eps_is_small(self, hopf_result):
        res3 = hopf_delay(delayed_hopf_system(), y0=-0.5, eps=1e-3,
                          r0=0.1, r_threshold=0.1)
        assert abs(res3.observed_exit - hopf_result.observed_exit) < 0.05

    def test_invariant_axis_never_exits(self):
        with pytest.raises(ThresholdNotCrossed):
            hopf_delay(delayed_hopf_system(), y0=-0.5, eps=0.01, r0=0.0)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            hopf_delay(delayed_hopf_system(), y0=0.3, eps=0.01)
        with pytest.raises(ValueError):
            hopf_delay(delayed_hopf_system(), y0=-0.5, eps=0.01, r0=-0.1)
        with pytest.raises(ValueError):
            hopf_delay(vdp_system(), y0=-0.5, eps=0.01)


class TestBufferPoint:
    def test_predicted_exit_is_capped_by_the_buffer(self, buffer_result):
        res = buffer_result
        assert res.buffer_point == pytest.approx(1.0, abs=1e-6)
        assert res.predicted_exit == pytest.approx(0.5, abs=1e-6)
        assert res.predicted_exit == pytest.approx(
            min(-res.t0, res.buffer_point), abs=1e-9)

    def test_observed_exit_in_band(self, buffer_result):
        assert abs(buffer_result.observed_exit - 0.5) < 0.1

    def test_threshold_sensitivity_reported(self, buffer_result):
        assert buffer_result.threshold_sensitivity < 0.05
        assert "saturation" in buffer_result.sensitivity_mode

    def test_naive_series_discrepancy_reported(self, buffer_result):
        res = buffer_result
        assert res.naive_sup == pytest.approx(res.eps, rel=1e-3)
        assert res.naive_gap > 10.0

    def test_state_stays_small_before_the_instability(self, buffer_result):
        s = buffer_result.samples
        early = s[s[:, 0] < -0.2]
        assert np.max(early[:, 1]) < 2.0 * buffer_result.eps

    def test_forced_response_quadrature_predicts_the_exit(self, buffer_result):
        res = buffer_result
        thr, eps = res.threshold, res.eps

        def gap(t):
            return eps * abs(res.psi(t)) - thr

        lo, hi = 0.2, 1.1
        assert gap(lo) < 0 < gap(hi)
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if gap(mid) < 0:
                lo = mid
            else:
                hi = mid
        assert abs(0.5 * (lo + hi) - res.observed_exit) < 0.05

    def test_contour_quadrature_against_multiprecision(self):
        def alpha(s):
            return 0.5 * s * s + 1j * s

        for eps, t in ((0.05, 0.3), (0.05, 0.8), (0.005, 0.4)):
            got = _contour_psi(alpha, eps, t, -1.0, -1.0)
            with mp.workdps(40):
                ref = mp.quad(lambda s: mp.e ** ((alpha(t) - alpha(s)) / eps),
                              [-1.0, -1.0 - 1j, t - 1j, t])
            ref = complex(ref)
            assert abs(got - ref) / abs(ref) < 1e-8

    def test_parameter_validation(self):
        sys_d = drifted_hopf_system()
        with pytest.raises(ValueError):
            buffer_point(sys_d, t0=0.5, eps=0.005)
        with pytest.raises(ValueError):
            buffer_point(sys_d, t0=-0.5, eps=0.005, threshold=1e-3)
        with pytest.raises(ValueError):
            buffer_point(delayed_hopf_system(), t0=-0.5, eps=0.005)

    def test_unreachable_threshold_raises(self):
        with pytest.raises(ThresholdNotCrossed):
            buffer_point(drifted_hopf_system(), t0=-0.5, eps=0.005,
                         threshold=2.0)


@pytest.fixture(scope="module")
def scaling():
    return relaxation_scaling([1e-3, 1e-2])


class TestRelaxation:
    def test_fold_blowup_is_the_first_airy_zero(self):
        from scipy.special import ai_zeros, airy
        fc = fold_crossing_constant()
        a1 = float(ai_zeros(1)[0][0])
        ai0, aip0, _, _ = airy(0.0)
        assert abs(fc.v_blowup + a1) < 1e-10
        assert abs(fc.u_origin + aip0 / ai0) < 1e-12

    def test_cycle_metrics_at_moderate_eps(self, scaling):
        m = scaling.metrics[0]          # eps = 1e-2
        assert m.eps == pytest.approx(1e-2)
        assert m.period > T0_SINGULAR
        assert m.jump_delay > 0.0
        assert m.fixed_point_gap < 1e-8
        assert abs(m.landing_x + 2.0) < 0.01
        assert 0.70 < m.excursion / m.eps ** (1.0 / 3.0) < 0.78

    def test_overshoot_exponents(self, scaling):
        assert abs(scaling.delay_exponent - 2.0 / 3.0) < 0.12
        assert abs(scaling.excursion_exponent - 1.0 / 3.0) < 0.08

    def test_period_extrapolates_to_the_singular_limit(self, scaling):
        assert abs(scaling.period_limit - T0_SINGULAR) < 0.03

    def test_large_eps_is_refused(self):
        with pytest.raises(ValueError):
            relaxation_cycle(0.5)
