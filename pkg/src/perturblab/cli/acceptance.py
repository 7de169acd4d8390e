"""Acceptance checks pinning the package's headline numerical claims.

Each criterion is a self-contained function returning a CriterionResult at a
fixed tolerance.  The CLI acceptance-suite experiment and the test suite both
run these, so a claim can only pass or fail in one place.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..bifurcation import (HOMOCLINIC_SLOPE, antisaddle_eigenvalues,
                           homoclinic_locus, takens_bogdanov_diagram)
from ..diophantine import (GOLDEN_MEAN, certify_type, small_denominator_bound,
                           unit_circle_gap)
from ..odeflow import (VectorField, characteristic_exponents,
                       find_periodic_orbit, integrate)
from ..series import (Poly2, action_monomial, averaging_error_scaling,
                      birkhoff_normal_form, complex_coordinates_map,
                      cos_angle, flow_polynomial_jet, lie_triangle_transform,
                      sin_angle)
from ..slowfast import (AsymptoticExpansion, buffer_point,
                        delayed_hopf_system, drifted_hopf_system, hopf_delay,
                        linear_decay_system, optimal_truncation,
                        relaxation_scaling, scalar_drive_expansion, sin_drive)
from ..twistmap import (breakup_scan, invariant_circle, iterate_orbit,
                        standard_map)

TWO_PI = 2.0 * math.pi
GOLD = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class CriterionResult:
    cid: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    elapsed_s: float = 0.0

    def as_dict(self) -> dict:
        return {"id": self.cid, "name": self.name, "passed": self.passed,
                "details": self.details, "elapsed_s": self.elapsed_s}

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        body = ", ".join(f"{k}={v}" for k, v in self.details.items())
        return f"criterion {self.cid:2d} {verdict}  {self.name}: {body}"


def criterion_1() -> CriterionResult:
    """Golden-circle breakup bracket: width <= 0.05, meets [0.92, 1.02]."""
    t0 = time.perf_counter()
    br = breakup_scan(GOLD, 0.1, 1.4, bracket_width=0.05, tol=1e-10)
    elapsed = time.perf_counter() - t0
    overlap = min(br.eps_fails, 1.02) - max(br.eps_survives, 0.92)
    passed = (br.width <= 0.05 + 1e-12 and overlap >= 0.0
              and elapsed <= 300.0)
    return CriterionResult(1, "golden breakup bracket", passed, {
        "bracket": [round(br.eps_survives, 6), round(br.eps_fails, 6)],
        "width": round(br.width, 6), "window": [0.92, 1.02],
        "runtime_s": round(elapsed, 1)})


def criterion_2() -> CriterionResult:
    """Golden circle of the eps=0.5 standard map: conjugacy and rotation."""
    tm = standard_map(0.5)
    circle = invariant_circle(tm, GOLD, tol=1e-12)
    defect = circle.conjugacy_residual(tm, 512)
    phi0, act0 = circle.evaluate(0.0)
    orb = iterate_orbit(tm, float(phi0[0]), float(act0[0]), 400_000)
    rot_gap = abs(orb.rotation_number - GOLD)
    passed = bool(circle.converged) and defect < 1e-10 and rot_gap < 1e-6
    return CriterionResult(2, "invariant circle conjugacy", passed, {
        "converged": bool(circle.converged),
        "conjugacy_defect": float(defect), "tol_defect": 1e-10,
        "rotation_gap": float(rot_gap), "tol_rotation": 1e-6})


def criterion_3() -> CriterionResult:
    """First-order averaging: sup error on [0, 1/eps] scales like eps."""
    fld = VectorField(1, rhs=lambda x, t, p: (-x + math.sin(t) ** 2) * x,
                      period=math.pi, name="logistic-forced")
    errors, slope = averaging_error_scaling(fld, math.pi, [0.8],
                                            [0.1, 0.03, 0.01], tol=1e-10)
    passed = abs(slope - 1.0) <= 0.2
    return CriterionResult(3, "averaging error slope", passed, {
        "eps": [0.1, 0.03, 0.01],
        "sup_errors": [float(e) for e in errors],
        "slope": round(float(slope), 4), "target": "1 +/- 0.2"})


def criterion_4() -> CriterionResult:
    """Exact triangle normalization of H = I + eps I cos(phi)."""
    act = action_monomial((1,), 1, exact=True)
    zero = act.zero_like()
    tri = lie_triangle_transform(
        [act, cos_angle(action_power=(1,), exact=True), zero],
        [sin_angle(action_power=(1,), exact=True), zero])
    poly = tri.polynomial_coefficients()
    checks = {
        "order0_unchanged": tri.output[0] == act,
        "order1_removed": tri.output[1].terms == {},
        "order2_is_minus_action": tri.output[2] == act.scale(-1),
        "poly2_is_minus_half_action": poly[2] == act.scale(Fraction(-1, 2)),
        "arithmetic_exact": all(s.exact for s in tri.output),
    }
    return CriterionResult(4, "exact triangle normalization",
                           all(checks.values()), checks)


def criterion_5() -> CriterionResult:
    """Stroboscopic map of the conservative oscillator has rotational C1."""
    w0 = 0.6

    def rhs(state, t):
        x, v = state
        return [v, x * (-w0 * w0) + x * x - (x * x * x) * 0.5]

    x0 = Poly2.variable(0, 3)
    v0 = Poly2.variable(1, 3)
    x_t, v_t = flow_polynomial_jet(rhs, [x0, v0], 0.0, TWO_PI, 2000)
    zmap = complex_coordinates_map(x_t, v_t, w0, -1j)
    nf = birkhoff_normal_form(zmap, order=1)
    passed = nf.twist_defect < 1e-6
    return CriterionResult(5, "stroboscopic twist is rotational", passed, {
        "omega0": w0, "twist_defect": float(nf.twist_defect),
        "tol": 1e-6, "theta_gap": float(abs(nf.theta - w0))})


def attractor_tracking(eps_list) -> list[tuple[float, float, float]]:
    """Worst |x - xbar| past the transient for the driven linear decay.

    The explicit attractor of eps x' = -x + sin(y), y' = 1 is
    xbar = (sin y - eps cos y) / (1 + eps^2); returns per-eps tuples
    (eps, worst gap for t >= 5 eps |log eps|, bound 2 eps^2).
    """
    sys_l = linear_decay_system(math.sin, math.cos)
    out = []
    for eps in eps_list:
        fld = sys_l.full_field(eps)
        traj = integrate(fld, [0.8, 0.0], (0.0, 3.0), tol=1e-11)
        t_on = 5.0 * eps * abs(math.log(eps))
        worst = 0.0
        for t in np.linspace(t_on, 3.0, 400):
            x, y = traj.evaluate(t)
            xbar = (math.sin(y) - eps * math.cos(y)) / (1.0 + eps * eps)
            worst = max(worst, abs(float(x) - xbar))
        out.append((float(eps), worst, 2.0 * eps * eps))
    return out


def criterion_6() -> CriterionResult:
    """Slow-manifold tracking within 2 eps^2, exact expansion coefficients."""
    track = attractor_tracking([0.1, 0.05, 0.02])
    track_ok = all(worst < bound for _, worst, bound in track)
    grid = np.linspace(0.0, TWO_PI, 257)
    exp3 = scalar_drive_expansion(sin_drive(), r=3, y_grid=grid)
    refs = [np.sin(grid), -np.cos(grid), -np.sin(grid), np.cos(grid)]
    coeff_gap = max(float(np.max(np.abs(exp3.terms[k][:, 0] - refs[k])))
                    for k in range(4))
    passed = track_ok and coeff_gap < 1e-12
    return CriterionResult(6, "slow-manifold tracking", passed, {
        "worst_over_bound": [round(w / b, 4) for _, w, b in track],
        "eps": [e for e, _, _ in track],
        "coefficient_gap": coeff_gap, "coefficient_tol": 1e-12})


def criterion_7() -> CriterionResult:
    """Optimal truncation of the factorial series at eps = 0.1."""
    amps = np.array([float(math.factorial(k)) for k in range(21)])
    res = optimal_truncation(AsymptoticExpansion.from_amplitudes(amps), 0.1)
    ratio = res.remainder_estimate / math.exp(-10.0)
    passed = 8 <= res.k_star <= 12 and 0.1 < ratio < 10.0
    return CriterionResult(7, "optimal truncation index", passed, {
        "k_star": int(res.k_star), "window": [8, 12],
        "remainder": float(res.remainder_estimate),
        "remainder_over_exp(-10)": round(float(ratio), 4)})


def criterion_8() -> CriterionResult:
    """Dynamic Hopf delay and its saturation at the buffer point."""
    hopf = hopf_delay(delayed_hopf_system(), y0=-0.5, eps=0.01,
                      r0=0.1, r_threshold=0.1)
    buf_far = buffer_point(drifted_hopf_system(), t0=-2.0, eps=0.005)
    buf_near = buffer_point(drifted_hopf_system(), t0=-0.5, eps=0.005)
    gaps = {"hopf_exit": abs(hopf.observed_exit - 0.5),
            "buffer_exit_t0_-2": abs(buf_far.observed_exit - 1.0),
            "buffer_exit_t0_-0.5": abs(buf_near.observed_exit - 0.5)}
    passed = (gaps["hopf_exit"] <= 0.05
              and gaps["buffer_exit_t0_-2"] <= 0.1
              and gaps["buffer_exit_t0_-0.5"] <= 0.1)
    return CriterionResult(8, "hopf delay and buffer point", passed, {
        "hopf_exit": float(hopf.observed_exit),
        "buffer_exits": [float(buf_far.observed_exit),
                         float(buf_near.observed_exit)],
        "targets": [0.5, 1.0, 0.5],
        "buffer_points": [float(buf_far.buffer_point),
                          float(buf_near.buffer_point)]})


def criterion_9() -> CriterionResult:
    """Relaxation-oscillation scaling of the van der Pol cycle."""
    sc = relaxation_scaling([1e-4, 10.0 ** -3.3, 10.0 ** -2.5, 1e-2])
    period_ref = 3.0 - 2.0 * math.log(2.0)
    checks = {
        "delay_exponent": abs(sc.delay_exponent - 2.0 / 3.0) <= 0.05,
        "excursion_exponent": abs(sc.excursion_exponent - 1.0 / 3.0) <= 0.05,
        "period_limit": abs(sc.period_limit - period_ref) <= 0.02,
        "landing": sc.landing_worst <= 0.02,
    }
    return CriterionResult(9, "relaxation scaling", all(checks.values()), {
        "delay_exponent": round(float(sc.delay_exponent), 4),
        "excursion_exponent": round(float(sc.excursion_exponent), 4),
        "period_limit": round(float(sc.period_limit), 4),
        "period_reference": round(period_ref, 4),
        "landing_reference": -2.0,
        "landing_worst_gap": float(sc.landing_worst),
        "checks": checks})


def _limit_cycle_field() -> VectorField:
    def rhs(x, t, p):
        r2 = x[0] ** 2 + x[1] ** 2
        return np.array([x[0] * (1.0 - r2) - x[1],
                         x[1] * (1.0 - r2) + x[0]])
    return VectorField(2, rhs, name="limit-cycle")


def criterion_10() -> CriterionResult:
    """Floquet data of the circular limit cycle of r' = r(1 - r^2)."""
    fld = _limit_cycle_field()
    orbit = find_periodic_orbit(fld, [1.3, 0.0], t_guess=6.0)
    exps = np.log(np.abs(orbit.floquet.multipliers)) / orbit.period
    trivial_gap = float(np.min(np.abs(exps)))
    ce = characteristic_exponents(fld, orbit.orbit, orbit.period)
    checks = {
        "trivial_exponent_zero": trivial_gap < 1e-6,
        "sum_matches_divergence": ce.discrepancy < 1e-6,
        "nontrivial_is_minus_two": abs(ce.nontrivial + 2.0) < 1e-6,
    }
    return CriterionResult(10, "floquet exponents", all(checks.values()), {
        "trivial_gap": trivial_gap, "nontrivial": float(ce.nontrivial),
        "route_discrepancy": float(ce.discrepancy), "tol": 1e-6,
        "checks": checks})


def criterion_11() -> CriterionResult:
    """Diophantine certificates and the small-denominator floor."""
    sqrt2 = math.sqrt(2.0)
    res_sqrt2 = certify_type(sqrt2, 0.29, 1.0, q_max=10_000)
    res_gold = certify_type(GOLDEN_MEAN, 0.38, 1.0, q_max=10_000)
    res_rat = certify_type(Fraction(1, 3), 0.1, 1.0, q_max=100)
    floor_ok = all(
        unit_circle_gap(sqrt2, q) >= small_denominator_bound(0.29, 1.0, q)
        for q in range(1, 1001))
    checks = {
        "sqrt2_certified": bool(res_sqrt2.passed),
        "golden_certified": bool(res_gold.passed),
        "rational_rejected": not res_rat.passed,
        "rational_zero_margin": res_rat.worst_margin == 0.0,
        "gap_floor_to_q_1000": floor_ok,
    }
    return CriterionResult(11, "diophantine certificates",
                           all(checks.values()), {
        "sqrt2": [0.29, 1.0], "golden": [0.38, 1.0],
        "sqrt2_worst_q": int(res_sqrt2.worst_q),
        "golden_worst_q": int(res_gold.worst_q),
        "checks": checks})


def criterion_12() -> CriterionResult:
    """Homoclinic and Hopf curves of the double-zero unfolding."""
    l1 = -0.04
    s = math.sqrt(-l1)
    locus = homoclinic_locus(l1)
    ref = HOMOCLINIC_SLOPE * s
    band = 0.2 * abs(l1) ** 0.25 * s
    re_at = lambda l2: float(np.max(np.real(antisaddle_eigenvalues(l1, l2))))
    hopf_ok = (re_at(s - 1e-3) < 0.0 < re_at(s + 1e-3)
               and abs(re_at(s)) < 1e-9)
    diag = takens_bogdanov_diagram(l1, 0.5 * (locus + s),
                                   homoclinic_lambda2=locus)
    checks = {
        "homoclinic_in_band": abs(locus - ref) <= band,
        "hopf_on_sqrt_curve": hopf_ok,
        "between_curves_is_region_3": diag.region == 3,
    }
    return CriterionResult(12, "double-zero curves", all(checks.values()), {
        "lambda1": l1, "homoclinic_lambda2": float(locus),
        "reference": round(ref, 6), "band": round(band, 6),
        "hopf_lambda2": float(diag.hopf_lambda2), "checks": checks})


CRITERIA = {i: fn for i, fn in enumerate(
    [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
     criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
     criterion_11, criterion_12], start=1)}


def run_criterion(cid: int) -> CriterionResult:
    t0 = time.perf_counter()
    result = CRITERIA[cid]()
    result.elapsed_s = round(time.perf_counter() - t0, 3)
    return result


def run_all(ids=None) -> list[CriterionResult]:
    return [run_criterion(i) for i in (ids if ids is not None else CRITERIA)]
