"""Relaxation oscillations of the van der Pol system at small eps.

The cycle hugs the outer branches of the cubic nullcline y = x^3/3 - x and
jumps at the folds (1, -2/3) and (-1, 2/3).  The singular cycle has period
T0 = 3 - 2 ln 2 in the slow time; at finite eps the trajectory overshoots
each fold before jumping, and the overshoot obeys fractional power laws:
the y-undershoot past the fold scales like eps^(2/3) and the x-excursion
beyond the fold sheet like eps^(1/3).

The O(1) constants in those laws come from a universal fold problem
du/dv = -u^2 - v, whose solution is a logarithmic derivative of an Airy
function: it blows up at the first Airy zero and passes through
-Ai'(0)/Ai(0) at v = 0.  ``fold_crossing_constant`` recovers both by
direct integration, without special functions, so the pair can be checked
against an independent Airy oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..odeflow import HyperplaneSection, VectorField, integrate, poincare_section
from .system import SlowFastSystem, vdp_system

Array = np.ndarray

# singular-cycle period: time to slide each branch between fold heights
T0_SINGULAR = 3.0 - 2.0 * math.log(2.0)


@dataclass
class RelaxationMetrics:
    """One measured lap of the relaxation cycle at a concrete eps."""

    eps: float
    period: float
    jump_delay: float        # -2/3 minus the lowest y reached past the fold
    excursion: float         # x - 1 where the orbit crosses the fold height
    landing_x: float         # x at the return to the fold height, left branch
    fixed_point_gap: float   # return-map convergence: |y_n+1 - y_n| on section


@dataclass
class RelaxationScaling:
    """Power-law fits of the fold overshoots across a list of eps values."""

    metrics: List[RelaxationMetrics]
    eps: Array
    delay_exponent: float
    delay_prefactor: float
    excursion_exponent: float
    excursion_prefactor: float
    period_limit: float           # extrapolated eps -> 0 period
    period_correction: float      # coefficient of eps^(2/3) in the period
    landing_worst: float          # max |landing_x + 2| over the sweep

    def summary(self) -> dict:
        return {
            "eps": [float(e) for e in self.eps],
            "period": [m.period for m in self.metrics],
            "jump_delay": [m.jump_delay for m in self.metrics],
            "excursion": [m.excursion for m in self.metrics],
            "landing_x": [m.landing_x for m in self.metrics],
            "delay_exponent": self.delay_exponent,
            "delay_prefactor": self.delay_prefactor,
            "excursion_exponent": self.excursion_exponent,
            "excursion_prefactor": self.excursion_prefactor,
            "period_limit": self.period_limit,
            "period_correction": self.period_correction,
            "landing_worst": self.landing_worst,
        }


def relaxation_cycle(eps: float, system: SlowFastSystem = None,
                     tol: float = 1e-9) -> RelaxationMetrics:
    """Measure one converged lap of the van der Pol relaxation cycle.

    Starts on the attracting right branch at (2, 2/3) (branch attraction is
    exponential in 1/eps, so one lap converges the return map to roundoff)
    and reads the cycle off two Poincare sections: x = 0 with downward
    crossings for the period and the deepest y, and y = -2/3 for the fold
    excursion and the landing point of the jump.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if eps > 0.1:
        raise ValueError("no relaxation cycle regime at this eps; the "
                         "branch-following analysis needs eps <= 0.1")
    if system is None:
        system = vdp_system()
    field = system.full_field(eps)
    x0 = np.array([2.0, 2.0 / 3.0])

    # downward x = 0 crossings: one per right-to-left jump
    sec_x = HyperplaneSection([1.0, 0.0], 0.0)
    ev_x = poincare_section(field, sec_x, x0, n_crossings=2, t_max=6.0,
                            direction=-1, tol=tol)
    period = ev_x[1].time - ev_x[0].time
    jump_delay = -2.0 / 3.0 - ev_x[1].state[1]
    gap = abs(ev_x[1].state[1] - ev_x[0].state[1])

    # fold-height crossings: right branch descending, then the landing
    sec_y = HyperplaneSection([0.0, 1.0], -2.0 / 3.0)
    ev_y = poincare_section(field, sec_y, x0, n_crossings=2, t_max=6.0,
                            direction=0, tol=tol)
    excursion = ev_y[0].state[0] - 1.0
    landing_x = ev_y[1].state[0]

    return RelaxationMetrics(eps=eps, period=period, jump_delay=jump_delay,
                             excursion=excursion, landing_x=landing_x,
                             fixed_point_gap=gap)


def _loglog_fit(eps: Array, vals: Array) -> Tuple[float, float]:
    """Fit vals ~ prefactor * eps^exponent; returns (exponent, prefactor)."""
    slope, intercept = np.polyfit(np.log(eps), np.log(vals), 1)
    return float(slope), float(math.exp(intercept))


def relaxation_scaling(eps_list: Sequence[float],
                       tol: float = 1e-9) -> RelaxationScaling:
    """Fold-overshoot power laws and the period extrapolation to eps = 0.

    The period is fitted as T(eps) = T_limit + c * eps^(2/3), the known
    form of the leading finite-eps correction; the limit should land on
    3 - 2 ln 2.
    """
    eps_arr = np.asarray(sorted(eps_list, reverse=True), dtype=float)
    if eps_arr.size < 2:
        raise ValueError("need at least two eps values to fit exponents")
    metrics = [relaxation_cycle(e, tol=tol) for e in eps_arr]

    delays = np.array([m.jump_delay for m in metrics])
    excursions = np.array([m.excursion for m in metrics])
    periods = np.array([m.period for m in metrics])

    d_exp, d_pref = _loglog_fit(eps_arr, delays)
    x_exp, x_pref = _loglog_fit(eps_arr, excursions)

    design = np.column_stack([np.ones_like(eps_arr), eps_arr ** (2.0 / 3.0)])
    coef, *_ = np.linalg.lstsq(design, periods, rcond=None)

    return RelaxationScaling(
        metrics=metrics, eps=eps_arr,
        delay_exponent=d_exp, delay_prefactor=d_pref,
        excursion_exponent=x_exp, excursion_prefactor=x_pref,
        period_limit=float(coef[0]), period_correction=float(coef[1]),
        landing_worst=float(max(abs(m.landing_x + 2.0) for m in metrics)))


@dataclass
class FoldConstants:
    """Universal constants of the fold passage du/dv = -u^2 - v.

    ``v_blowup`` locates the forward blow-up (the first Airy zero,
    2.33811...): in the original variables the orbit tears off the branch
    a height v_blowup * eps^(2/3) past the fold.  ``u_origin`` is the
    profile value at v = 0 (-Ai'(0)/Ai(0) = 0.72901...): the orbit crosses
    the fold height at a distance u_origin * eps^(1/3) beyond the fold.
    """

    v_blowup: float
    u_origin: float


def fold_crossing_constant(v_far: float = 12.0,
                           tol: float = 1e-12) -> FoldConstants:
    """Integrate the universal fold profile and locate its blow-up.

    The relevant solution is the one attached to the attracting branch,
    u ~ sqrt(-v) as v -> -infinity; it is seeded from the two-term
    asymptotics at v = -v_far (the profile contracts onto this branch
    exponentially, so seed error is irrelevant).  Near blow-up the
    reciprocal w = 1/u obeys the regular equation w' = 1 + v w^2, and the
    blow-up is the upward zero crossing of w.
    """
    if v_far < 4.0:
        raise ValueError("seed point too close to the fold for the "
                         "asymptotic branch formula")
    u_seed = math.sqrt(v_far) + 1.0 / (4.0 * v_far)

    ric = VectorField(dimension=1,
                      rhs=lambda u, v, p: np.array([-u[0] ** 2 - v]),
                      name="fold profile")
    leg1 = integrate(ric, [u_seed], (-v_far, 1.5), tol=tol)
    u_origin = float(leg1.evaluate(0.0)[0])
    u_end = float(leg1.evaluate(1.5)[0])
    if u_end >= 0:
        raise RuntimeError("profile failed to turn over before v = 1.5")

    # the section integrator starts its clock at 0: shift to v = 1.5 + t
    rec = VectorField(dimension=1,
                      rhs=lambda w, t, p: np.array([1.0 + (1.5 + t) * w[0] ** 2]),
                      name="fold profile reciprocal")
    sec = HyperplaneSection([1.0], 0.0)
    # w itself blows up further on (u has another zero near v = 3.25), so
    # the search horizon stops well before that
    ev = poincare_section(rec, sec, [1.0 / u_end], n_crossings=1,
                          t_max=1.2, direction=1, tol=tol)
    # poincare time starts at 0; shift back to the v axis
    return FoldConstants(v_blowup=1.5 + ev[0].time, u_origin=u_origin)
