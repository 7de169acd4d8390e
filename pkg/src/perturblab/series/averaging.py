"""Time averaging of periodically forced slow systems.

For xdot = eps g(x, t) with g periodic in t, the averaged field
gbar(y) = (1/T) int_0^T g(y, s) ds drives ydot = eps gbar(y); the
first-order corrector w(y, t) is the zero-mean primitive of the
oscillating part.  The guide solution tracks the true one to O(eps)
on time spans of order 1/eps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._quadrature import composite_gauss_legendre
from ..odeflow import VectorField, integrate


@dataclass
class AveragingComparison:
    times: np.ndarray
    full_states: np.ndarray
    averaged_states: np.ndarray
    sup_error: float


class AveragedSystem:
    """Averaged field, corrector, and guide-vs-true comparison."""

    def __init__(self, field: VectorField, period: float, n_quad_panels: int = 16):
        self.field = field
        self.period = float(period)
        self.n_quad_panels = n_quad_panels

    def gbar(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        val = composite_gauss_legendre(lambda s: self.field.f(y, s),
                                       0.0, self.period, panels=self.n_quad_panels)
        return val / self.period

    def bar_vectorfield(self) -> VectorField:
        return VectorField(
            dimension=self.field.dimension,
            rhs=lambda x, t, params: self.gbar(x),
            name=(self.field.name or "field") + "-averaged",
        )

    def corrector(self, y, t: float) -> np.ndarray:
        """Zero-mean primitive of the oscillation, int_0^t (g - gbar) ds."""
        y = np.asarray(y, dtype=float)
        gb = self.gbar(y)
        panels = max(4, int(abs(t) / self.period * 4) + 1)
        return composite_gauss_legendre(lambda s: self.field.f(y, s) - gb,
                                        0.0, t, panels=panels)

    def compare(self, x0, eps: float, t_final: float | None = None,
                tol: float = 1e-10, n_samples: int = 400) -> AveragingComparison:
        """Integrate the true and averaged systems and report the sup error."""
        if t_final is None:
            t_final = 1.0 / eps
        x0 = np.asarray(x0, dtype=float)

        full = VectorField(
            dimension=self.field.dimension,
            rhs=lambda x, t, params: eps * self.field.f(x, t),
            name="full")
        avg = VectorField(
            dimension=self.field.dimension,
            rhs=lambda x, t, params: eps * self.gbar(x),
            name="averaged")

        traj_full = integrate(full, x0, (0.0, t_final), tol=tol)
        traj_avg = integrate(avg, x0, (0.0, t_final), tol=tol)

        times = np.linspace(0.0, t_final, n_samples)
        xs = np.array([traj_full.evaluate(t) for t in times])
        ys = np.array([traj_avg.evaluate(t) for t in times])
        sup = float(np.max(np.linalg.norm(xs - ys, axis=1)))
        return AveragingComparison(times=times, full_states=xs,
                                   averaged_states=ys, sup_error=sup)


def averaged_field(field: VectorField, period: float,
                   n_quad_panels: int = 16) -> AveragedSystem:
    return AveragedSystem(field, period, n_quad_panels)


def averaging_error_scaling(field: VectorField, period: float, x0,
                            eps_values, tol: float = 1e-10):
    """Sup errors over [0, 1/eps] for each eps and the log-log slope."""
    system = AveragedSystem(field, period)
    errors = [system.compare(x0, eps, tol=tol).sup_error for eps in eps_values]
    logs_e = np.log(np.asarray(eps_values, dtype=float))
    logs_err = np.log(np.asarray(errors))
    slope = float(np.polyfit(logs_e, logs_err, 1)[0])
    return errors, slope
