"""Vector fields, trajectories and the result types of the flow toolbox."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np


class OdeError(RuntimeError):
    """Base class for integration failures."""


class NonFiniteRightHandSide(OdeError):
    """The vector field returned nan or inf.

    Attributes
    ----------
    time : float
        Time at which the offending evaluation happened.
    """

    def __init__(self, time: float, state: np.ndarray):
        self.time = float(time)
        self.state = np.asarray(state)
        super().__init__(f"vector field non-finite at t={time!r}")


class StepUnderflow(OdeError):
    """Adaptive step size collapsed below the resolvable scale.

    Carries the last good state and, when the norm history suggests a
    finite-time blow-up, a crude escape-time estimate obtained from a
    1/(t*-t) fit to the last two accepted samples.
    """

    def __init__(self, time: float, state: np.ndarray,
                 escape_time_estimate: Optional[float] = None):
        self.time = float(time)
        self.state = np.asarray(state)
        self.escape_time_estimate = escape_time_estimate
        msg = f"step size underflow at t={time!r}"
        if escape_time_estimate is not None:
            msg += f", escape time estimate t*={escape_time_estimate!r}"
        super().__init__(msg)


class SingularOrbitJacobian(OdeError):
    """Newton matrix for a periodic orbit solve is numerically singular."""


@dataclass
class VectorField:
    """Autonomous or periodically forced vector field ``dx/dt = rhs(x, t)``.

    Parameters
    ----------
    dimension : int
        Phase space dimension.
    rhs : callable
        ``rhs(x, t, params) -> array``.
    params : dict, optional
        Forwarded verbatim to ``rhs`` (and ``jac``).
    period : float, optional
        Period in t for forced fields; None marks an autonomous field.
    name : str
        Display name used in reports.
    jac : callable, optional
        ``jac(x, t, params) -> (dim, dim) array``; exact derivatives are
        used when given, otherwise central differences.
    """

    dimension: int
    rhs: Callable
    params: Optional[dict] = None
    period: Optional[float] = None
    name: str = ""
    jac: Optional[Callable] = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")

    def f(self, x, t):
        return np.asarray(self.rhs(np.asarray(x, dtype=float), t, self.params),
                          dtype=float)

    def jacobian(self, x, t, step_scale: float = 1.0):
        """Jacobian at (x, t), exact if available else central differences."""
        if self.jac is not None:
            return np.asarray(self.jac(np.asarray(x, dtype=float), t, self.params),
                              dtype=float)
        return _fd_jacobian(lambda y: self.f(y, t), np.asarray(x, dtype=float),
                            step_scale)

    def divergence(self, x, t):
        return float(np.trace(self.jacobian(x, t)))


def _fd_jacobian(fun, x, step_scale: float = 1.0):
    """Central-difference Jacobian with cbrt(machine eps) step scaling."""
    x = np.asarray(x, dtype=float)
    n = x.size
    f0 = np.asarray(fun(x), dtype=float)
    jac = np.empty((f0.size, n))
    base = np.cbrt(np.finfo(float).eps)
    for i in range(n):
        h = base * max(abs(x[i]), step_scale)
        e = np.zeros(n)
        e[i] = h
        jac[:, i] = (np.asarray(fun(x + e)) - np.asarray(fun(x - e))) / (2.0 * h)
    return jac


@dataclass
class IntegratorStats:
    """Bookkeeping for one integration run."""

    steps: int = 0
    rejected: int = 0
    tol: float = 0.0
    nfev: int = 0
    method: str = "rk45"


@dataclass
class Trajectory:
    """Dense solution of an initial value problem.

    ``times`` holds the accepted step endpoints in increasing order and
    ``states`` the matching states, one row per time.  The per-step
    interpolation polynomials are kept so that events and quadratures can
    evaluate the solution between stored samples.
    """

    times: np.ndarray
    states: np.ndarray
    stats: IntegratorStats
    segments: Sequence = field(default_factory=list, repr=False)

    @property
    def t0(self) -> float:
        return float(self.times[0])

    @property
    def t1(self) -> float:
        return float(self.times[-1])

    def __len__(self):
        return len(self.times)

    def evaluate(self, t):
        """Dense-output evaluation at scalar or array time t."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((t_arr.size, self.states.shape[1]))
        for j, tj in enumerate(t_arr):
            out[j] = self._eval_one(tj)
        if np.isscalar(t) or np.asarray(t).ndim == 0:
            return out[0]
        return out

    def _eval_one(self, t: float):
        eps = 1e-12 * max(1.0, abs(self.t1), abs(self.t0))
        if t < min(self.t0, self.t1) - eps or t > max(self.t0, self.t1) + eps:
            raise ValueError(f"time {t} outside trajectory range "
                             f"[{self.t0}, {self.t1}]")
        if not self.segments:
            # fall back to nearest stored sample
            idx = int(np.argmin(np.abs(self.times - t)))
            return self.states[idx].copy()
        ts = self.times
        idx = int(np.searchsorted(ts, t, side="right")) - 1
        idx = min(max(idx, 0), len(self.segments) - 1)
        seg = self.segments[idx]
        return seg.evaluate(t)


@dataclass
class PolySegment:
    """Local polynomial y(t0 + theta*h) = y0 + C @ [theta, ..., theta^deg]."""

    t_start: float
    h: float
    y0: np.ndarray
    coeffs: np.ndarray  # (dim, deg)

    def evaluate(self, t: float):
        theta = (t - self.t_start) / self.h
        deg = self.coeffs.shape[1]
        powers = theta ** np.arange(1, deg + 1)
        return self.y0 + self.coeffs @ powers


@dataclass
class SectionEvent:
    """One crossing of a Poincare section."""

    time: float
    state: np.ndarray
    crossing_index: int
    direction: int
    transversal: bool = True


@dataclass
class FloquetData:
    """Monodromy data of a periodic orbit.

    ``multipliers`` are eigenvalues of the monodromy matrix, ``exponents``
    their principal logarithms divided by the period.  ``det_monodromy``
    and ``divergence_integral`` record the two routes to the determinant
    identity det U(T) = exp(int_0^T tr A dt).
    """

    period: float
    monodromy: np.ndarray
    multipliers: np.ndarray
    exponents: np.ndarray
    principal_samples: list
    det_monodromy: float
    divergence_integral: float

    @property
    def det_identity_residual(self) -> float:
        return abs(self.det_monodromy - np.exp(self.divergence_integral))
