"""Adaptive embedded Runge-Kutta 5(4) and fixed-step implicit midpoint."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .vectorfield import (IntegratorStats, NonFiniteRightHandSide, PolySegment,
                          StepUnderflow, Trajectory, VectorField, _fd_jacobian)

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array([
    [0, 0, 0, 0, 0, 0],
    [1 / 5, 0, 0, 0, 0, 0],
    [3 / 40, 9 / 40, 0, 0, 0, 0],
    [44 / 45, -56 / 15, 32 / 9, 0, 0, 0],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0],
])
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
                187 / 2100, 1 / 40])

# quartic dense-output weights (Shampine)
_P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608,
     -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933,
     87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304,
     -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408,
     701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883,
     -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

_BLOWUP_NORM = 1e8


def _escape_estimate(t_prev, n_prev, t_last, n_last):
    """Escape time from a 1/(t*-t) fit to the last two norm samples."""
    if n_last <= n_prev or n_prev <= 0.0:
        return None
    ratio = n_last / n_prev
    return t_last + (t_last - t_prev) / (ratio - 1.0)


def integrate(field: VectorField, x0, t_span, tol: float = 1e-9,
              method: str = "rk45", max_step: Optional[float] = None,
              first_step: Optional[float] = None,
              dense: bool = True) -> Trajectory:
    """Integrate ``field`` from ``x0`` over ``t_span``.

    Parameters
    ----------
    field : VectorField
    x0 : array_like
        Initial state; its length must match ``field.dimension``.
    t_span : (float, float)
        Increasing time interval.
    tol : float
        Relative tolerance of the embedded pair; the absolute floor is
        ``tol * 1e-3``.
    method : {"rk45", "implicit_midpoint"}
    max_step : float, optional
    first_step : float, optional
        For ``implicit_midpoint`` this is the fixed step.
    dense : bool
        Keep per-step interpolation polynomials.

    Returns
    -------
    Trajectory

    Raises
    ------
    NonFiniteRightHandSide
        When the field evaluates to nan or inf.
    StepUnderflow
        When the controller cannot resolve the solution; for norms past
        1e8 the error carries an escape-time estimate.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (field.dimension,):
        raise ValueError(f"x0 has shape {x0.shape}, expected ({field.dimension},)")
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise ValueError("t_span must be increasing")
    if method == "rk45":
        return _integrate_rk45(field, x0, t0, t1, tol, max_step, first_step, dense)
    if method == "implicit_midpoint":
        h = first_step if first_step is not None else (t1 - t0) / 1000.0
        return _integrate_midpoint(field, x0, t0, t1, h, tol, dense)
    raise ValueError(f"unknown method {method!r}")


def _integrate_rk45(field, x0, t0, t1, tol, max_step, first_step, dense):
    rtol = tol
    atol = tol * 1e-3
    stats = IntegratorStats(tol=tol, method="rk45")

    def f(x, t):
        stats.nfev += 1
        val = field.f(x, t)
        if not np.all(np.isfinite(val)):
            raise NonFiniteRightHandSide(t, x)
        return val

    t = t0
    y = x0.copy()
    k0 = f(y, t)
    # standard starting step from the local scale
    scale = atol + rtol * np.abs(y)
    d0 = np.sqrt(np.mean((y / scale) ** 2))
    d1 = np.sqrt(np.mean((k0 / scale) ** 2))
    h = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    if first_step is not None:
        h = first_step
    if max_step is not None:
        h = min(h, max_step)
    h = min(h, t1 - t0)

    times = [t]
    states = [y.copy()]
    segments = []
    K = np.empty((7, y.size))
    prev_norm = float(np.linalg.norm(y))
    prev_t = t
    err_prev = 1.0  # PI controller memory

    while t < t1:
        h = min(h, t1 - t)
        h_floor = 16.0 * np.finfo(float).eps * max(abs(t), 1.0)
        if h < h_floor:
            n_now = float(np.linalg.norm(y))
            est = _escape_estimate(prev_t, prev_norm, t, n_now) \
                if n_now > _BLOWUP_NORM else None
            raise StepUnderflow(t, y, est)
        K[0] = k0
        for i in range(1, 6):
            K[i] = f(y + h * (_A[i, :i] @ K[:i]), t + _C[i] * h)
        y_new = y + h * (_B5[:6] @ K[:6])
        K[6] = f(y_new, t + h)
        err_vec = h * ((_B5 - _B4) @ K)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = np.sqrt(np.mean((err_vec / scale) ** 2))
        if err <= 1.0:
            stats.steps += 1
            if dense:
                coeffs = h * (K.T @ _P)
                segments.append(PolySegment(t, h, y.copy(), coeffs))
            prev_norm = float(np.linalg.norm(y))
            prev_t = t
            t += h
            y = y_new
            k0 = K[6].copy()  # detach from the stage buffer before reuse
            times.append(t)
            states.append(y.copy())
            if np.linalg.norm(y) > _BLOWUP_NORM:
                est = _escape_estimate(prev_t, prev_norm, t,
                                       float(np.linalg.norm(y)))
                raise StepUnderflow(t, y, est)
            # PI step control: smoother than the pure deadbeat rule
            if err > 0:
                factor = 0.9 * err ** (-0.7 / 5.0) * err_prev ** (0.4 / 5.0)
                factor = min(5.0, max(0.2, factor))
            else:
                factor = 5.0
            err_prev = max(err, 1e-10)
        else:
            stats.rejected += 1
            factor = max(0.2, 0.9 * err ** (-0.2))
        h *= factor
        if max_step is not None:
            h = min(h, max_step)

    return Trajectory(np.asarray(times), np.asarray(states), stats, segments)


def _integrate_midpoint(field, x0, t0, t1, h, tol, dense):
    """Fixed-step implicit midpoint, Newton-solved to 1e-12 per step."""
    stats = IntegratorStats(tol=tol, method="implicit_midpoint")
    n_steps = max(1, int(round((t1 - t0) / h)))
    h = (t1 - t0) / n_steps
    t = t0
    y = x0.copy()
    times = [t]
    states = [y.copy()]
    segments = []
    ident = np.eye(y.size)
    for _ in range(n_steps):
        tm = t + 0.5 * h

        def residual(y_new):
            return y_new - y - h * field.f(0.5 * (y + y_new), tm)

        y_new = y + h * field.f(y, t)  # explicit Euler predictor
        stats.nfev += 1
        for _newton in range(30):
            r = residual(y_new)
            stats.nfev += 1
            if np.max(np.abs(r)) < 1e-12 * (1.0 + np.max(np.abs(y_new))):
                break
            jac_mid = field.jacobian(0.5 * (y + y_new), tm)
            jac = ident - 0.5 * h * jac_mid
            y_new = y_new - np.linalg.solve(jac, r)
        if dense:
            f0 = field.f(y, t)
            f1 = field.f(y_new, t + h)
            stats.nfev += 2
            # cubic Hermite in theta
            dy = y_new - y
            c1 = h * f0
            c2 = 3.0 * dy - h * (2.0 * f0 + f1)
            c3 = -2.0 * dy + h * (f0 + f1)
            segments.append(PolySegment(t, h, y.copy(),
                                        np.column_stack([c1, c2, c3])))
        t += h
        y = y_new
        stats.steps += 1
        times.append(t)
        states.append(y.copy())
        if not np.all(np.isfinite(y)):
            raise NonFiniteRightHandSide(t, y)
    return Trajectory(np.asarray(times), np.asarray(states), stats, segments)


def flow_map(field: VectorField, x0, t_total: float, tol: float = 1e-10):
    """State after time ``t_total`` starting at ``x0`` (convenience)."""
    traj = integrate(field, x0, (0.0, t_total), tol=tol, dense=False)
    return traj.states[-1]


def variational_matrix(field: VectorField, traj: Trajectory,
                       tol: float = 1e-10, n_samples: int = 33):
    """Fundamental matrix U(t) along a trajectory, U(t0) = I.

    Integrates dU/dt = A(x(t), t) U with x(t) taken from the dense output
    of ``traj``.  Returns (U_final, samples) where samples is a list of
    (t, U(t)) snapshots at ``n_samples`` equispaced times.
    """
    dim = traj.states.shape[1]

    def rhs(u_flat, t, _params):
        a = field.jacobian(traj.evaluate(t), t)
        return (a @ u_flat.reshape(dim, dim)).ravel()

    var_field = VectorField(dim * dim, rhs, name="variational")
    u_traj = integrate(var_field, np.eye(dim).ravel(), (traj.t0, traj.t1),
                       tol=tol)
    sample_ts = np.linspace(traj.t0, traj.t1, n_samples)
    samples = [(float(t), u_traj.evaluate(t).reshape(dim, dim))
               for t in sample_ts]
    return u_traj.states[-1].reshape(dim, dim), samples


def jacobian_fd(fun, x, step_scale: float = 1.0):
    """Central-difference Jacobian of a map (re-export for Newton solvers)."""
    return _fd_jacobian(fun, x, step_scale)
