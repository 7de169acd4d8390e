"""Periodic orbits, monodromy data and characteristic exponents."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .._quadrature import composite_gauss_legendre
from .rk import flow_map, integrate, jacobian_fd, variational_matrix
from .vectorfield import (FloquetData, SingularOrbitJacobian, Trajectory,
                          VectorField)

_MAX_NEWTON = 50
_COND_LIMIT = 1e12


@dataclass
class PeriodicOrbit:
    """Converged periodic orbit with its stability data."""

    orbit: Trajectory
    period: float
    floquet: FloquetData
    newton_iterations: int
    residual: float


def floquet_data(field: VectorField, x0, period: float,
                 tol: float = 1e-11) -> FloquetData:
    """Monodromy matrix, multipliers and exponents over one period."""
    traj = integrate(field, np.asarray(x0, dtype=float), (0.0, period), tol=tol)
    monodromy, samples = variational_matrix(field, traj, tol=tol)
    multipliers = np.linalg.eigvals(monodromy)
    exponents = np.log(multipliers.astype(complex)) / period
    div_int = composite_gauss_legendre(
        lambda t: field.divergence(traj.evaluate(t), t), 0.0, period)
    return FloquetData(period=period, monodromy=monodromy,
                       multipliers=multipliers, exponents=exponents,
                       principal_samples=samples,
                       det_monodromy=float(np.linalg.det(monodromy)),
                       divergence_integral=div_int)


def find_periodic_orbit(field: VectorField, x_guess, t_guess: Optional[float]
                        = None, tol: float = 1e-10) -> PeriodicOrbit:
    """Newton solve for a periodic orbit.

    For forced fields (``field.period`` set) the period is fixed to the
    forcing period times the nearest integer multiple suggested by
    ``t_guess`` and only the initial state is solved for.  For autonomous
    fields the period is an unknown and the phase is pinned by requiring
    the correction to stay orthogonal to the flow direction at the guess.

    Raises
    ------
    SingularOrbitJacobian
        When the Newton matrix is singular to working precision, e.g. on
        one-parameter families of closed orbits around a center.
    RuntimeError
        When Newton does not converge within 50 iterations.
    """
    x_guess = np.asarray(x_guess, dtype=float)
    dim = field.dimension
    flow_tol = min(tol * 1e-2, 1e-11)

    if field.period is not None:
        mult = 1 if t_guess is None else max(1, int(round(t_guess / field.period)))
        period = mult * field.period

        def fun(x):
            return flow_map(field, x, period, tol=flow_tol) - x

        x, n_iter, res = _newton(fun, x_guess, tol)
        return PeriodicOrbit(
            orbit=integrate(field, x, (0.0, period), tol=flow_tol),
            period=period, floquet=floquet_data(field, x, period),
            newton_iterations=n_iter, residual=res)

    if t_guess is None:
        raise ValueError("autonomous orbit search needs a period guess")
    f_ref = field.f(x_guess, 0.0)
    f_ref_norm = np.linalg.norm(f_ref)
    if f_ref_norm == 0.0:
        raise ValueError("guess is an equilibrium, not a periodic orbit")
    f_ref = f_ref / f_ref_norm

    def fun(z):
        x, period = z[:dim], z[dim]
        out = np.empty(dim + 1)
        out[:dim] = flow_map(field, x, period, tol=flow_tol) - x
        out[dim] = f_ref @ (x - x_guess)
        return out

    z0 = np.concatenate([x_guess, [float(t_guess)]])
    z, n_iter, res = _newton(fun, z0, tol)
    x, period = z[:dim], float(z[dim])
    return PeriodicOrbit(
        orbit=integrate(field, x, (0.0, period), tol=flow_tol),
        period=period, floquet=floquet_data(field, x, period),
        newton_iterations=n_iter, residual=res)


def _newton(fun, z0, tol):
    z = np.asarray(z0, dtype=float).copy()
    res = np.inf
    for it in range(1, _MAX_NEWTON + 1):
        r = fun(z)
        res = float(np.max(np.abs(r)))
        # conditioning is checked even at convergence: a singular matrix
        # there signals an orbit family or collapse onto an equilibrium
        jac = jacobian_fd(fun, z, step_scale=max(1.0, float(np.max(np.abs(z)))))
        cond = np.linalg.cond(jac)
        if not np.isfinite(cond) or cond > _COND_LIMIT:
            raise SingularOrbitJacobian(
                f"Newton matrix singular (cond={cond:.3e}); the orbit may "
                "belong to a continuous family or the solve may have "
                "collapsed onto an equilibrium")
        if res < tol:
            return z, it, res
        z = z - np.linalg.solve(jac, r)
    raise RuntimeError(f"periodic orbit Newton stalled at residual {res:.3e}")


@dataclass
class CharacteristicExponents:
    """Exponent pair (0, nontrivial) of a planar periodic orbit."""

    trivial: float
    nontrivial: float
    monodromy_route: float
    discrepancy: float
    hyperbolic: bool


def characteristic_exponents(field: VectorField, orbit: Trajectory,
                             period: float, hyperbolic_tol: float = 1e-6
                             ) -> CharacteristicExponents:
    """Characteristic exponents of a planar periodic orbit.

    The nontrivial exponent is the period average of the divergence,
    computed by composite Gauss-Legendre quadrature on the dense orbit
    and cross-checked against log det of the monodromy matrix.
    """
    if field.dimension != 2:
        raise ValueError("characteristic exponent shortcut is planar only")
    div_int = composite_gauss_legendre(
        lambda t: field.divergence(orbit.evaluate(t), t), orbit.t0,
        orbit.t0 + period)
    lam_quad = div_int / period
    fd = floquet_data(field, orbit.evaluate(orbit.t0), period)
    lam_mono = float(np.log(abs(fd.det_monodromy)) / period)
    return CharacteristicExponents(
        trivial=0.0, nontrivial=lam_quad, monodromy_route=lam_mono,
        discrepancy=abs(lam_quad - lam_mono),
        hyperbolic=abs(lam_quad) > hyperbolic_tol)
