"""Slow-fast systems eps*dx/dt = f(x, y), dy/dt = g(x, y) and stock models."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..odeflow import VectorField

Array = np.ndarray


def _fd_jacobian(fun, x0: Array, n_out: int) -> Array:
    """Central-difference jacobian of fun at x0, one column per component."""
    x0 = np.asarray(x0, dtype=float)
    n_in = x0.size
    jac = np.empty((n_out, n_in))
    for j in range(n_in):
        h = (np.finfo(float).eps ** (1.0 / 3.0)) * max(1.0, abs(x0[j]))
        xp = x0.copy()
        xm = x0.copy()
        xp[j] += h
        xm[j] -= h
        jac[:, j] = (np.asarray(fun(xp), dtype=float)
                     - np.asarray(fun(xm), dtype=float)) / (2.0 * h)
    return jac


@dataclass
class SlowFastSystem:
    """Two-timescale system in standard form.

    Parameters
    ----------
    n_fast, n_slow : int
        Dimensions of the fast variable x and the slow variable y.
    f : callable
        ``f(x, y) -> array(n_fast)``, the fast drift (without the 1/eps).
    g : callable
        ``g(x, y) -> array(n_slow)``, the slow drift.
    name : str
    domain : array_like, optional
        ``(n_fast + n_slow, 2)`` box the model is trusted on; informational.
    fx, fy : callable, optional
        Exact derivatives ``d f/d x`` and ``d f/d y``; finite differences
        are used when absent.
    """

    n_fast: int
    n_slow: int
    f: Callable[[Array, Array], Array]
    g: Callable[[Array, Array], Array]
    name: str = "slow-fast system"
    domain: Optional[Array] = None
    fx: Optional[Callable[[Array, Array], Array]] = None
    fy: Optional[Callable[[Array, Array], Array]] = None

    def fast_jacobian(self, x, y) -> Array:
        """d f/d x at (x, y) as an (n_fast, n_fast) matrix."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if self.fx is not None:
            return np.asarray(self.fx(x, y), dtype=float).reshape(
                self.n_fast, self.n_fast)
        return _fd_jacobian(lambda xx: self.f(xx, y), x, self.n_fast)

    def f_slow_jacobian(self, x, y) -> Array:
        """d f/d y at (x, y) as an (n_fast, n_slow) matrix."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if self.fy is not None:
            return np.asarray(self.fy(x, y), dtype=float).reshape(
                self.n_fast, self.n_slow)
        return _fd_jacobian(lambda yy: self.f(x, yy), y, self.n_fast)

    def full_field(self, eps: float) -> VectorField:
        """The stacked (x, y) vector field at a concrete eps."""
        if eps <= 0:
            raise ValueError("eps must be positive")
        nf = self.n_fast

        def rhs(state, t, params):
            x = state[:nf]
            y = state[nf:]
            return np.concatenate([
                np.atleast_1d(np.asarray(self.f(x, y), dtype=float)) / eps,
                np.atleast_1d(np.asarray(self.g(x, y), dtype=float)),
            ])

        return VectorField(dimension=nf + self.n_slow, rhs=rhs,
                           name=f"{self.name} (eps={eps:g})")

    def reduced_field(self, chart) -> VectorField:
        """Slow flow dy/dt = g(x*(y), y) on a manifold chart."""

        def rhs(y, t, params):
            x = chart.x_star(y if self.n_slow > 1 else float(y[0]))
            return np.atleast_1d(np.asarray(self.g(x, y), dtype=float))

        return VectorField(dimension=self.n_slow, rhs=rhs,
                           name=f"{self.name} (reduced)")


def linear_decay_system(h: Callable[[float], float],
                        h_prime: Optional[Callable[[float], float]] = None
                        ) -> SlowFastSystem:
    """eps x' = -x + h(y), y' = 1: the scalar model with explicit solution."""

    def f(x, y):
        return np.array([-x[0] + h(float(y[0]))])

    def g(x, y):
        return np.array([1.0])

    fy = None
    if h_prime is not None:
        def fy(x, y):  # noqa: F811 - deliberate optional override
            return np.array([[h_prime(float(y[0]))]])

    return SlowFastSystem(n_fast=1, n_slow=1, f=f, g=g,
                          name="linear decay toward a driven state",
                          fx=lambda x, y: np.array([[-1.0]]), fy=fy)


def vdp_system() -> SlowFastSystem:
    """van der Pol oscillator in Lienard coordinates.

    eps x' = y - (x^3/3 - x),  y' = -x.  The cubic nullcline has folds at
    (1, -2/3) and (-1, 2/3); for small eps the attractor is a relaxation
    cycle hugging the branches |x| >= 1.
    """

    def f(x, y):
        return np.array([y[0] - (x[0] ** 3 / 3.0 - x[0])])

    def g(x, y):
        return np.array([-x[0]])

    return SlowFastSystem(
        n_fast=1, n_slow=1, f=f, g=g, name="van der Pol",
        fx=lambda x, y: np.array([[1.0 - x[0] ** 2]]),
        fy=lambda x, y: np.array([[1.0]]))


def delayed_hopf_system() -> SlowFastSystem:
    """eps z' = (y + i) z - |z|^2 z with z = x1 + i x2 and y' = 1.

    The origin is a slow "manifold" whose linearization has eigenvalues
    y +/- i: stable for y < 0, unstable for y > 0, with a Hopf bifurcation
    of the frozen system at y = 0.
    """

    def f(x, y):
        u, v = x
        s = u * u + v * v
        yy = y[0]
        return np.array([yy * u - v - s * u, u + yy * v - s * v])

    def g(x, y):
        return np.array([1.0])

    def fx(x, y):
        u, v = x
        s = u * u + v * v
        yy = y[0]
        return np.array([
            [yy - s - 2.0 * u * u, -1.0 - 2.0 * u * v],
            [1.0 - 2.0 * u * v, yy - s - 2.0 * v * v],
        ])

    return SlowFastSystem(n_fast=2, n_slow=1, f=f, g=g,
                          name="delayed Hopf normal form", fx=fx)


def drifted_hopf_system() -> SlowFastSystem:
    """Delayed Hopf with a drifting equilibrium: the buffer-point model.

    In original variables the slow manifold is x* = (-y, 0).  The shifted
    variable z = (x1 + y) + i x2 obeys eps z' = (y + i) z - |z|^2 z + eps,
    so the equilibrium drift injects a constant eps forcing that keeps z
    away from 0 and makes the naive eps-series break down at the buffer
    point.
    """

    def f(x, y):
        u = x[0] + y[0]
        v = x[1]
        s = u * u + v * v
        yy = y[0]
        return np.array([yy * u - v - s * u, u + yy * v - s * v])

    def g(x, y):
        return np.array([1.0])

    return SlowFastSystem(n_fast=2, n_slow=1, f=f, g=g,
                          name="drifted delayed Hopf")
