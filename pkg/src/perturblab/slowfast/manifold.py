"""Slow-manifold charts x = x*(y) by Newton continuation, with certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import scipy.interpolate
import scipy.linalg

from .system import SlowFastSystem

Array = np.ndarray


class FoldPointError(RuntimeError):
    """The fast jacobian lost invertibility along the manifold.

    A vanishing determinant of d f/d x is a fold of the critical set: the
    graph x = x*(y) ends there and the chart refuses to continue.  The
    location is carried for the caller.
    """

    def __init__(self, y: float, x: Array, det: float):
        self.y = float(y)
        self.x = np.asarray(x)
        self.det = float(det)
        super().__init__(
            f"fast jacobian singular near y={y:.6g} (det={det:.3e}): "
            "fold of the slow manifold")


class NotAttracting(RuntimeError):
    """Eigenvalues of the fast jacobian reach the closed right half plane."""


@dataclass
class SlowManifoldChart:
    """Sampled graph x = x*(y) over a scalar slow variable.

    ``x_star`` and its derivative interpolate the Newton-polished grid
    samples with cubic splines.  ``spectral_margin`` is the certified
    a0 > 0 with Re eig(A(y)) <= -a0 on the grid.
    """

    system: SlowFastSystem
    y_grid: Array
    x_values: Array                  # (m, n_fast)
    spectral_margin: float
    validity: Tuple[float, float]
    _splines: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.y_grid = np.asarray(self.y_grid, dtype=float)
        self.x_values = np.asarray(self.x_values, dtype=float)
        if not self._splines:
            self._splines = [
                scipy.interpolate.CubicSpline(self.y_grid, self.x_values[:, j])
                for j in range(self.x_values.shape[1])]

    def x_star(self, y) -> Array:
        y = float(np.atleast_1d(y)[0])
        return np.array([s(y) for s in self._splines])

    def dx_star_dy(self, y) -> Array:
        """Spline derivative of the graph."""
        y = float(np.atleast_1d(y)[0])
        return np.array([s(y, 1) for s in self._splines])

    def implicit_derivative(self, y) -> Array:
        """The independent route: dx*/dy = -A(y)^{-1} df/dy."""
        x = self.x_star(y)
        a = self.A(y)
        fy = self.system.f_slow_jacobian(x, np.atleast_1d(float(y)))
        return -np.linalg.solve(a, fy).ravel()

    def A(self, y) -> Array:
        """Fast jacobian d f/d x evaluated on the manifold."""
        return self.system.fast_jacobian(self.x_star(y),
                                         np.atleast_1d(float(y)))

    def residual_sup(self) -> float:
        """max over the grid of ||f(x*(y), y)||."""
        worst = 0.0
        for yi, xi in zip(self.y_grid, self.x_values):
            r = np.linalg.norm(np.asarray(
                self.system.f(xi, np.array([yi])), dtype=float))
            worst = max(worst, float(r))
        return worst

    def eigenvalue_margin(self) -> float:
        """min over the grid of -max Re eig(A(y))."""
        margin = np.inf
        for yi in self.y_grid:
            ev = np.linalg.eigvals(self.A(yi))
            margin = min(margin, float(-np.max(ev.real)))
        return margin

    def lyapunov_form(self, y) -> Array:
        """P solving A^T P + P A = -I: a quadratic decay certificate.

        For n_fast > 1 the norm ||z||_P = sqrt(z^T P z) decays along the
        frozen fast flow even when A is not symmetric, which makes P the
        multidimensional replacement for a scalar spectral gap.
        """
        a = self.A(y)
        return scipy.linalg.solve_continuous_lyapunov(
            a.T, -np.eye(self.system.n_fast))

    def lyapunov_margin(self, y) -> float:
        """Guaranteed decay rate 1/(2 lambda_max(P)) of the P-norm."""
        p = self.lyapunov_form(y)
        return 1.0 / (2.0 * float(np.max(np.linalg.eigvalsh(p))))

    def distance(self, x, y) -> float:
        """Euclidean distance of a fast state from the graph at y."""
        return float(np.linalg.norm(np.asarray(x, dtype=float)
                                    - self.x_star(y)))


def _newton_point(system: SlowFastSystem, y: float, x0: Array,
                  tol: float, max_iter: int, fold_tol: float) -> Array:
    x = np.asarray(x0, dtype=float).copy()
    yv = np.array([y])
    most_singular = (np.inf, x)
    for _ in range(max_iter):
        fv = np.atleast_1d(np.asarray(system.f(x, yv), dtype=float))
        a = system.fast_jacobian(x, yv)
        sv = np.linalg.svd(a, compute_uv=False)
        rel = sv[-1] / max(1.0, sv[0])
        if rel < fold_tol:
            raise FoldPointError(y, x, float(np.linalg.det(a)))
        if rel < most_singular[0]:
            most_singular = (rel, x.copy())
        step = np.linalg.solve(a, fv)
        x = x - step
        if np.linalg.norm(fv) < tol * (1.0 + np.linalg.norm(x)) and \
                np.linalg.norm(step) < tol * (1.0 + np.linalg.norm(x)):
            return x
    # a stall that visited a near-singular jacobian is how a vanished root
    # (grid points past a fold) shows up in practice
    if most_singular[0] < 0.05:
        xf = most_singular[1]
        raise FoldPointError(y, xf, float(np.linalg.det(
            system.fast_jacobian(xf, yv))))
    raise RuntimeError(f"manifold Newton stalled at y={y:.6g}")


def slow_manifold(system: SlowFastSystem, y_grid, x_guess,
                  tol: float = 1e-12, max_iter: int = 60,
                  fold_tol: float = 1e-8,
                  require_attracting: bool = True) -> SlowManifoldChart:
    """Continue the root of f(x, y) = 0 along a scalar y grid.

    Newton at the first grid point starts from ``x_guess``; each later
    point is seeded by a tangent predictor from the previous solution.
    A singular fast jacobian raises FoldPointError with the location --
    a fold is data, not something to step over.
    """
    if system.n_slow != 1:
        raise ValueError("charts are built over a scalar slow variable")
    y_grid = np.asarray(y_grid, dtype=float)
    if y_grid.ndim != 1 or y_grid.size < 4:
        raise ValueError("y_grid must be a 1-d grid with at least 4 points")
    steps = np.diff(y_grid)
    if not (np.all(steps > 0) or np.all(steps < 0)):
        raise ValueError("y_grid must be strictly monotone")

    xs = np.empty((y_grid.size, system.n_fast))
    x = _newton_point(system, y_grid[0], np.atleast_1d(x_guess),
                      tol, max_iter, fold_tol)
    xs[0] = x
    for i in range(1, y_grid.size):
        dy = y_grid[i] - y_grid[i - 1]
        a = system.fast_jacobian(x, np.array([y_grid[i - 1]]))
        fy = system.f_slow_jacobian(x, np.array([y_grid[i - 1]]))
        predictor = x - dy * np.linalg.solve(a, fy).ravel()
        x = _newton_point(system, y_grid[i], predictor, tol, max_iter, fold_tol)
        if np.linalg.norm(x - xs[i - 1]) > 0.5 * (1.0 + np.linalg.norm(xs[i - 1])):
            # the root moved across the domain in one grid step: the branch
            # being continued ended (fold) and Newton tunneled to another one
            raise FoldPointError(y_grid[i], xs[i - 1], float(np.linalg.det(a)))
        xs[i] = x

    if steps[0] < 0:
        y_grid = y_grid[::-1].copy()
        xs = xs[::-1].copy()
    chart = SlowManifoldChart(
        system=system, y_grid=y_grid, x_values=xs, spectral_margin=0.0,
        validity=(float(y_grid[0]), float(y_grid[-1])))
    margin = chart.eigenvalue_margin()
    if require_attracting and margin <= 0.0:
        raise NotAttracting(
            f"fast spectrum reaches Re = {-margin:.3e} >= 0 on the grid")
    chart.spectral_margin = margin
    return chart
