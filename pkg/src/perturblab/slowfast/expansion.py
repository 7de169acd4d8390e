"""Iterative eps-expansions around a slow manifold and optimal truncation.

Plugging x = x*(y) + sum_j eps^j u_j(y) into eps x' = f(x, y), y' = g(x, y)
and matching powers of eps gives, per grid point,

    A u_1 = x*' g0
    A u_2 = x*' g_x u_1 + u_1' g0 - f_xx u_1^2 / 2
    A u_3 = x*' (g_x u_2 + g_xx u_1^2 / 2) + u_1' g_x u_1 + u_2' g0
            - f_xx u_1 u_2 - f_xxx u_1^3 / 6

with every coefficient evaluated on the manifold.  The amplitudes sup|u_j|
typically grow like j! (Gevrey-1), so the series is asymptotic rather than
convergent and the best achievable remainder is exponentially small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence

import numpy as np
import scipy.interpolate

from .manifold import SlowManifoldChart
from .system import SlowFastSystem

Array = np.ndarray


@dataclass
class AsymptoticExpansion:
    """Correction terms u_0 = x*, u_1, ..., u_r sampled on a y grid.

    ``terms`` has shape (r+1, m, n_fast); synthetic expansions built from
    amplitude sequences alone carry ``terms=None``.  ``amplitudes[j]`` is
    the sup norm of u_j over the grid.
    """

    order: int
    amplitudes: Array
    y_grid: Optional[Array] = None
    terms: Optional[Array] = None
    label: str = ""

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=float)
        if self.amplitudes.shape != (self.order + 1,):
            raise ValueError("need one amplitude per term u_0..u_r")

    @classmethod
    def from_amplitudes(cls, amplitudes, label="synthetic"):
        amps = np.asarray(amplitudes, dtype=float)
        return cls(order=amps.size - 1, amplitudes=amps, label=label)

    def evaluate(self, eps: float, k: Optional[int] = None) -> Array:
        """Partial sum x*(y) + sum_{j<=k} eps^j u_j(y) on the grid."""
        if self.terms is None:
            raise ValueError("synthetic expansion has no term functions")
        k = self.order if k is None else int(k)
        if not 0 <= k <= self.order:
            raise ValueError("truncation order out of range")
        powers = eps ** np.arange(k + 1)
        return np.tensordot(powers, self.terms[:k + 1], axes=(0, 0))

    def amplitude_ratios(self) -> Array:
        """amplitudes[k+1]/amplitudes[k]; the Gevrey signature is growth ~ k."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.amplitudes[1:] / self.amplitudes[:-1]

    def disordering_index(self, eps: float) -> int:
        """First k >= 1 where the terms eps^k amp(k) stop decreasing.

        Returns the expansion order when the terms are still ordered, i.e.
        the computed stretch of the series looks convergent at this eps.
        """
        vals = self.amplitudes * eps ** np.arange(self.order + 1)
        for k in range(1, self.order):
            if vals[k + 1] >= vals[k] > 0:
                return k
        return self.order


@dataclass
class TruncationResult:
    """Outcome of minimizing eps^k * amplitude(k) over 1 <= k <= r."""

    k_star: int
    remainder_estimate: float
    values: Array          # values[k] = eps^k amp(k), index 0 unused for argmin
    disordered: bool       # False: terms were still shrinking at k = r


def optimal_truncation(expansion: AsymptoticExpansion,
                       eps: float) -> TruncationResult:
    """Smallest-term truncation of an asymptotic series.

    For Gevrey-1 growth amp(k) ~ k! the minimizer sits near k = 1/eps and
    the minimized term is ~ e^{-1/eps} up to a factor of order sqrt(2 pi k)
    (Stirling).  Ties resolve to the larger k.  When the terms are still
    strictly decreasing at k = r the series is not yet disordered: k* = r
    is returned with ``disordered=False`` so the caller knows the estimate
    is only an upper bound.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    r = expansion.order
    if r < 1:
        raise ValueError("need at least one correction term")
    vals = expansion.amplitudes * eps ** np.arange(r + 1)
    k_star = 1
    for k in range(2, r + 1):
        if vals[k] <= vals[k_star] * (1.0 + 1e-9):
            k_star = k
    disordered = any(vals[k + 1] >= vals[k] > 0 for k in range(1, r))
    return TruncationResult(k_star=k_star,
                            remainder_estimate=float(vals[k_star]),
                            values=vals, disordered=disordered)


def _second_derivative(fun, x0: float, scale: float) -> float:
    h = (np.finfo(float).eps ** 0.25) * scale
    return (fun(x0 + h) - 2.0 * fun(x0) + fun(x0 - h)) / (h * h)


def _third_derivative(fun, x0: float, scale: float) -> float:
    h = (np.finfo(float).eps ** (1.0 / 6.0)) * scale
    return (fun(x0 + 2 * h) - 2.0 * fun(x0 + h)
            + 2.0 * fun(x0 - h) - fun(x0 - 2 * h)) / (2.0 * h ** 3)


def _grid_derivative(y: Array, values: Array) -> Array:
    return scipy.interpolate.CubicSpline(y, values)(y, 1)


def asymptotic_expansion(system: SlowFastSystem, chart: SlowManifoldChart,
                         r: int) -> AsymptoticExpansion:
    """Compute u_1..u_r on the chart grid by the order-matching recursion.

    Orders beyond the first need scalar fast and slow variables (the only
    case the correction formulas are coded for); r is capped at 3.  For
    arbitrary order in the scalar linear model use scalar_drive_expansion.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if r > 3:
        raise ValueError("generic recursion implemented through order 3; "
                         "use scalar_drive_expansion for longer series")
    if r > 1 and system.n_fast != 1:
        raise ValueError("orders >= 2 need a scalar fast variable")

    y = chart.y_grid
    m = y.size
    nf = system.n_fast
    terms = np.empty((r + 1, m, nf))
    terms[0] = chart.x_values

    g0 = np.array([float(np.atleast_1d(
        system.g(chart.x_values[i], np.array([y[i]])))[0])
        for i in range(m)])
    dx = np.column_stack([_grid_derivative(y, chart.x_values[:, j])
                          for j in range(nf)])

    # u_1 = A^{-1} x*' g0, any fast dimension
    for i in range(m):
        a = system.fast_jacobian(chart.x_values[i], np.array([y[i]]))
        terms[1, i] = np.linalg.solve(a, dx[i] * g0[i])

    if r >= 2:
        a_diag = np.empty(m)
        gx = np.empty(m)
        fxx = np.empty(m)
        for i in range(m):
            yv = np.array([y[i]])
            xs = chart.x_values[i]
            a_diag[i] = float(system.fast_jacobian(xs, yv)[0, 0])
            scale = max(1.0, abs(xs[0]))
            h = (np.finfo(float).eps ** (1.0 / 3.0)) * scale
            gp = float(np.atleast_1d(system.g(xs + h, yv))[0])
            gm = float(np.atleast_1d(system.g(xs - h, yv))[0])
            gx[i] = (gp - gm) / (2.0 * h)
            fxx[i] = _second_derivative(
                lambda s: float(np.atleast_1d(
                    system.f(np.array([s]), yv))[0]), float(xs[0]), scale)
        u1 = terms[1, :, 0]
        du1 = _grid_derivative(y, u1)
        terms[2, :, 0] = (dx[:, 0] * gx * u1 + du1 * g0
                          - 0.5 * fxx * u1 ** 2) / a_diag

    if r >= 3:
        gxx = np.empty(m)
        fxxx = np.empty(m)
        for i in range(m):
            yv = np.array([y[i]])
            xs = float(chart.x_values[i, 0])
            scale = max(1.0, abs(xs))
            gxx[i] = _second_derivative(
                lambda s: float(np.atleast_1d(
                    system.g(np.array([s]), yv))[0]), xs, scale)
            fxxx[i] = _third_derivative(
                lambda s: float(np.atleast_1d(
                    system.f(np.array([s]), yv))[0]), xs, scale)
        u1 = terms[1, :, 0]
        u2 = terms[2, :, 0]
        du1 = _grid_derivative(y, u1)
        du2 = _grid_derivative(y, u2)
        terms[3, :, 0] = (dx[:, 0] * (gx * u2 + 0.5 * gxx * u1 ** 2)
                          + du1 * gx * u1 + du2 * g0
                          - fxx * u1 * u2 - fxxx * u1 ** 3 / 6.0) / a_diag

    amps = np.array([float(np.max(np.linalg.norm(terms[j], axis=1)))
                     for j in range(r + 1)])
    if not np.all(np.isfinite(amps)):
        raise OverflowError("expansion amplitudes overflowed; the series is "
                            "disordered well below the requested order")
    return AsymptoticExpansion(order=r, amplitudes=amps, y_grid=y,
                               terms=terms, label=system.name)


def scalar_drive_expansion(h_derivative: Callable[[int], Callable[[Array], Array]],
                           r: int, y_grid) -> AsymptoticExpansion:
    """Exact expansion for eps x' = -x + h(y), y' = 1: u_j = (-1)^j h^(j).

    ``h_derivative(k)`` must return a vectorized callable for the k-th
    derivative of the drive.  Successive integration by parts of the
    explicit solution shows the remainder after k terms is bounded by
    eps^{k+1} sup|h^(k+1)|, so the amplitudes are the derivative sups.
    """
    y = np.asarray(y_grid, dtype=float)
    terms = np.empty((r + 1, y.size, 1))
    for j in range(r + 1):
        sign = -1.0 if j % 2 else 1.0
        terms[j, :, 0] = sign * np.asarray(h_derivative(j)(y), dtype=float)
    amps = np.max(np.abs(terms[:, :, 0]), axis=1)
    if not np.all(np.isfinite(amps)):
        raise OverflowError("drive derivatives overflowed at the requested "
                            "order")
    return AsymptoticExpansion(order=r, amplitudes=amps, y_grid=y,
                               terms=terms, label="scalar linear model")


def sin_drive() -> Callable[[int], Callable[[Array], Array]]:
    """Derivative family of h(y) = sin y: h^(k)(y) = sin(y + k pi/2)."""

    def deriv(k: int):
        shift = k * math.pi / 2.0
        return lambda y: np.sin(np.asarray(y, dtype=float) + shift)

    return deriv


def cauchy_drive(m_bound: float = 1.0, radius: float = 1.0
                 ) -> Callable[[int], Callable[[Array], Array]]:
    """Derivative family of h(y) = M/(1 - y/R): h^(k) = M k! R^-k (1-y/R)^-(k+1).

    Saturates the Cauchy estimate |h^(k)| <= M R^-k k!, so the resulting
    expansion shows clean factorial (Gevrey-1) amplitude growth.
    """

    def deriv(k: int):
        fact = float(math.factorial(k))

        def h_k(y):
            y = np.asarray(y, dtype=float)
            return m_bound * fact * radius ** (-k) \
                * (1.0 - y / radius) ** (-(k + 1))

        return h_k

    return deriv


def fourier_periodic_solution(coefficients: Dict[int, complex], eps: float,
                              y) -> Array:
    """Bounded periodic solution of eps x' = -x + h(y), y' = 1, by Fourier.

    For h(y) = sum_k h_k e^{iky} the solution is sum_k h_k e^{iky}/(1+i eps k):
    an independent route to the resummed asymptotic series, convergent for
    any eps since the poles sit at eps = -i/k.
    """
    y = np.asarray(y, dtype=float)
    out = np.zeros(y.shape, dtype=complex)
    for k, hk in coefficients.items():
        out += hk * np.exp(1j * k * y) / (1.0 + 1j * eps * k)
    return out


def disordering_crossing(expansion: AsymptoticExpansion, eps: float) -> float:
    """Location where eps|u_2(y)| overtakes |u_1(y)| on the grid.

    Near a fold both terms blow up at different rates, so the ratio
    crossing 1 marks where the expansion loses its ordering; for the van
    der Pol fold the crossing distance scales like eps^(2/3).
    """
    if expansion.terms is None or expansion.order < 2:
        raise ValueError("need computed terms u_1 and u_2")
    u1 = np.linalg.norm(expansion.terms[1], axis=1)
    u2 = np.linalg.norm(expansion.terms[2], axis=1)
    with np.errstate(divide="ignore"):
        ratio = eps * u2 / u1
    above = ratio >= 1.0
    if not above.any() or above.all():
        raise ValueError("no ordering crossover on the grid at this eps")
    idx = np.nonzero(above[:-1] != above[1:])[0]
    i = int(idx[0])
    y = expansion.y_grid
    # interpolate on log(ratio), which is near-linear in y
    l0, l1 = math.log(ratio[i]), math.log(ratio[i + 1])
    frac = (0.0 - l0) / (l1 - l0)
    return float(y[i] + frac * (y[i + 1] - y[i]))
