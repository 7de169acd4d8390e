"""Center-manifold reduction and the scalar fold functional H(lambda).

For a planar system with one zero and one nonzero eigenvalue,

    dx1/dt = g1(x1, x2),      dx2/dt = a x2 + g2(x1, x2),    a != 0,

the center manifold is a graph x2 = h(x1) fixed order by order from the
invariance identity

    a h(x1) + g2(x1, h(x1)) = h'(x1) g1(x1, h(x1)),

and the flow on it is dx1/dt = g1(x1, h(x1)).  The coefficient c of x1^2
in the reduced flow decides whether the equilibrium is an elementary
saddle-node.  All arithmetic is carried out on coefficient dictionaries,
so Fraction inputs give exact rational output.

``saddle_node_H`` follows the extremum path phi(lambda) of a one-parameter
scalar family F and returns H(lambda) = F(phi(lambda), lambda)/c, whose
sign counts the nearby equilibria: none for H > 0, a single nonhyperbolic
one for H = 0, two hyperbolic ones of opposite stability for H < 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Tuple

import numpy as np

from ._taylor import Poly1, compose_x2, fit_taylor_2d, poly1_eval, poly1_mul

_LOW_KEYS = ((0, 0), (1, 0), (0, 1))


@dataclass
class CenterManifold:
    """Graph coefficients and reduced flow on a one-dimensional center manifold."""

    a: object
    order: int
    h_coefficients: Poly1            # degree -> coefficient, degrees >= 2
    reduced_coefficients: Poly1      # dx1/dt = sum c_d x1^d
    c: object                        # half the second x1-derivative of g1 at 0
    elementary_saddle_node: bool

    def h(self, x1):
        return poly1_eval(self.h_coefficients, x1)

    def reduced_rhs(self, x1):
        return poly1_eval(self.reduced_coefficients, x1)


def _as_poly(g, order: int, radius: float, name: str) -> Mapping:
    if isinstance(g, Mapping):
        return dict(g)
    if callable(g):
        if order > 6:
            raise ValueError(
                f"{name}: coefficients beyond order 6 of a black-box callable "
                "are not recoverable reliably; pass a coefficient mapping")
        return fit_taylor_2d(lambda a, b: float(g(a, b)), order, radius)
    raise TypeError(f"{name} must be a callable or a coefficient mapping")


def center_manifold_coeffs(g1, g2, a, order: int = 4,
                           radius: float = 0.1) -> CenterManifold:
    """Solve the center-manifold identity order by order.

    g1 and g2 are either coefficient mappings {(j, k): coeff} or smooth
    callables (x1, x2) -> value; both must vanish to second order at the
    origin.  Returns the graph coefficients through x1^order, the reduced
    flow through x1^(order+1), and the quadratic coefficient c.
    """
    if a == 0:
        raise ValueError("the transverse eigenvalue a must be nonzero")
    numeric = callable(g1) or callable(g2)
    p1 = _as_poly(g1, order, radius, "g1")
    p2 = _as_poly(g2, order, radius, "g2")
    low_tol = 1e-7 if numeric else 0
    for p, name in ((p1, "g1"), (p2, "g2")):
        for key in _LOW_KEYS:
            val = p.get(key, 0)
            if numeric:
                bad = abs(float(val)) > low_tol
                if not bad:
                    p.pop(key, None)
            else:
                bad = val != 0
            if bad:
                raise ValueError(f"{name} must vanish to second order "
                                 f"(found term x1^{key[0]} x2^{key[1]})")

    h: Poly1 = {}
    for n in range(2, order + 1):
        g1h = compose_x2(p1, h, n)
        g2h = compose_x2(p2, h, n)
        hp = {d - 1: d * c for d, c in h.items()}
        drift = poly1_mul(hp, g1h, n)
        h_n = (drift.get(n, 0) - g2h.get(n, 0)) / a
        if h_n != 0:
            h[n] = h_n

    reduced = compose_x2(p1, h, order + 1)
    c = p1.get((2, 0), 0)
    if numeric:
        flag = abs(float(c)) > 1e-9
    else:
        flag = c != 0
    return CenterManifold(a=a, order=order, h_coefficients=h,
                          reduced_coefficients=reduced, c=c,
                          elementary_saddle_node=flag)


def center_manifold_residual(cm: CenterManifold, g1, g2,
                             radius: float = 0.1) -> Poly1:
    """Taylor coefficients of a h + g2(x1,h) - h' g1(x1,h) through cm.order.

    Vanishes identically through the computed order; exact zeros when the
    inputs were exact.
    """
    p1 = _as_poly(g1, cm.order, radius, "g1")
    p2 = _as_poly(g2, cm.order, radius, "g2")
    n = cm.order
    g1h = compose_x2(p1, cm.h_coefficients, n)
    g2h = compose_x2(p2, cm.h_coefficients, n)
    hp = {d - 1: d * c for d, c in cm.h_coefficients.items()}
    drift = poly1_mul(hp, g1h, n)
    res: Poly1 = {}
    for d in range(0, n + 1):
        val = cm.a * cm.h_coefficients.get(d, 0) + g2h.get(d, 0) - drift.get(d, 0)
        if val != 0:
            res[d] = val
    return res


@dataclass
class SaddleNodeScan:
    """H(lambda) along a parameter bracket and the resulting classification."""

    lambdas: np.ndarray
    H: np.ndarray
    extremum_path: np.ndarray
    c: float
    counts: np.ndarray        # predicted number of nearby equilibria (0/1/2)
    classification: str


def _dF(F, x: float, lam: float, step: float) -> float:
    return (F(x + step, lam) - F(x - step, lam)) / (2 * step)


def _ddF(F, x: float, lam: float, step: float) -> float:
    return (F(x + step, lam) - 2 * F(x, lam) + F(x - step, lam)) / step**2


def saddle_node_H(F: Callable[[float, float], float],
                  bracket: Tuple[float, float], n_samples: int = 41,
                  step: float = 1e-5) -> SaddleNodeScan:
    """Scalar unfolding functional of a fold family F(x, lambda).

    Requires F(0,0) = 0, dF/dx(0,0) = 0 and a nondegenerate second
    derivative 2c at the origin (checked numerically).  Follows the
    extremum path by warm-started Newton iteration on dF/dx = 0 and
    returns H = F(phi(lambda), lambda)/c with the 0/1/2 equilibrium count
    its sign predicts.

    A pitchfork family has a degenerate second derivative; scan its x
    derivative instead (the extrema of F then play the role of the
    equilibria).
    """
    f00 = float(F(0.0, 0.0))
    fx = _dF(F, 0.0, 0.0, step)
    fxx = _ddF(F, 0.0, 0.0, 1e-4)
    if abs(f00) > 1e-8 or abs(fx) > 1e-6:
        raise ValueError("family must satisfy F(0,0) = 0 and dF/dx(0,0) = 0")
    c = 0.5 * fxx
    if abs(c) < 1e-6:
        raise ValueError("degenerate second derivative: |d2F/dx2(0,0)| is "
                         "numerically zero, no fold normal form applies")

    lams = np.linspace(float(bracket[0]), float(bracket[1]), n_samples)
    order = np.argsort(np.abs(lams))  # continuation outward from lambda ~ 0
    phi = np.empty_like(lams)
    x_warm_pos = 0.0
    x_warm_neg = 0.0
    for idx in order:
        lam = lams[idx]
        x = x_warm_pos if lam >= 0 else x_warm_neg
        for _ in range(60):
            g = _dF(F, x, lam, step)
            gg = _ddF(F, x, lam, 1e-4)
            dx = g / gg
            x -= dx
            if abs(dx) < 1e-13 * (1.0 + abs(x)):
                break
        if abs(x) > 1.0:
            raise RuntimeError("extremum path left the unit chart; shrink "
                               "the bracket")
        phi[idx] = x
        if lam >= 0:
            x_warm_pos = x
        else:
            x_warm_neg = x

    H = np.array([F(p, lam) for p, lam in zip(phi, lams)]) / c
    tol_h = 1e-10 * max(1.0, float(np.max(np.abs(H))))
    counts = np.where(H > tol_h, 0, np.where(H < -tol_h, 2, 1))
    has_pos = bool((H > tol_h).any())
    has_neg = bool((H < -tol_h).any())
    if has_pos and has_neg:
        classification = "saddle-node"
    elif has_neg:
        classification = "transcritical"
    else:
        classification = "degenerate"
    return SaddleNodeScan(lambdas=lams, H=H, extremum_path=phi, c=float(c),
                          counts=counts, classification=classification)


def derivative_family(F: Callable[[float, float], float],
                      step: float = 1e-5) -> Callable[[float, float], float]:
    """The x-derivative of a family, for feeding pitchforks to saddle_node_H."""
    def dF(x: float, lam: float) -> float:
        return _dF(F, x, lam, step)
    return dF
