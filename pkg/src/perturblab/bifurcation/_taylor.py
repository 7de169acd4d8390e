"""Two-variable Taylor polynomials as coefficient dictionaries.

A polynomial in (x1, x2) is a dict mapping (j, k) to the coefficient of
x1^j x2^k; a polynomial in x1 alone maps the degree to the coefficient.
The arithmetic never forces a type, so exact inputs (fractions.Fraction)
stay exact all the way through a center-manifold recursion.

``fit_taylor_2d`` recovers coefficients of a black-box callable by a
least-squares monomial fit on a small Chebyshev grid.  Fitting a few
degrees past the requested order keeps aliasing from higher terms out of
the reported coefficients.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, Mapping, Tuple

import numpy as np

Poly2 = Dict[Tuple[int, int], object]
Poly1 = Dict[int, object]


def poly1_mul(a: Poly1, b: Poly1, max_degree: int) -> Poly1:
    out: Poly1 = {}
    for da, ca in a.items():
        for db, cb in b.items():
            d = da + db
            if d > max_degree:
                continue
            out[d] = out.get(d, 0) + ca * cb
    return out


def poly1_eval(p: Poly1, x):
    total = 0
    for d, c in p.items():
        total = total + c * x**d
    return total


def compose_x2(p: Mapping[Tuple[int, int], object], h: Poly1,
               max_degree: int) -> Poly1:
    """Substitute x2 = h(x1) into a two-variable polynomial.

    h maps degree -> coefficient (no constant or linear term expected for
    center-manifold work, but none is assumed).  Returns the coefficients
    of the resulting one-variable polynomial through ``max_degree``.
    """
    # powers of h, truncated as we go
    h_pows: Dict[int, Poly1] = {0: {0: 1}}
    max_k = max((k for (_, k) in p.keys()), default=0)
    for k in range(1, max_k + 1):
        h_pows[k] = poly1_mul(h_pows[k - 1], h, max_degree)
    out: Poly1 = {}
    for (j, k), c in p.items():
        if j > max_degree:
            continue
        for d, hc in h_pows[k].items():
            deg = j + d
            if deg > max_degree:
                continue
            out[deg] = out.get(deg, 0) + c * hc
    return {d: c for d, c in out.items() if c != 0}


def fit_taylor_2d(fun: Callable[[float, float], float], order: int,
                  radius: float = 0.1, pad: int = 2) -> Dict[Tuple[int, int], float]:
    """Taylor coefficients of a smooth callable around the origin.

    Least-squares fit of monomials of total degree <= order + pad on a
    tensor Chebyshev grid in [-radius, radius]^2, reported through total
    degree ``order``.  Exact for polynomial inputs of degree <= order+pad.
    """
    deg_fit = order + pad
    n_nodes = deg_fit + 5
    t = np.cos(np.pi * (2 * np.arange(n_nodes) + 1) / (2 * n_nodes))
    monos = [(j, k) for j in range(deg_fit + 1) for k in range(deg_fit + 1 - j)]
    u1, u2 = np.meshgrid(t, t, indexing="ij")
    u1 = u1.ravel()
    u2 = u2.ravel()
    vals = np.array([fun(radius * a, radius * b) for a, b in zip(u1, u2)],
                    dtype=float)
    cols = np.stack([u1**j * u2**k for j, k in monos], axis=1)
    coef, *_ = np.linalg.lstsq(cols, vals, rcond=None)
    out: Dict[Tuple[int, int], float] = {}
    for (j, k), c in zip(monos, coef):
        if j + k <= order:
            out[(j, k)] = float(c) / radius ** (j + k)
    return out


def fd_partial(fun: Callable[[float], float], x: float, step: float) -> float:
    """Fourth-order central first derivative of a scalar callable."""
    return (-fun(x + 2 * step) + 8 * fun(x + step)
            - 8 * fun(x - step) + fun(x - 2 * step)) / (12 * step)


def binom(n: int, k: int) -> int:
    return math.comb(n, k)
