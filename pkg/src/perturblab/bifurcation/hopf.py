"""First resonant coefficient of a planar system near a linear center.

Writing the system in the complex variable z as

    dz/dt = i omega0 z + sum_{2 <= n+m <= 3} G_nm z^n zbar^m + ...,

every quadratic term and every cubic term except z^2 zbar can be removed
by a near-identity substitution w = z - h(z, zbar); the coefficient h_nm
of each removable monomial solves i omega0 (1 - n + m) h_nm = G_nm.  The
surviving normal form

    dw/dt = i omega0 w + c21 |w|^2 w

carries the full quadratic feedback in c21:

    c21 = G21 + 2 h20 G11 + h11 G20 + h11 conj(G11) + 2 h02 conj(G02).

In polar coordinates dr/dt = Re(c21) r^3 + ..., so Re(c21) < 0 means the
origin attracts nearby spirals (amplitude decaying like 1/sqrt(t)) and
the emerging periodic orbit of the unfolded family is stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from ._taylor import binom, fit_taylor_2d

GKey = Tuple[int, int]


@dataclass
class HopfResult:
    """Normal-form data at a nondegenerate linear center."""

    omega0: float
    c21: complex
    g_coefficients: Dict[GKey, complex] = field(default_factory=dict)
    h_coefficients: Dict[GKey, complex] = field(default_factory=dict)

    @property
    def stability(self) -> str:
        re = self.c21.real
        if abs(re) <= 1e-9 * max(1.0, abs(self.c21)):
            return "degenerate"
        return "supercritical" if re < 0 else "subcritical"


_REMOVABLE = ((2, 0), (1, 1), (0, 2), (3, 0), (1, 2), (0, 3))
_ALLOWED = set(_REMOVABLE) | {(2, 1)}


def _c21_from_g(g: Mapping[GKey, complex], omega0: float) -> HopfResult:
    h: Dict[GKey, complex] = {}
    for (n, m) in ((2, 0), (1, 1), (0, 2)):
        coeff = complex(g.get((n, m), 0.0))
        if coeff != 0:
            # i omega0 (1 - n + m) h_nm = G_nm
            h[(n, m)] = coeff / (1j * omega0 * (1 - n + m))
    h20 = h.get((2, 0), 0.0)
    h11 = h.get((1, 1), 0.0)
    h02 = h.get((0, 2), 0.0)
    g20 = complex(g.get((2, 0), 0.0))
    g11 = complex(g.get((1, 1), 0.0))
    g02 = complex(g.get((0, 2), 0.0))
    c21 = (complex(g.get((2, 1), 0.0))
           + 2 * h20 * g11 + h11 * g20
           + h11 * np.conj(g11) + 2 * h02 * np.conj(g02))
    return HopfResult(omega0=float(omega0), c21=complex(c21),
                      g_coefficients={k: complex(v) for k, v in g.items()},
                      h_coefficients=h)


def _linear_normalization(jac: np.ndarray, omega0: float) -> np.ndarray:
    """Columns P = [Im v | Re v] with J v = i omega0 v, so P^-1 J P is the
    standard rotation [[0, -omega0], [omega0, 0]]."""
    target = np.array([[0.0, -omega0], [omega0, 0.0]])
    if np.allclose(jac, target, atol=1e-9 * max(1.0, omega0)):
        return np.eye(2)
    # eigenvector of the larger off-diagonal row for conditioning
    if abs(jac[0, 1]) >= abs(jac[1, 0]):
        v = np.array([jac[0, 1], 1j * omega0 - jac[0, 0]], dtype=complex)
    else:
        v = np.array([1j * omega0 - jac[1, 1], jac[1, 0]], dtype=complex)
    re = v.real.copy()
    im = v.imag.copy()
    scale = np.linalg.norm(re)
    if scale == 0:
        scale = np.linalg.norm(im)
    P = np.column_stack([im / scale, re / scale])
    if abs(np.linalg.det(P)) < 1e-12:
        raise ValueError("failed to normalize the linear part; Jacobian is "
                         "too close to a multiple of the identity")
    return P


def _real_poly_to_g(coeffs: Mapping[GKey, float]) -> Dict[GKey, complex]:
    """Convert real Taylor coefficients of dz/dt = f1 + i f2 in (x1, x2)
    into monomial coefficients in (z, zbar) via x1 = (z + zbar)/2,
    x2 = (z - zbar)/(2i)."""
    g: Dict[GKey, complex] = {}
    for (j, k), coeff in coeffs.items():
        if coeff == 0:
            continue
        # x1^j x2^k = sum_{p,q} C(j,p) C(k,q) (1/2)^{j+k} (-i)^k (-1)^{k-q}
        #             z^{p+q} zbar^{j+k-p-q}
        base = complex(coeff) * (0.5 ** (j + k)) * ((-1j) ** k)
        for p in range(j + 1):
            for q in range(k + 1):
                term = base * binom(j, p) * binom(k, q) * ((-1) ** (k - q))
                key = (p + q, j + k - p - q)
                g[key] = g.get(key, 0.0) + term
    return {k: v for k, v in g.items() if abs(v) > 1e-14}


def hopf_coefficient(system, omega0: Optional[float] = None,
                     radius: float = 0.05) -> HopfResult:
    """First resonant cubic coefficient c21 at a linear center.

    Two input forms are accepted.  A mapping {(n, m): G_nm} gives the
    complex monomial coefficients directly (omega0 then required); keys
    with n + m > 3 are rejected since higher resonances are outside this
    truncation.  A callable (x1, x2) -> (f1, f2) is expanded numerically:
    its linear part must be trace-free with positive determinant, and the
    quadratic/cubic coefficients are converted to the complex chart after
    normalizing the linear part to a standard rotation.
    """
    if isinstance(system, Mapping):
        if omega0 is None:
            raise ValueError("omega0 is required with coefficient input")
        if omega0 == 0:
            raise ValueError("omega0 must be nonzero")
        for key in system:
            n, m = key
            if n + m < 2 or n + m > 3:
                raise ValueError(f"coefficient {key} is outside the "
                                 "second/third order truncation; only the "
                                 "(2,1) resonance is retained at this order")
            if key not in _ALLOWED:
                raise ValueError(f"unexpected coefficient key {key}")
        return _c21_from_g(system, omega0)

    if not callable(system):
        raise TypeError("system must be a callable or a coefficient mapping")

    f0 = np.asarray(system(0.0, 0.0), dtype=float)
    if np.max(np.abs(f0)) > 1e-8:
        raise ValueError("the origin must be an equilibrium")

    c1 = fit_taylor_2d(lambda a, b: float(system(a, b)[0]), 3, radius)
    c2 = fit_taylor_2d(lambda a, b: float(system(a, b)[1]), 3, radius)
    jac = np.array([[c1.get((1, 0), 0.0), c1.get((0, 1), 0.0)],
                    [c2.get((1, 0), 0.0), c2.get((0, 1), 0.0)]])
    scale = max(1.0, float(np.max(np.abs(jac))))
    tr = jac[0, 0] + jac[1, 1]
    det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
    if abs(tr) > 1e-8 * scale:
        raise ValueError("linear part is not a center: trace is nonzero")
    if det <= 0:
        raise ValueError("linear part is not a center: determinant is not "
                         "positive (omega0 would vanish)")
    w0 = float(np.sqrt(det))

    P = _linear_normalization(jac, w0)
    Pinv = np.linalg.inv(P)

    def transformed(a: float, b: float) -> np.ndarray:
        x = P @ np.array([a, b])
        return Pinv @ np.asarray(system(x[0], x[1]), dtype=float)

    t1 = fit_taylor_2d(lambda a, b: float(transformed(a, b)[0]), 3, radius)
    t2 = fit_taylor_2d(lambda a, b: float(transformed(a, b)[1]), 3, radius)
    real_coeffs: Dict[GKey, complex] = {}
    for (j, k) in set(t1) | set(t2):
        if j + k < 2 or j + k > 3:
            continue
        val = t1.get((j, k), 0.0) + 1j * t2.get((j, k), 0.0)
        if abs(val) > 1e-11:
            real_coeffs[(j, k)] = val
    g = _real_poly_to_g(real_coeffs)
    g = {k: v for k, v in g.items() if k in _ALLOWED}
    return _c21_from_g(g, w0)


def radial_decay_rate(field, r0: float = 0.08, t_max: float = 1500.0,
                      tol: float = 1e-9) -> float:
    """Empirical estimate of -2 Re(c21) from a long trajectory.

    Integrates the planar field from (r0, 0) and fits d(1/r^2)/dt, which
    the cubic normal form predicts to equal -2 Re(c21) for small r.  Used
    as an independent check of hopf_coefficient, not by it.
    """
    from ..odeflow import integrate, VectorField

    if isinstance(field, VectorField):
        vf = field
    else:
        fun = field
        vf = VectorField(dimension=2,
                         rhs=lambda x, t, p: np.asarray(fun(x[0], x[1]),
                                                        dtype=float))
    traj = integrate(vf, np.array([r0, 0.0]), (0.0, t_max), tol=tol)
    ts = np.linspace(0.0, t_max, 2001)
    states = traj.evaluate(ts)
    inv_r2 = 1.0 / np.sum(states**2, axis=1)
    # skip the initial transient where higher-order terms still matter
    tail = slice(200, None)
    slope = np.polyfit(ts[tail], inv_r2[tail], 1)[0]
    return float(slope)
