"""Normal forms of planar maps near an elliptic fixed point.

The map enters as the series of its first component in a complex
coordinate, z' = lambda z + sum g[j,k] z^j zbar^k with lambda on the
unit circle.  Order by order, every non-resonant term is removed by a
polynomial change of coordinates; what survives are the twist terms
C_n z^{n+1} zbar^n plus any term whose small denominator falls below
the resonance tolerance.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .poly2 import Poly2, conjugate_swap, inverse_near_identity, substitute

STRONG_RESONANCE_MAX_Q = 4


@dataclass
class MapNormalForm:
    theta: float
    coefficients: list[complex]
    resonant_terms: list[tuple[tuple[int, int], complex]]
    transformation: Poly2 = field(repr=False)
    normal_form: Poly2 = field(repr=False)
    omega_coefficients: list[float]
    order: int
    strong_resonance: int | None = None
    linear_defect: float = 0.0

    @property
    def twist_defect(self) -> float:
        """|Re(e^{-2 pi i theta} C_1)|; vanishes for area-preserving maps."""
        if not self.coefficients:
            return 0.0
        return abs((cmath.exp(-2j * math.pi * self.theta) * self.coefficients[0]).real)

    @property
    def first_twist(self) -> float:
        """Coefficient of r^2 in the rotation angle Omega(r)."""
        return self.omega_coefficients[2] if len(self.omega_coefficients) > 2 else 0.0

    def rotation(self, r: float) -> float:
        """Rotation angle of the normal form on the circle of radius r."""
        return sum(c * r ** n for n, c in enumerate(self.omega_coefficients))


def _strong_resonance(theta: float, tol: float = 1e-6) -> int | None:
    for q in range(1, STRONG_RESONANCE_MAX_Q + 1):
        if abs(cmath.exp(2j * math.pi * q * theta) - 1.0) < tol:
            return q
    return None


def _log_series(a: list[complex]) -> list[complex]:
    """Coefficients of log(1 + sum_{n>=1} a_n x^n) to the same length."""
    n = len(a)
    w = [0j] + list(a)
    out = [0j] * (n + 1)
    power = [0j] + list(a)
    sign = 1.0
    for p in range(1, n + 1):
        for i in range(1, n + 1):
            out[i] += sign * power[i] / p
        sign = -sign
        if p < n:
            nxt = [0j] * (n + 1)
            for i in range(1, n + 1):
                if power[i] == 0:
                    continue
                for j in range(1, n + 1 - i):
                    nxt[i + j] += power[i] * w[j]
            power = nxt
    return out[1:]


def birkhoff_normal_form(zmap: Poly2, order: int = 1,
                         resonance_tol: float = 1e-6) -> MapNormalForm:
    """Normalize the map through twist order `order` (degree 2*order+1).

    Each removable term (j, k) is eliminated by conjugating with
    id + h z^j zbar^k where h = g e^{-2 pi i theta} /
    (e^{2 pi i (j-k-1) theta} - 1).  Terms with j = k + 1 are structural
    invariants and become the twist coefficients; terms whose small
    denominator is below resonance_tol are reported and left in place.
    """
    work_order = 2 * order + 1
    F = zmap.truncate(work_order)

    const = abs(F.coeff(0, 0))
    if const > 1e-10:
        raise ValueError(f"map does not fix the origin (|constant| = {const:.3e})")
    F.terms.pop((0, 0), None)

    lam = F.coeff(1, 0)
    if abs(lam) < 1e-12:
        raise ValueError("linear part has no rotation component")
    theta = (cmath.phase(lam) / (2.0 * math.pi)) % 1.0
    linear_defect = abs(F.coeff(0, 1))

    transform = Poly2.variable(0, work_order)
    resonant: list[tuple[tuple[int, int], complex]] = []

    for deg in range(2, work_order + 1):
        for (j, k), g in F.degree_terms(deg):
            if j == k + 1 or (j, k) == (1, 0) or (j, k) == (0, 1):
                continue
            if abs(g) < 1e-14:
                continue
            denom = cmath.exp(2j * math.pi * (j - k - 1) * theta) - 1.0
            if abs(denom) < resonance_tol:
                resonant.append(((j, k), g))
                continue
            h = g * cmath.exp(-2j * math.pi * theta) / denom
            phi = Poly2.variable(0, work_order) + Poly2({(j, k): h}, work_order)
            phi_inv = inverse_near_identity(phi)
            inner = substitute(F, phi, conjugate_swap(phi))
            F = substitute(phi_inv, inner, conjugate_swap(inner))
            transform = substitute(transform, phi, conjugate_swap(phi))

    coefficients = [F.coeff(n + 1, n) for n in range(1, order + 1)]

    # rotation angle of z' = z (lambda + sum C_n rho^n), rho = |z|^2
    rel = [c / lam for c in coefficients]
    log_coeffs = _log_series(rel)
    omega: list[float] = [2.0 * math.pi * theta]
    for b in log_coeffs:
        omega.extend([0.0, b.imag])

    return MapNormalForm(
        theta=theta,
        coefficients=coefficients,
        resonant_terms=resonant,
        transformation=transform,
        normal_form=F,
        omega_coefficients=omega,
        order=order,
        strong_resonance=_strong_resonance(theta),
        linear_defect=linear_defect,
    )


def complex_coordinates_map(xmap: Poly2, vmap: Poly2,
                            alpha: complex, beta: complex) -> Poly2:
    """Rewrite a real planar map in the coordinate z = alpha x + beta v.

    xmap and vmap are the components of the map as polynomials in the
    real initial condition (x, v).  Returns the series of z' in
    (z, zbar).  alpha, beta must be independent over the reals.
    """
    a, b = complex(alpha), complex(beta)
    det = a * b.conjugate() - b * a.conjugate()
    if abs(det) < 1e-14:
        raise ValueError("coordinate vectors are real-dependent")
    order = min(xmap.order, vmap.order)
    z = Poly2.variable(0, order)
    zb = Poly2.variable(1, order)
    x_sub = (z * b.conjugate() - zb * b) * (1.0 / det)
    v_sub = (zb * a - z * a.conjugate()) * (1.0 / det)
    x_new = substitute(xmap, x_sub, v_sub)
    v_new = substitute(vmap, x_sub, v_sub)
    return x_new * a + v_new * b


def conjugacy_defect(zmap: Poly2, nf: MapNormalForm) -> float:
    """Max coefficient mismatch of transform(normal form) vs map(transform)."""
    lhs = substitute(nf.transformation, nf.normal_form,
                     conjugate_swap(nf.normal_form))
    rhs = substitute(zmap.truncate(nf.normal_form.order), nf.transformation,
                     conjugate_swap(nf.transformation))
    return lhs.max_abs_diff(rhs)
