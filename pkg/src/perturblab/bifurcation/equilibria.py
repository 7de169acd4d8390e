"""Linear classification of planar equilibria and the cubic-fold diagram.

A 2x2 Jacobian falls into one of a handful of qualitative classes fixed by
its eigenvalue pattern: distinct-real (node or saddle), complex (focus or
center), equal-real split by the eigenvector count (degenerate vs improper
node), and the borderline cases with a vanishing real part.  The label
strings carry the stability prefix so "stable node" and "unstable improper
node" read the way phase portraits are usually annotated.

``cusp_region`` maps out the two-parameter family dx/dt = -x^3 + l1 x + l2,
whose fold boundary is the discriminant locus 4 l1^3 = 27 l2^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass
class EquilibriumClass:
    """Qualitative type of a planar equilibrium from its linearization."""

    location: np.ndarray
    eigenvalues: np.ndarray
    label: str
    hyperbolic: bool


def classify_equilibrium(jacobian, location=(0.0, 0.0),
                         tol: float = 1e-9) -> EquilibriumClass:
    """Classify a planar equilibrium from its 2x2 Jacobian.

    ``tol`` is both the relative eigenvalue-equality gap and the
    second-singular-value threshold deciding whether an equal pair has one
    or two independent eigenvectors.  The label is invariant under
    similarity transforms of the Jacobian.
    """
    j = np.asarray(jacobian, dtype=float)
    if j.shape != (2, 2):
        raise ValueError("jacobian must be a 2x2 matrix")
    scale = float(np.linalg.norm(j))
    abs_tol = tol * max(1.0, scale)
    eigs = np.sort_complex(np.linalg.eigvals(j))

    if max(abs(eigs[0].imag), abs(eigs[1].imag)) > abs_tol:
        a = 0.5 * (eigs[0].real + eigs[1].real)
        if a > abs_tol:
            label = "unstable focus"
        elif a < -abs_tol:
            label = "stable focus"
        else:
            label = "center"
        hyperbolic = abs(a) > abs_tol
    else:
        a1, a2 = sorted(eigs.real)
        z1, z2 = abs(a1) <= abs_tol, abs(a2) <= abs_tol
        hyperbolic = not (z1 or z2)
        if z1 and z2:
            # both real parts vanish; covers the nilpotent linear part
            label = "elliptic"
        elif z1 or z2:
            label = "elementary saddle-node candidate"
        elif a1 < 0 < a2:
            label = "saddle"
        else:
            prefix = "stable" if a1 < 0 else "unstable"
            if abs(a1 - a2) <= tol * max(abs(a1), abs(a2)):
                a = 0.5 * (a1 + a2)
                sv = np.linalg.svd(j - a * np.eye(2), compute_uv=False)
                # the shifted matrix vanishes entirely for a star node but
                # keeps rank one on a Jordan block
                if sv[0] <= abs_tol:
                    label = f"{prefix} degenerate node"
                else:
                    label = f"{prefix} improper node"
            else:
                label = f"{prefix} node"

    return EquilibriumClass(location=np.asarray(location, dtype=float),
                            eigenvalues=eigs, label=label,
                            hyperbolic=hyperbolic)


@dataclass
class CuspRegion:
    """Equilibria of dx/dt = -x^3 + lambda1 x + lambda2 at one parameter point."""

    lambda1: float
    lambda2: float
    discriminant: float      # 4 lambda1^3 - 27 lambda2^2
    equilibria: np.ndarray
    stability: Tuple[str, ...]
    label: str

    @property
    def count(self) -> int:
        return len(self.equilibria)


def cusp_region(lambda1: float, lambda2: float, tol: float = 1e-9) -> CuspRegion:
    """Equilibrium count and stability for the cubic two-parameter family.

    Three equilibria inside the fold wedge 27 l2^2 < 4 l1^3 (two stable
    around one unstable), a single attracting one outside, and a
    semi-stable double root on the critical line itself.
    """
    l1 = float(lambda1)
    l2 = float(lambda2)
    disc = 4.0 * l1**3 - 27.0 * l2**2
    scale = max(1.0, abs(l1) ** 3, l2 * l2)

    if abs(l1) <= tol and abs(l2) <= tol:
        return CuspRegion(l1, l2, disc, np.array([0.0]),
                          ("stable (nonhyperbolic)",), "cusp point")

    if abs(disc) <= 27.0 * tol * scale and l1 > 0:
        # double root merges x0 with one outer root; the remaining simple
        # root sits opposite at twice the distance
        x_d = -np.sign(l2) * np.sqrt(l1 / 3.0)
        x_s = -2.0 * x_d
        roots = np.array(sorted([x_d, x_s]))
        stab = tuple("semi-stable" if abs(r - x_d) <= abs(r - x_s) else "stable"
                     for r in roots)
        return CuspRegion(l1, l2, disc, roots, stab, "critical line")

    roots = np.roots([-1.0, 0.0, l1, l2])
    real = np.sort(roots[np.abs(roots.imag) <= 1e-9 * max(1.0, np.abs(roots).max())].real)
    if disc > 0:
        stab = tuple("stable" if -3.0 * r * r + l1 < 0 else "unstable"
                     for r in real)
        return CuspRegion(l1, l2, disc, real, stab, "three equilibria")
    # single real root, always attracting
    idx = int(np.argmin(np.abs(roots.imag)))
    x = float(roots[idx].real)
    return CuspRegion(l1, l2, disc, np.array([x]), ("stable",),
                      "single equilibrium")
