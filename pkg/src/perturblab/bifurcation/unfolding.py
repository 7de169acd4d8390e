"""Parameter-plane anatomy of the double-zero (nilpotent) unfolding

    dy1/dt = y2,      dy2/dt = lambda1 + lambda2 y2 + y1^2 + y1 y2.

For lambda1 > 0 there are no equilibria.  For lambda1 < 0 two appear at
(+-s, 0) with s = sqrt(-lambda1): the right one is always a saddle, the
left one loses stability on the Hopf line lambda2 = s and sheds an
unstable periodic orbit that dies on a homoclinic loop near
lambda2 = (5/7) s.  The loop locus is found by shooting along the
saddle's unstable manifold and bisecting in lambda2 between orbits that
duck under the saddle and orbits that escape past it; the 5/7 slope is
only the leading term, so rasterized diagrams interpolate the shot locus
across the grid in the natural variable |lambda1|^(1/4).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..odeflow import StepUnderflow, VectorField, integrate
from .equilibria import classify_equilibrium

HOMOCLINIC_SLOPE = 5.0 / 7.0


def takens_bogdanov_field(lambda1: float, lambda2: float) -> VectorField:
    """The planar unfolding field at fixed parameters."""
    l1, l2 = float(lambda1), float(lambda2)

    def rhs(x, t, params):
        return np.array([x[1], l1 + l2 * x[1] + x[0] ** 2 + x[0] * x[1]])

    def jac(x, t, params):
        return np.array([[0.0, 1.0],
                         [2.0 * x[0] + x[1], l2 + x[0]]])

    return VectorField(dimension=2, rhs=rhs, jac=jac, name="double-zero unfolding")


def _require_two_equilibria(lambda1: float) -> float:
    if lambda1 >= 0:
        raise ValueError("equilibria exist only for lambda1 < 0")
    return math.sqrt(-lambda1)


def saddle_eigenvalues(lambda1: float, lambda2: float) -> Tuple[float, float]:
    """Eigenvalues at (+s, 0); real of opposite signs for every lambda2."""
    s = _require_two_equilibria(lambda1)
    half_tr = 0.5 * (lambda2 + s)
    root = math.sqrt(half_tr ** 2 + 2.0 * s)
    return (half_tr - root, half_tr + root)


def antisaddle_eigenvalues(lambda1: float, lambda2: float):
    """Eigenvalues at (-s, 0); complex below the discriminant parabola."""
    s = _require_two_equilibria(lambda1)
    half_tr = 0.5 * (lambda2 - s)
    disc = half_tr ** 2 - 2.0 * s
    root = np.emath.sqrt(disc)
    return (half_tr - root, half_tr + root)


def _shoot_class(lambda1: float, lambda2: float, seed_distance: float = 1e-6,
                 tol: float = 1e-8, t_max: float = 400.0) -> str:
    """Fate of the saddle's left unstable-manifold branch.

    "under": the returning orbit crosses y2 = 0 downward between the
    equilibria (it missed the saddle from below); "over": it escapes past
    the saddle on the right.  The homoclinic parameter separates the two,
    with larger lambda2 giving "over".
    """
    s = _require_two_equilibria(lambda1)
    field = takens_bogdanov_field(lambda1, lambda2)
    lam_plus = saddle_eigenvalues(lambda1, lambda2)[1]
    v = np.array([1.0, lam_plus])
    v /= np.linalg.norm(v)
    state = np.array([s, 0.0]) - seed_distance * v

    chunk = 2.0
    n_chunks = int(math.ceil(t_max / chunk))
    for _ in range(n_chunks):
        try:
            traj = integrate(field, state, (0.0, chunk), tol=tol)
        except StepUnderflow:
            # finite-time blowup happens only on the rightward escape,
            # where dy2/dt ~ y1^2 takes over
            return "over"
        ts = np.linspace(0.0, chunk, 201)
        xs = traj.evaluate(ts)
        for i in range(len(ts) - 1):
            if xs[i, 0] > s + 0.2:
                return "over"
            if xs[i, 1] > 0.0 >= xs[i + 1, 1]:
                frac = xs[i, 1] / (xs[i, 1] - xs[i + 1, 1])
                y1_cross = xs[i, 0] + frac * (xs[i + 1, 0] - xs[i, 0])
                if y1_cross > -s + 0.02:
                    return "under"
        if xs[-1, 0] > s + 0.2:
            return "over"
        state = xs[-1]
    raise RuntimeError("shot classification timed out; the parameters sit "
                       "too close to the homoclinic locus to resolve")


def homoclinic_locus(lambda1: float, seed_distance: float = 1e-6,
                     tol: float = 1e-9, iters: int = 40,
                     bracket: Optional[Tuple[float, float]] = None) -> float:
    """lambda2 of the saddle loop at fixed lambda1 < 0, by bisection."""
    s = _require_two_equilibria(lambda1)
    if bracket is None:
        lo, hi = 0.3 * s, 0.99 * s
    else:
        lo, hi = bracket
    c_lo = _shoot_class(lambda1, lo, seed_distance)
    c_hi = _shoot_class(lambda1, hi, seed_distance)
    if c_lo == c_hi:
        lo, hi = 0.05 * s, 1.05 * s
        c_lo = _shoot_class(lambda1, lo, seed_distance)
        c_hi = _shoot_class(lambda1, hi, seed_distance)
        if c_lo == c_hi:
            raise RuntimeError("failed to bracket the homoclinic locus")
    if not (c_lo == "under" and c_hi == "over"):
        raise RuntimeError("unexpected shot ordering across the bracket")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _shoot_class(lambda1, mid, seed_distance) == "over":
            hi = mid
        else:
            lo = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


Region = Union[int, str]


@dataclass
class TBDiagnosis:
    """Placement of one parameter point in the unfolding plane."""

    lambda1: float
    lambda2: float
    region: Region                 # 1..4 or boundary curve "A".."D"
    equilibria: Dict[str, Tuple[float, float]]
    eigenvalues_at_equilibria: Dict[str, dict]
    hopf_lambda2: Optional[float]
    homoclinic_lambda2: Optional[float]
    homoclinic_is_numeric: bool
    homoclinic_reference: Optional[float]   # leading-order (5/7) s

    def to_dict(self) -> dict:
        def _ser(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            return v
        eig = {name: {"eigenvalues": [_ser(complex(e))
                                      for e in info["eigenvalues"]],
                      "label": info["label"]}
               for name, info in self.eigenvalues_at_equilibria.items()}
        return {"lambda1": self.lambda1, "lambda2": self.lambda2,
                "region": str(self.region),
                "equilibria": {k: list(v) for k, v in self.equilibria.items()},
                "eigenvalues_at_equilibria": eig,
                "hopf_lambda2": self.hopf_lambda2,
                "homoclinic_lambda2": self.homoclinic_lambda2,
                "homoclinic_is_numeric": self.homoclinic_is_numeric,
                "homoclinic_reference": self.homoclinic_reference}


def takens_bogdanov_diagram(lambda1: float, lambda2: float,
                            curve_tol: float = 1e-6,
                            homoclinic_lambda2: Optional[float] = None,
                            shoot: bool = True) -> TBDiagnosis:
    """Classify a parameter point into open regions 1-4 or curves A-D.

    Curve A/D: fold line lambda1 = 0 (upper/lower half).  For
    lambda1 < 0, curve B is the Hopf line lambda2 = s and curve C the
    homoclinic locus; region 2 holds a saddle and a fully unstable
    point, region 3 additionally carries the unstable periodic orbit
    born on B, and the orbit is gone in region 4, leaving a saddle and
    an attractor.  The locus separating 3 from 4 is shot numerically
    when the point is near it (or taken from homoclinic_lambda2 when
    supplied); elsewhere the leading-order line (5/7) s decides.
    """
    l1, l2 = float(lambda1), float(lambda2)
    if abs(l1) <= curve_tol and abs(l2) <= curve_tol:
        raise ValueError("the organizing point lambda1 = lambda2 = 0 is "
                         "degenerate: every curve of the diagram meets there")

    if abs(l1) <= curve_tol:
        jac = np.array([[0.0, 1.0], [0.0, l2]])
        cls = classify_equilibrium(jac)
        eq = {"double": (0.0, 0.0)}
        eig = {"double": {"eigenvalues": list(cls.eigenvalues),
                          "label": cls.label}}
        return TBDiagnosis(l1, l2, "A" if l2 > 0 else "D", eq, eig,
                           hopf_lambda2=None, homoclinic_lambda2=None,
                           homoclinic_is_numeric=False,
                           homoclinic_reference=None)

    if l1 > 0:
        return TBDiagnosis(l1, l2, 1, {}, {}, hopf_lambda2=None,
                           homoclinic_lambda2=None,
                           homoclinic_is_numeric=False,
                           homoclinic_reference=None)

    s = math.sqrt(-l1)
    ref = HOMOCLINIC_SLOPE * s
    locus = homoclinic_lambda2
    numeric = locus is not None
    if locus is None:
        if shoot and 0.35 * s < l2 < 0.99 * s:
            locus = homoclinic_locus(l1)
            numeric = True
        else:
            locus = ref

    eq = {"saddle": (s, 0.0), "antisaddle": (-s, 0.0)}
    field = takens_bogdanov_field(l1, l2)
    eig: Dict[str, dict] = {}
    for name, loc in eq.items():
        jac = field.jacobian(np.array(loc), 0.0)
        cls = classify_equilibrium(jac, location=loc)
        eig[name] = {"eigenvalues": list(cls.eigenvalues), "label": cls.label}

    scale = max(1.0, s)
    if abs(l2 - s) <= curve_tol * scale:
        region: Region = "B"
    elif l2 > s:
        region = 2
    elif abs(l2 - locus) <= curve_tol * scale:
        region = "C"
    elif l2 > locus:
        region = 3
    else:
        region = 4
    return TBDiagnosis(l1, l2, region, eq, eig, hopf_lambda2=s,
                       homoclinic_lambda2=locus,
                       homoclinic_is_numeric=numeric,
                       homoclinic_reference=ref)


def _worker_cap(workers: Optional[int]) -> int:
    env = os.environ.get("PERTURBLAB_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    if workers is None:
        workers = cap
    return max(1, min(workers, cap))


@dataclass
class TBGrid:
    """Region labels on a parameter grid plus the interpolated loop locus."""

    lambda1_values: np.ndarray
    lambda2_values: np.ndarray
    regions: List[List[str]]            # indexed [i_lambda1][j_lambda2]
    locus_nodes: List[Tuple[float, float]]
    locus_coeffs: Optional[np.ndarray]  # polynomial in |lambda1|^{1/4} for
                                        # lambda2* / s


def tb_region_grid(lambda1_values: Sequence[float],
                   lambda2_values: Sequence[float],
                   workers: Optional[int] = None,
                   curve_tol: float = 1e-6,
                   shoot: bool = True,
                   max_locus_nodes: int = 8) -> TBGrid:
    """Classify a full rectangle of parameters.

    Shooting at every grid point would dominate the cost, so the
    homoclinic locus is computed at up to max_locus_nodes negative
    lambda1 values and the ratio lambda2*/s is interpolated across the
    grid as a quadratic in |lambda1|^(1/4), the variable in which its
    leading correction is smooth.
    """
    l1s = np.asarray(list(lambda1_values), dtype=float)
    l2s = np.asarray(list(lambda2_values), dtype=float)
    negs = np.array(sorted({l1 for l1 in l1s if l1 < -curve_tol}))

    nodes: List[Tuple[float, float]] = []
    coeffs = None
    if shoot and len(negs) > 0:
        if len(negs) <= max_locus_nodes:
            picked = negs
        else:
            idx = np.unique(np.linspace(0, len(negs) - 1,
                                        max_locus_nodes).round().astype(int))
            picked = negs[idx]
        with ThreadPoolExecutor(max_workers=_worker_cap(workers)) as pool:
            loci = list(pool.map(homoclinic_locus, picked))
        nodes = list(zip(picked.tolist(), loci))
        xi = np.abs(picked) ** 0.25
        rho = np.array(loci) / np.sqrt(-picked)
        deg = min(2, len(picked) - 1)
        coeffs = np.polyfit(xi, rho, deg)

    def locus_at(l1: float) -> float:
        s = math.sqrt(-l1)
        if coeffs is None:
            return HOMOCLINIC_SLOPE * s
        return float(np.polyval(coeffs, abs(l1) ** 0.25)) * s

    regions: List[List[str]] = []
    for l1 in l1s:
        row: List[str] = []
        for l2 in l2s:
            try:
                hom = locus_at(l1) if l1 < -curve_tol else None
                diag = takens_bogdanov_diagram(l1, l2, curve_tol=curve_tol,
                                               homoclinic_lambda2=hom,
                                               shoot=False)
                row.append(str(diag.region))
            except ValueError:
                row.append("TB")    # the organizing point itself
        regions.append(row)
    return TBGrid(lambda1_values=l1s, lambda2_values=l2s, regions=regions,
                  locus_nodes=nodes, locus_coeffs=coeffs)
