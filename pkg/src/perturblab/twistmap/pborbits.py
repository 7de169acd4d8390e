"""Periodic orbits of twist maps located along vertical lines.

For a monotone twist map the q-th iterate moves the angle of a point on
the vertical line phi = phi0 monotonically with the starting action, so
for each phi0 there is a unique action where the angle advances by
exactly 2 pi p.  The radial displacement of the q-th iterate along that
curve changes sign an even number of times around the circle, and its
zeros are the (p, q) periodic points: generically half of them sit at
local minima of the action form (elliptic) and half at saddles
(hyperbolic).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .maps import TWO_PI, TwistMap

PARABOLIC_TRACE_TOL = 1e-6

_ANGLE_TOL = 1e-12
_POLISH_TOL = 1e-12
_MAX_NEWTON = 60


@dataclass
class PeriodicOrbitRecord:
    """One (p, q) periodic orbit with its linearized stability."""

    p: int
    q: int
    points: np.ndarray  # (q, 2) columns (phi mod 2pi, action)
    trace: float
    stability: str  # "elliptic" | "hyperbolic" | "parabolic"
    residual: float

    @property
    def rotation_number(self) -> float:
        return self.p / self.q


def _power_with_jacobian(twist_map: TwistMap, phi: float, act: float,
                         q: int) -> tuple[float, float, np.ndarray]:
    """q-fold composition and its 2x2 tangent at (phi, act)."""
    if twist_map.kernel_family == "standard":
        return kernels.power_jacobian(phi, act, twist_map.params["eps"], q)
    # generic fallback: central differences of the composed map
    def compose(p0, a0):
        p, a = np.array([p0]), np.array([a0])
        for _ in range(q):
            p, a = twist_map.advance(p, a)
        return float(p[0]), float(a[0])

    pq, aq = compose(phi, act)
    h = 1e-7
    jac = np.empty((2, 2))
    for col, (dp, da) in enumerate(((h, 0.0), (0.0, h))):
        pp, ap = compose(phi + dp, act + da)
        pm, am = compose(phi - dp, act - da)
        jac[0, col] = (pp - pm) / (2 * h)
        jac[1, col] = (ap - am) / (2 * h)
    return pq, aq, jac


def _action_on_line(twist_map: TwistMap, phi0: float, p: int, q: int,
                    act_guess: float) -> tuple[float, float]:
    """Solve phi_q(phi0, I) = phi0 + 2 pi p for I; return (I, radial shift).

    Newton in one variable; the twist property makes d(phi_q)/dI
    positive, so the iteration is safe once bracketed near the resonant
    action band.
    """
    act = float(act_guess)
    target = phi0 + TWO_PI * p
    for _ in range(_MAX_NEWTON):
        pq, aq, jac = _power_with_jacobian(twist_map, phi0, act, q)
        g = pq - target
        if abs(g) < _ANGLE_TOL:
            return act, aq - act
        slope = jac[0, 1]
        if slope <= 0.0:
            raise ArithmeticError(
                "twist condition failed along vertical line")
        act -= g / slope
    raise ArithmeticError("angle condition did not converge on line "
                          f"phi0={phi0:.6f}")


def _polish(twist_map: TwistMap, phi: float, act: float, p: int,
            q: int) -> tuple[float, float, float, np.ndarray]:
    """Newton on the full two-dimensional fixed point problem."""
    target = TWO_PI * p
    for _ in range(_MAX_NEWTON):
        pq, aq, jac = _power_with_jacobian(twist_map, phi, act, q)
        r = np.array([pq - phi - target, aq - act])
        res = float(np.max(np.abs(r)))
        if res < _POLISH_TOL:
            return phi, act, res, jac
        step = np.linalg.solve(jac - np.eye(2), r)
        phi -= step[0]
        act -= step[1]
    return phi, act, res, jac


def _orbit_points(twist_map: TwistMap, phi: float, act: float,
                  q: int) -> np.ndarray:
    pts = np.empty((q, 2))
    p, a = np.array([phi]), np.array([act])
    for j in range(q):
        pts[j] = np.mod(p[0], TWO_PI), a[0]
        p, a = twist_map.advance(p, a)
    return pts


def _same_orbit(a: np.ndarray, b: np.ndarray, tol: float = 1e-8) -> bool:
    """True when the two point sets coincide up to cyclic order."""
    for row in a:
        d_angle = np.abs(np.mod(b[:, 0] - row[0] + np.pi, TWO_PI) - np.pi)
        d_act = np.abs(b[:, 1] - row[1])
        if not np.any((d_angle < tol) & (d_act < tol)):
            return False
    return True


def _classify(trace: float, tol: float) -> str:
    if abs(abs(trace) - 2.0) <= tol:
        return "parabolic"
    if abs(trace) < 2.0:
        return "elliptic"
    return "hyperbolic"


def pb_periodic_orbits(twist_map: TwistMap, p: int, q: int,
                       n_lines: int = 64,
                       act_guess: float | None = None,
                       trace_tol: float = PARABOLIC_TRACE_TOL,
                       ) -> list[PeriodicOrbitRecord]:
    """Find the (p, q) periodic orbits near the resonant action band.

    Scans n_lines vertical lines, solves the angle condition on each,
    and brackets sign changes of the radial displacement; every zero is
    polished by a full Newton step and grouped into orbits.  Orbits come
    out sorted by their first angle.
    """
    if q < 1:
        raise ValueError("period q must be positive")
    if act_guess is None:
        act_guess = TWO_PI * p / q

    lines = np.linspace(0.0, TWO_PI, n_lines, endpoint=False)
    acts = np.empty(n_lines)
    radial = np.empty(n_lines)
    guess = act_guess
    for i, phi0 in enumerate(lines):
        acts[i], radial[i] = _action_on_line(twist_map, phi0, p, q, guess)
        guess = acts[i]  # continuation around the circle

    records: list[PeriodicOrbitRecord] = []
    for i in range(n_lines):
        j = (i + 1) % n_lines
        ra, rb = radial[i], radial[j]
        if ra == 0.0:
            zero_phi, zero_act = lines[i], acts[i]
        elif ra * rb < 0.0:
            # bisect on phi0 with the angle condition re-solved inside
            lo, hi = lines[i], lines[i] + TWO_PI / n_lines
            f_lo = ra
            zero_act = acts[i]
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                zero_act, f_mid = _action_on_line(twist_map, mid, p, q,
                                                  zero_act)
                if f_lo * f_mid <= 0.0:
                    hi = mid
                else:
                    lo, f_lo = mid, f_mid
            zero_phi = 0.5 * (lo + hi)
        else:
            continue

        phi_star, act_star, res, jac = _polish(twist_map, zero_phi, zero_act,
                                               p, q)
        pts = _orbit_points(twist_map, phi_star, act_star, q)
        if any(_same_orbit(pts, r.points) for r in records):
            continue
        trace = float(np.trace(jac))
        records.append(PeriodicOrbitRecord(
            p=p, q=q, points=pts, trace=trace,
            stability=_classify(trace, trace_tol), residual=res))

    records.sort(key=lambda r: r.points[0, 0])
    return records
