"""Splitting of an invariant-axis connection and local return asymptotics.

``heteroclinic_splitting`` treats a planar field whose x1-axis joins an
equilibrium at 0 to one at 1 and whose transverse perturbation is eps*g2.
The first-order displacement h1 of the unstable manifold off the axis
solves the linear variational problem along the connection,

    h1(x1) = integral_0^x1 exp( integral_y^x1 w(z) dz ) g2(y)/f1(y) dy,

with w = (d f2 / d x2)|_axis / f1.  An equivalent route multiplies the
divergence into the exponent and divides by f1(x1) outside; both are
computed and compared, since they discretize differently.

The integrand is singular at both endpoints (f1 vanishes there), so the
quadrature runs in logarithmic coordinates from each end: s = log(y) on
the lower half and v = -log(1 - y) on the upper half, composite
Gauss-Legendre panels in each, with the inner exponent accumulated at
panel edges and corrected per node.  Near the far equilibrium the graph
transversality typically fails: whenever the transverse eigenvalue there
is expanding the displacement diverges as x1 -> 1, and the reported
endpoint value is a signed infinity whose sign (and the finite amplitude
in front of the blowup) comes from the weighted mass ``melnikov``.

``homoclinic_return_profile`` gives the corner asymptotics of the return
map of a saddle loop with eigenvalues a1 < 0 < a2: a re-entry height
x2 produces an exit ratio (eps/x2)^(1 - |a1|/a2), so iterates flatten
onto the loop when |a1| > a2 and peel away when |a1| < a2.  The sign of
delta * log(|a1|/a2) then decides whether breaking the loop by delta
leaves nothing, a loop, or a hyperbolic periodic orbit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .._quadrature import _gl_nodes

_FLOOR = 1e-12
_EXP_CAP = 700.0


class NonintegrableSingularityError(ValueError):
    """The first-order displacement integral diverges at an axis endpoint."""

    def __init__(self, message: str, exponent: float, endpoint: float):
        super().__init__(message)
        self.exponent = exponent
        self.endpoint = endpoint


def _chebyshev_points(n: int, a: float, b: float) -> np.ndarray:
    k = np.arange(1, n + 1)
    x = np.cos((2 * k - 1) * np.pi / (2 * n))
    return 0.5 * (a + b) + 0.5 * (b - a) * x


@dataclass
class SplittingResult:
    """First-order transverse displacement along a saddle-saddle axis."""

    h1: Callable[[float], float]
    endpoint_value: float
    quadrature_error: float
    melnikov: float               # weighted g2 mass, finite even when h1(1) is not
    route_disagreement: float
    left_exponent: float
    far_eigenvalue: float

    def __call__(self, x1: float) -> float:
        return self.h1(x1)


class _LogPanelCore:
    """Nested quadrature of exp(V(x1) - V(y)) * q(y) dy in endpoint-log charts.

    V is the antiderivative of a weight w dy accumulated across panels;
    the same panel sweep serves any reference level of V, so one pass at
    x1 close to 1 yields both the raw value and the half-axis-normalized
    mass.
    """

    def __init__(self, w: Callable[[float], float],
                 q: Callable[[float], float],
                 outer_order: int = 16, inner_order: int = 12,
                 panel_width: float = 0.5):
        self.w = w
        self.q = q
        self.xo, self.wo = _gl_nodes(outer_order)
        self.xi, self.wi = _gl_nodes(inner_order)
        self.panel_width = panel_width

    def _panel_sweep(self, t0: float, t1: float, y_of, dy_of):
        """Yield (y, jac, V_at_node, outer_weight) plus the panel-edge V
        increment over [t0, t1] in a monotone chart t -> y."""
        if t1 <= t0:
            return 0.0, []
        n = max(1, int(math.ceil((t1 - t0) / self.panel_width)))
        edges = np.linspace(t0, t1, n + 1)
        records = []
        V_edge = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            nodes = mid + half * self.xo
            for t, wgt in zip(nodes, self.wo):
                # partial integral of w dy from the panel edge to this node
                pm, ph = 0.5 * (lo + t), 0.5 * (t - lo)
                part = ph * sum(
                    wi * self.w(y_of(pm + ph * xi)) * dy_of(pm + ph * xi)
                    for xi, wi in zip(self.xi, self.wi))
                records.append((y_of(t), dy_of(t), V_edge + part, wgt * half))
            V_edge += half * sum(
                wi * self.w(y_of(mid + half * xi)) * dy_of(mid + half * xi)
                for xi, wi in zip(self.xo, self.wo))
        return V_edge, records

    def run(self, x1: float, floor: float = _FLOOR):
        """Sweep (floor, x1) and return (V_total, V_half, records).

        records hold (y, jacobian, V, weight) for every outer node; V is
        measured from the floor.  V_half is V at min(x1, 1/2) so callers
        can re-reference the exponent.
        """
        y_mid = min(x1, 0.5)
        V_lower, rec = self._panel_sweep(
            math.log(floor), math.log(y_mid),
            y_of=math.exp, dy_of=math.exp)
        records = rec
        V_half = V_lower
        if x1 > 0.5:
            v_end = -math.log1p(-x1) if x1 < 1.0 else -math.log(floor)
            V_upper, rec_up = self._panel_sweep(
                math.log(2.0), v_end,
                y_of=lambda v: 1.0 - math.exp(-v),
                dy_of=lambda v: math.exp(-v))
            for (y, jac, V, wgt) in rec_up:
                records.append((y, jac, V_lower + V, wgt))
            V_total = V_lower + V_upper
        else:
            V_total = V_lower
        return V_total, V_half, records

    def integral(self, x1: float, floor: float = _FLOOR):
        """exp(V(x1) - V(y)) * q(y) dy over (floor, x1): the displacement."""
        V_total, _, records = self.run(x1, floor)
        total = 0.0
        for (y, jac, V, wgt) in records:
            expo = min(V_total - V, _EXP_CAP)
            total += wgt * math.exp(expo) * self.q(y) * jac
        return total, V_total


def _left_exponent(w, g2, f1) -> float:
    """Log-log slope of the displacement integrand as y -> 0."""
    for samples in ((1e-6, 1e-8, 1e-10), (3e-7, 3e-9, 3e-11)):
        vals = [g2(y) for y in samples]
        if min(abs(v) for v in vals) < 1e-300:
            continue
        xi, wi = _gl_nodes(16)
        A = [0.0]
        for hi, lo in zip(samples[:-1], samples[1:]):
            s0, s1 = math.log(lo), math.log(hi)
            mid, half = 0.5 * (s0 + s1), 0.5 * (s1 - s0)
            seg = half * sum(wj * w(math.exp(mid + half * xj)) *
                             math.exp(mid + half * xj)
                             for xj, wj in zip(xi, wi))
            A.append(A[-1] + seg)
        lnI = [a + math.log(abs(g)) - math.log(abs(f1(y)))
               for a, g, y in zip(A, vals, samples)]
        lny = [math.log(y) for y in samples]
        return float(np.polyfit(lny, lnI, 1)[0])
    return 0.0  # g2 vanishes at every probe; the integrand is left-regular


def heteroclinic_splitting(f1_on_axis: Callable[[float], float],
                           df2dx2_on_axis: Callable[[float], float],
                           g2_on_axis: Callable[[float], float],
                           tol: float = 1e-10) -> SplittingResult:
    """First-order splitting function of a perturbed axis connection.

    f1_on_axis is the axis speed (nonzero on (0,1), vanishing at both
    equilibria), df2dx2_on_axis the transverse linearization along the
    axis, g2_on_axis the transverse component of the perturbation.  The
    returned map satisfies h1(0) = 0 and is evaluated on [0, 1); its
    limit at 1 is reported separately since it is infinite whenever the
    far transverse eigenvalue is expanding.
    """
    f1 = lambda y: float(f1_on_axis(y))
    f22 = lambda y: float(df2dx2_on_axis(y))
    g2 = lambda y: float(g2_on_axis(y))

    probes = _chebyshev_points(33, 0.0, 1.0)
    f1_vals = np.array([f1(y) for y in probes])
    if np.any(f1_vals == 0) or np.min(f1_vals) < 0 < np.max(f1_vals):
        raise ValueError("f1 must be nonzero with a single sign on (0, 1); "
                         "the connection must traverse the whole axis")
    if np.max(np.abs([g2(y) for y in probes])) < 1e-15:
        zero = lambda x1: 0.0
        return SplittingResult(h1=zero, endpoint_value=0.0,
                               quadrature_error=0.0, melnikov=0.0,
                               route_disagreement=0.0, left_exponent=0.0,
                               far_eigenvalue=f22(1.0))

    w4 = lambda y: f22(y) / f1(y)
    slope = _left_exponent(w4, g2, f1)
    if slope <= -0.98:
        raise NonintegrableSingularityError(
            "displacement integrand behaves like y^p with p = "
            f"{slope:.4f} <= -0.98 near y = 0; the first-order integral "
            "does not converge there", exponent=slope, endpoint=0.0)

    core4 = _LogPanelCore(w4, lambda y: g2(y) / f1(y))
    coarse4 = _LogPanelCore(w4, lambda y: g2(y) / f1(y),
                            outer_order=12, inner_order=8, panel_width=0.8)

    def df1(y: float) -> float:
        h = min(1e-6, 0.5 * y, 0.5 * abs(1.0 - y) + 1e-13)
        return (f1(y + h) - f1(y - h)) / (2 * h)

    w5 = lambda y: (df1(y) + f22(y)) / f1(y)
    core5 = _LogPanelCore(w5, g2)

    def h1(x1: float) -> float:
        if x1 <= 0.0:
            return 0.0
        x1 = min(float(x1), 1.0 - _FLOOR)
        val, _ = core4.integral(x1)
        return val

    # route comparison and discretization error at interior probes
    route_diff = 0.0
    quad_err = 0.0
    for xp in (0.25, 0.5, 0.75):
        fine, _ = core4.integral(xp)
        other, _ = core5.integral(xp)
        other /= f1(xp)
        coarse, _ = coarse4.integral(xp)
        scale = max(1.0, abs(fine))
        route_diff = max(route_diff, abs(fine - other) / scale)
        quad_err = max(quad_err, abs(fine - coarse) / scale)

    # one sweep to the far end serves both the raw limit and the mass
    # normalized at the axis midpoint
    x_ref = 1.0 - _FLOOR
    V_total, V_half, records = core4.run(x_ref)
    endpoint_raw = 0.0
    melnikov = 0.0
    for (y, jac, V, wgt) in records:
        contrib = wgt * g2(y) / f1(y) * jac
        endpoint_raw += math.exp(min(V_total - V, _EXP_CAP)) * contrib
        melnikov += math.exp(min(V_half - V, _EXP_CAP)) * contrib

    # mass left below the quadrature floor, from the measured exponent
    tail = abs(math.exp(min(V_total, _EXP_CAP)) * g2(_FLOOR) / f1(_FLOOR)
               * _FLOOR / (slope + 1.0))
    quad_err += tail / max(1.0, abs(endpoint_raw))

    a2 = f22(1.0)
    if a2 > 1e-9:
        endpoint = math.copysign(math.inf, melnikov) if melnikov != 0 \
            else 0.0
    else:
        endpoint = endpoint_raw

    return SplittingResult(h1=h1, endpoint_value=endpoint,
                           quadrature_error=float(quad_err),
                           melnikov=float(melnikov),
                           route_disagreement=float(route_diff),
                           left_exponent=float(slope),
                           far_eigenvalue=float(a2))


@dataclass
class HomoclinicProfile:
    """Corner-map asymptotics of a saddle loop with eigenvalues a1 < 0 < a2."""

    a1: float
    a2: float
    eps_box: float
    x2_samples: np.ndarray
    ratios: np.ndarray
    limit: float                  # 0.0 when |a1| > a2, inf when |a1| < a2
    limit_class: str              # "vanishing" or "diverging"
    orbit_side: int               # sign of delta admitting a periodic orbit

    def splitting_functional(self, delta: float) -> float:
        return delta * math.log(abs(self.a1) / self.a2)

    def admits_periodic_orbit(self, delta: float) -> bool:
        return self.splitting_functional(delta) > 0

    def loop_outcome(self, delta: float) -> str:
        H = self.splitting_functional(delta)
        if H > 0:
            return "hyperbolic periodic orbit"
        if H < 0:
            return "no invariant set"
        return "homoclinic loop"


def homoclinic_return_profile(a1: float, a2: float, eps_box: float,
                              x2_samples: Sequence[float]) -> HomoclinicProfile:
    """Exit/entry ratio of the local corner map near a homoclinic saddle.

    An orbit re-entering the eps_box-neighbourhood of the saddle at
    height x2 leaves it with transverse offset ratio
    (eps_box / x2)^(1 - |a1|/a2).  The ratio tends to 0 as x2 -> 0 when
    the contraction dominates (|a1| > a2) and to infinity otherwise; the
    boundary case |a1| = a2 is excluded since the exponent degenerates.
    """
    if not (a1 < 0 < a2):
        raise ValueError("need a contracting a1 < 0 and expanding a2 > 0")
    nu = abs(a1) / a2
    if abs(nu - 1.0) < 1e-12:
        raise ValueError("excluded ratio |a1| = a2: the corner map exponent "
                         "vanishes and the leading asymptotics degenerate")
    if eps_box <= 0:
        raise ValueError("eps_box must be positive")
    samples = np.asarray(list(x2_samples), dtype=float)
    if np.any(samples <= 0) or np.any(samples > eps_box):
        raise ValueError("x2 samples must lie in (0, eps_box]")
    ratios = (eps_box / samples) ** (1.0 - nu)
    if nu > 1:
        limit, cls, side = 0.0, "vanishing", +1
    else:
        limit, cls, side = math.inf, "diverging", -1
    return HomoclinicProfile(a1=float(a1), a2=float(a2),
                             eps_box=float(eps_box), x2_samples=samples,
                             ratios=ratios, limit=limit, limit_class=cls,
                             orbit_side=side)
