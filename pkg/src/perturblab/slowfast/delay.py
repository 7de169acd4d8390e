"""Dynamic Hopf bifurcation: delayed exits and the maximal-delay point.

Two experiments.  The clean delayed Hopf (eps z' = (y+i)z - |z|^2 z with
drifting y) exits its unstable phase at y = -y0: the phase integral
alpha(t) = y0 t + t^2/2 must climb back to zero before the accumulated
contraction is undone.  Adding a drifting equilibrium (constant forcing
eps) caps the delay at a system constant, the buffer point: the forcing
continually re-seeds the unstable mode, and how far the seed can be
carried is decided by the level lines of Re alpha in complex time.

The observed buffer exit is genuinely delicate: at eps = 0.005 the decisive
signal sits at relative size e^{-1/2eps} ~ 1e-44, far below double
precision roundoff, so the trajectory is integrated with a high-order
Taylor method in adaptive multiprecision arithmetic.  Plain double
precision would report a plausible-looking exit near t ~ 0.5 seeded by
rounding noise rather than by the equation.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import mpmath as mp
import numpy as np

from ..odeflow import VectorField, integrate
from .system import SlowFastSystem

Array = np.ndarray


class ThresholdNotCrossed(RuntimeError):
    """The exit amplitude was never reached inside the horizon."""


@dataclass
class DelayAnalysis:
    """Result of a delay experiment.

    ``alpha`` is the phase integral of the destabilizing eigenvalue;
    ``psi(t, t0)`` evaluates the forced-response integral
    int_t0^t exp((alpha(t)-alpha(s))/eps) ds.  Exits are reported in the
    slow variable.  ``buffer_point`` is None when the system has no
    forcing-limited maximal delay.
    """

    t0: float
    eps: float
    threshold: float
    alpha: Callable[[float], complex]
    psi: Callable[[float, float], complex]
    predicted_exit: float
    observed_exit: float
    buffer_point: Optional[float] = None
    threshold_sensitivity: float = math.nan
    sensitivity_mode: str = "threshold x2"
    naive_sup: Optional[float] = None
    naive_gap: Optional[float] = None
    orbit_approach_error: Optional[float] = None
    samples: Optional[Array] = None
    meta: dict = field(default_factory=dict)


def _probe_hopf_family(system: SlowFastSystem, drifted: bool) -> None:
    """Reject systems that are not the (possibly drifted) Hopf normal form.

    The delay routines use exact reductions of the normal form (polar
    radial equation, Taylor recurrences), so they refuse to silently run
    on a different vector field.
    """
    rng_pts = [((0.31, -0.22), -0.73), ((-0.11, 0.47), 0.39)]
    for (u0, v0), yy in rng_pts:
        x = np.array([u0, v0])
        y = np.array([yy])
        if drifted:
            zu, zv = u0 + yy, v0
        else:
            zu, zv = u0, v0
        s = zu * zu + zv * zv
        want = np.array([yy * zu - zv - s * zu, zu + yy * zv - s * zv])
        got = np.asarray(system.f(x, y), dtype=float)
        if not np.allclose(got, want, rtol=1e-8, atol=1e-10):
            raise ValueError("system is not the delayed-Hopf normal family "
                             "this analysis is specialized to")
        got_g = np.asarray(system.g(x, y), dtype=float)
        if not np.allclose(got_g, [1.0], rtol=1e-10, atol=1e-12):
            raise ValueError("slow drift must be dy/dt = 1")


def hopf_delay(system: SlowFastSystem, y0: float, eps: float,
               r0: float = 0.1, r_threshold: Optional[float] = None,
               t_final: Optional[float] = None,
               tol: float = 1e-11) -> DelayAnalysis:
    """Measure the bifurcation delay of the Hopf normal form.

    Starts at radius r0 with y(0) = y0 < 0, integrates the exact radial
    reduction d(ln r)/dt = (y - r^2)/eps (the phase decouples), and
    records where r climbs back through the threshold after its dip.
    The static bifurcation sits at y = 0; the exit instead happens near
    y = -y0, where alpha(t) = y0 t + t^2/2 returns to zero.
    """
    _probe_hopf_family(system, drifted=False)
    if y0 >= 0:
        raise ValueError("y0 must be negative: the delay starts on the "
                         "stable side")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if r0 < 0:
        raise ValueError("r0 must be nonnegative")
    if r0 == 0.0:
        raise ThresholdNotCrossed(
            "r = 0 is invariant: a trajectory started there never exits")
    threshold = r0 if r_threshold is None else float(r_threshold)
    y_end = max(1.6, -y0 + 0.4)
    t_f = (y_end - y0) if t_final is None else float(t_final)

    def rhs(state, t, params):
        # clip the exponent: a rejected trial step far into the saturated
        # regime must produce a finite (huge) slope, not an overflow
        return np.array([((y0 + t) - math.exp(min(2.0 * state[0], 700.0)))
                         / eps])

    field_rho = VectorField(dimension=1, rhs=rhs, name="hopf radial log")
    traj = integrate(field_rho, [math.log(r0)], (0.0, t_f), tol=tol)

    t_grid = np.linspace(0.0, t_f, 8001)
    rho = np.array([float(traj.evaluate(t)[0]) for t in t_grid])

    def upward_crossing(level: float) -> Optional[float]:
        i_dip = int(np.argmin(rho))
        hits = np.nonzero((rho[i_dip + 1:] >= level)
                          & (rho[i_dip:-1] < level))[0]
        if hits.size == 0:
            return None
        i = i_dip + int(hits[0])
        lo, hi = t_grid[i], t_grid[i + 1]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if float(traj.evaluate(mid)[0]) < level:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    t_exit = upward_crossing(math.log(threshold))
    if t_exit is None:
        raise ThresholdNotCrossed(
            f"radius never recrossed {threshold:g} before t={t_f:g}")
    y_exit = y0 + t_exit

    # sensitivity: doubled threshold, falling back to a halved one when the
    # doubled value exceeds the saturation amplitude sqrt(y) (unreachable)
    if 2.0 * threshold < math.sqrt(y_end) * 0.95:
        t_alt = upward_crossing(math.log(2.0 * threshold))
        mode = "threshold x2"
    else:
        t_alt = upward_crossing(math.log(0.5 * threshold))
        mode = "threshold /2 (doubled threshold exceeds saturation)"
    sens = abs(t_alt - t_exit) if t_alt is not None else math.nan

    approach = None
    t_15 = 1.5 - y0
    if t_15 <= t_f:
        r_15 = math.exp(float(traj.evaluate(t_15)[0]))
        approach = abs(r_15 - math.sqrt(1.5))

    def alpha(t: float) -> float:
        return y0 * t + 0.5 * t * t

    def psi(t: float, t_start: float = 0.0) -> float:
        return _real_line_psi(alpha, eps, t, t_start)

    keep = slice(0, t_grid.size, 4)
    samples = np.column_stack([t_grid[keep], y0 + t_grid[keep],
                               np.exp(rho[keep])])
    return DelayAnalysis(
        t0=y0, eps=eps, threshold=threshold, alpha=alpha, psi=psi,
        predicted_exit=-y0, observed_exit=y_exit, buffer_point=None,
        threshold_sensitivity=sens, sensitivity_mode=mode,
        orbit_approach_error=approach, samples=samples,
        meta={"t_exit": t_exit, "t_final": t_f})


def _real_line_psi(alpha: Callable[[float], float], eps: float,
                   t: float, t0: float) -> float:
    """Quadrature of exp((alpha(t)-alpha(s))/eps) ds for real alpha.

    The integrand is positive, so a composite Simpson rule on a rescaled
    exponent suffices; the peak of the exponent is factored out to avoid
    overflow, as the raw integrand can exceed the float range long before
    the integral itself matters.
    """
    if t == t0:
        return 0.0
    s = np.linspace(t0, t, 2001)
    w = (alpha(t) - np.array([alpha(v) for v in s])) / eps
    m = float(np.max(w))
    if m > 690.0:
        return math.inf
    vals = np.exp(w - m)
    total = float(np.trapz(vals, s))
    return total * math.exp(m)


# ---------------------------------------------------------------------------
# buffer point: admissibility search, contour quadrature, observed exit


def _bottleneck_from(r_grid: Array, start: Tuple[int, int]) -> Array:
    """Maximin (bottleneck) value to every node from one start node.

    V[node] = max over paths of the min of r_grid along the path: a
    Dijkstra sweep with min() as the path cost and a max-heap.  8-neighbor
    connectivity on the (sigma, tau) grid.
    """
    n_s, n_t = r_grid.shape
    v = np.full((n_s, n_t), -np.inf)
    i0, j0 = start
    v[i0, j0] = r_grid[i0, j0]
    heap = [(-v[i0, j0], i0, j0)]
    offsets = [(-1, -1), (-1, 0), (-1, 1), (0, -1),
               (0, 1), (1, -1), (1, 0), (1, 1)]
    while heap:
        neg, i, j = heapq.heappop(heap)
        if -neg < v[i, j]:
            continue
        base = v[i, j]
        for di, dj in offsets:
            ii, jj = i + di, j + dj
            if 0 <= ii < n_s and 0 <= jj < n_t:
                cand = min(base, r_grid[ii, jj])
                if cand > v[ii, jj]:
                    v[ii, jj] = cand
                    heapq.heappush(heap, (-cand, ii, jj))
    return v


def _exit_from_levels(sigma: Array, r_top: Array, v_top: Array,
                      start_sigma: float) -> float:
    """First real time where even the best path fails the level test.

    A time t is still reachable without blow-up while some path from the
    entry keeps Re alpha >= Re alpha(t); the exit is the first t > 0 where
    the bottleneck value drops below Re alpha(t).
    """
    d = r_top - v_top
    scan = np.nonzero((sigma > max(0.0, start_sigma)) & (d > 1e-12))[0]
    if scan.size == 0:
        raise RuntimeError("no predicted exit inside the grid horizon; "
                           "enlarge the window")
    i = int(scan[0])
    if i == 0:
        return float(sigma[0])
    # the bottleneck at the first failing node is the pass level; the exit
    # is where r_top climbs through that level
    level = v_top[i]
    r0, r1 = r_top[i - 1], r_top[i]
    frac = (level - r0) / (r1 - r0) if r1 != r0 else 1.0
    frac = min(1.0, max(0.0, frac))
    return float(sigma[i - 1] + frac * (sigma[i] - sigma[i - 1]))


def _contour_psi(alpha: Callable[[complex], complex], eps: float,
                 t: float, t0: float, depth: float) -> complex:
    """Psi(t, t0) by quadrature along a rectangular complex-time contour.

    The straight real-axis integrand oscillates with amplitude up to
    exp((Re alpha(t) - min Re alpha)/eps), so its cancellation exceeds
    double precision long before the buffer point.  Dropping the path to
    Im s = depth (through the saddle of Re alpha) makes the magnitude
    profile single-peaked and the quadrature benign; the exponent is still
    rescaled by its peak before exponentiation.
    """
    if t == t0:
        return 0.0 + 0.0j
    legs = [(complex(t0), t0 + 1j * depth),
            (t0 + 1j * depth, t + 1j * depth),
            (t + 1j * depth, complex(t))]
    nodes, weights = np.polynomial.legendre.leggauss(16)
    alpha_t = alpha(t)

    exps: List[complex] = []
    wts: List[complex] = []
    for a, b in legs:
        span = b - a
        if span == 0:
            continue
        # oscillation rate along the leg decides the panel count
        probes = [a, 0.5 * (a + b), b]
        h = 1e-5 * max(1.0, abs(span))
        lam = max(abs(alpha(p + h * span / abs(span))
                      - alpha(p - h * span / abs(span))) / (2 * h)
                  for p in probes)
        panels = int(min(1200, max(2, math.ceil(abs(span) * lam / (12.0 * eps)))))
        for p in range(panels):
            lo = a + span * p / panels
            mid_scale = span / (2.0 * panels)
            for x, w in zip(nodes, weights):
                s = lo + (x + 1.0) * mid_scale
                exps.append((alpha_t - alpha(s)) / eps)
                wts.append(w * mid_scale)

    ee = np.array(exps)
    ww = np.array(wts)
    m = float(np.max(ee.real))
    if m > 690.0:
        return complex(math.inf, 0.0)
    total = complex(np.sum(ww * np.exp(ee - m)))
    return total * math.exp(m)


def _taylor_observed(t0: float, eps: float, thresholds: List[float],
                     t_stop: float, max_steps: int = 60000
                     ) -> Tuple[Dict[float, Optional[float]], Array, dict]:
    """High-order Taylor integration of eps z' = (t+i)z - |z|^2 z + eps.

    Starts exactly on the slow manifold (z = 0) at t = t0 and reports the
    first upward crossing of each threshold at t > 0.  Working precision
    follows the remaining error-growth budget exp((Re alpha(t_stop) -
    Re alpha(t))/eps): digits are spent only while the valley can still
    amplify a rounding error into a fake exit.
    """
    ln10 = math.log(10.0)
    growth_digits = (0.5 * t_stop * t_stop) / eps / ln10
    dps_max = int(growth_digits) + 15

    order = 20
    while order * (math.log(order) - 1.0) < (dps_max + 3) * ln10:
        order += 5

    saved_dps = mp.mp.dps
    tic = time.time()
    try:
        mp.mp.dps = dps_max
        eps_mp = mp.mpf(eps)
        t = mp.mpf(t0)
        u = mp.mpf(0)
        v = mp.mpf(0)

        crossings: Dict[float, Optional[float]] = {th: None for th in thresholds}
        thr_sorted = sorted(thresholds)
        samples = [(float(t), 0.0)]
        r_prev = 0.0
        t_prev = float(t)
        steps = 0

        while float(t) < t_stop and steps < max_steps:
            remaining = (0.5 * t_stop * t_stop
                         - 0.5 * float(t) * float(t)) / eps / ln10
            mp.mp.dps = min(dps_max, max(25, int(remaining) + 15))

            scale = abs(float(t)) + 1.0 + 3.0 * float(u * u + v * v)
            h = eps / scale
            if float(t) + h > t_stop:
                h = t_stop - float(t) + 1e-12

            a = [u]
            b = [v]
            s = [u * u + v * v]
            for k in range(order):
                ya_k = t * a[k] + (a[k - 1] if k >= 1 else 0)
                yb_k = t * b[k] + (b[k - 1] if k >= 1 else 0)
                us_k = mp.fsum(a[j] * s[k - j] for j in range(k + 1))
                vs_k = mp.fsum(b[j] * s[k - j] for j in range(k + 1))
                force = eps_mp if k == 0 else 0
                a.append((ya_k - b[k] - us_k + force) / (eps_mp * (k + 1)))
                b.append((a[k] + yb_k - vs_k) / (eps_mp * (k + 1)))
                k1 = k + 1
                s.append(mp.fsum(a[j] * a[k1 - j] for j in range(k1 + 1))
                         + mp.fsum(b[j] * b[k1 - j] for j in range(k1 + 1)))

            hm = mp.mpf(h)
            un = a[order]
            vn = b[order]
            for k in range(order - 1, -1, -1):
                un = un * hm + a[k]
                vn = vn * hm + b[k]
            u, v = un, vn
            t = t + hm
            steps += 1

            r = math.sqrt(float(u * u + v * v))
            samples.append((float(t), r))
            if float(t) > 0.0:
                for th in thr_sorted:
                    if crossings[th] is None and r >= th:
                        if r_prev > 0.0 and r > r_prev:
                            frac = ((math.log(th) - math.log(r_prev))
                                    / (math.log(r) - math.log(r_prev)))
                            crossings[th] = t_prev + frac * (float(t) - t_prev)
                        else:
                            crossings[th] = float(t)
            r_prev = r
            t_prev = float(t)
            if crossings[thr_sorted[-1]] is not None:
                break
    finally:
        mp.mp.dps = saved_dps

    meta = {"dps": dps_max, "taylor_order": order, "steps": steps,
            "wall_seconds": time.time() - tic}
    return crossings, np.array(samples), meta


def buffer_point(system: SlowFastSystem, t0: float, eps: float,
                 threshold: Optional[float] = None,
                 alpha_fn: Optional[Callable[[complex], complex]] = None,
                 grid_res: float = 0.02) -> DelayAnalysis:
    """Delay analysis of the drifted Hopf model: the exit is capped at 1.

    The predicted exit comes from a maximin (bottleneck) search on the
    level lines of Re alpha(t + i tau) = (t^2 - (tau+1)^2 + 1)/2: a real
    time t is safe while some complex-time path from t0 keeps Re alpha
    above Re alpha(t), and the deepest usable pass sits at the saddle
    value 1/2, giving exit = min(-t0, 1) with buffer point 1.  The
    observed exit integrates the true system in multiprecision and reports
    |z| crossing the threshold (default 10 sqrt(eps)); the naive
    eps-series z ~ -eps/(y+i), which stays bounded through the buffer, is
    reported alongside as the discrepancy.
    """
    _probe_hopf_family(system, drifted=True)
    if t0 >= 0:
        raise ValueError("t0 must be negative")
    if eps <= 0:
        raise ValueError("eps must be positive")
    thr = 10.0 * math.sqrt(eps) if threshold is None else float(threshold)
    if thr <= 3.0 * eps:
        raise ValueError("threshold must sit well above the eps-scale "
                         "forced response")

    if alpha_fn is None:
        def alpha_fn(s):  # noqa: F811 - model phase integral
            return 0.5 * s * s + 1j * s

    # admissibility grid, anchored so t0 lands on a node
    h = grid_res
    n_left = int(math.ceil((t0 - (min(t0, -1.6) - 0.25)) / h))
    t_lo = t0 - n_left * h
    t_hi = max(1.6, -t0 + 0.4)
    tau_lo = -2.5
    sigma = np.arange(t_lo, t_hi + h, h)
    tau = np.arange(tau_lo, 0.0 + h / 2, h)
    r_grid = np.empty((sigma.size, tau.size))
    for j, tj in enumerate(tau):
        r_grid[:, j] = [complex(alpha_fn(si + 1j * tj)).real for si in sigma]

    j_top = tau.size - 1
    i_entry = int(np.argmin(np.abs(sigma - t0)))
    v_entry = _bottleneck_from(r_grid, (i_entry, j_top))
    predicted = _exit_from_levels(sigma, r_grid[:, j_top],
                                  v_entry[:, j_top], t0)
    v_far = _bottleneck_from(r_grid, (0, j_top))
    buffer_pt = _exit_from_levels(sigma, r_grid[:, j_top],
                                  v_far[:, j_top], float(sigma[0]))

    # deepest pass depth for the psi contour: the tau row whose worst point
    # is highest (for the model this is tau = -1, the saddle row)
    row_floor = r_grid.min(axis=0)
    depth = float(tau[int(np.argmax(row_floor))])

    def psi(t: float, t_start: float = t0) -> complex:
        return _contour_psi(alpha_fn, eps, t, t_start, depth)

    # observed exit, with half/double thresholds for the sensitivity report
    t_stop = min(-t0, buffer_pt) + 0.15
    crossings, samples, meta = _taylor_observed(
        t0, eps, [0.5 * thr, thr, 2.0 * thr], t_stop)
    observed = crossings[thr]
    if observed is None:
        raise ThresholdNotCrossed(
            f"|z| never reached {thr:g} before t={t_stop:g}")
    if crossings[2.0 * thr] is not None:
        sens = crossings[2.0 * thr] - observed
        mode = "threshold x2"
    else:
        sens = observed - crossings[0.5 * thr]
        mode = "threshold /2 (doubled threshold exceeds saturation)"

    # the naive series stays O(eps): its sup and the gap to the threshold
    tt = np.linspace(t0, observed, 801)
    naive_sup = float(np.max(eps / np.sqrt(tt * tt + 1.0)))
    meta.update({"grid_res": h, "contour_depth": depth,
                 "t_stop": t_stop, "crossings": crossings})

    return DelayAnalysis(
        t0=t0, eps=eps, threshold=thr, alpha=alpha_fn, psi=psi,
        predicted_exit=predicted, observed_exit=float(observed),
        buffer_point=buffer_pt, threshold_sensitivity=float(sens),
        sensitivity_mode=mode, naive_sup=naive_sup,
        naive_gap=thr / naive_sup, samples=samples, meta=meta)
