"""Invariant circles of the standard family by Newton in Fourier space.

The circle with rotation number omega is sought as a conjugacy

    phi = psi + u(psi),   I = I0 + v(psi),

u, v zero-mean and 2pi-periodic, such that advancing the point at psi
lands on the point at psi + 2 pi omega.  Each Newton sweep solves the
cohomological operator L w = w(. + 2 pi omega) - w, whose Fourier
symbol e^{2 pi i k omega} - 1 is controlled from below by the
Diophantine properties of omega.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..diophantine import small_denominator_bound
from .maps import TWO_PI, TwistMap


class ResonantFrequency(Exception):
    """A needed harmonic divides by an effectively vanishing denominator."""


class NoBreakupTransition(Exception):
    """The scan range does not straddle survival and failure."""


@dataclass
class InvariantCircle:
    omega: float
    eps: float
    u_hat: np.ndarray
    v_hat: np.ndarray
    action_offset: float
    residual: float
    newton_iterations: int
    n_harmonics: int
    converged: bool
    breakup_suspected: bool

    def evaluate(self, psi) -> tuple[np.ndarray, np.ndarray]:
        """(phi, I) on the circle at parameter values psi."""
        psi = np.atleast_1d(np.asarray(psi, dtype=float))
        n = len(self.u_hat)
        ks = np.fft.fftfreq(n, d=1.0 / n)
        phases = np.exp(1j * np.outer(psi, ks))
        u = (phases @ self.u_hat).real
        v = (phases @ self.v_hat).real
        return psi + u, self.action_offset + v

    def conjugacy_residual(self, twist_map: TwistMap, n_points: int = 512) -> float:
        """sup |map(circle(psi)) - circle(psi + 2 pi omega)| on a fresh grid."""
        psi = TWO_PI * np.arange(n_points) / n_points
        phi, act = self.evaluate(psi)
        phi_next, act_next = twist_map.advance(phi, act)
        phi_target, act_target = self.evaluate(psi + TWO_PI * self.omega)
        return float(max(np.max(np.abs(phi_next - phi_target)),
                         np.max(np.abs(act_next - act_target))))

    def harmonic_tail_mass(self) -> float:
        n = len(self.u_hat)
        ks = np.abs(np.fft.fftfreq(n, d=1.0 / n))
        outer = ks > n // 4
        return float(np.sum(np.abs(self.u_hat[outer]))
                     + np.sum(np.abs(self.v_hat[outer])))


def _denominators(n: int, omega: float, certificate) -> np.ndarray:
    ks = np.fft.fftfreq(n, d=1.0 / n)
    denom = np.exp(2j * np.pi * ks * omega) - 1.0
    for idx, k in enumerate(ks):
        if k == 0:
            continue
        gap = abs(denom[idx])
        if certificate is not None:
            c, nu = certificate
            floor = 0.25 * small_denominator_bound(c, nu, int(k))
            if gap < floor:
                raise ResonantFrequency(
                    f"harmonic {int(k)}: denominator {gap:.3e} below the "
                    f"certified floor {floor:.3e}")
        elif gap < 1e-13:
            raise ResonantFrequency(
                f"harmonic {int(k)}: denominator {gap:.3e} at noise level")
    return denom


def _newton_at_resolution(eps, omega, n_grid, u, v, act_offset, tol,
                          iteration_budget, certificate):
    """Newton sweeps at fixed grid size; returns updated state and status.

    The linearized invariance equation is solved in the frame spanned by
    the tangent of the current approximate circle and its symplectic
    normal, where it becomes upper triangular: two cohomology solves per
    sweep, each dividing harmonic k by e^{2 pi i k omega} - 1.  The free
    average of the normal component is fixed by the twist (the average
    shear), and the tangent average is pinned to zero to remove the
    reparametrization freedom.
    """
    psi = TWO_PI * np.arange(n_grid) / n_grid
    denom = _denominators(n_grid, omega, certificate)
    ks = np.fft.fftfreq(n_grid, d=1.0 / n_grid)
    rotate = np.exp(2j * np.pi * ks * omega)

    def shift(w):
        return np.fft.ifft(np.fft.fft(w) * rotate).real

    def derivative(w):
        return np.fft.ifft(np.fft.fft(w) * (1j * ks)).real

    def solve_l(w):
        # L xi = w with L xi = xi(. + 2 pi omega) - xi, zero-mean data
        hat = np.fft.fft(w)
        hat[0] = 0.0
        out = np.zeros_like(hat)
        out[1:] = hat[1:] / denom[1:]
        return np.fft.ifft(out).real

    used = 0
    best = np.inf
    stall = 0
    while used < iteration_budget:
        used += 1
        phi = psi + u
        act = act_offset + v
        kick = act + eps * np.sin(phi)
        # invariance defect: image of the point at psi minus the point
        # at psi + 2 pi omega
        e_phi = (phi + kick) - (psi + TWO_PI * omega + shift(u))
        e_act = kick - (act_offset + shift(v))
        res = max(np.max(np.abs(e_phi)), np.max(np.abs(e_act)))
        if not np.isfinite(res):
            return u, v, act_offset, res, used, False
        if res < tol:
            return u, v, act_offset, res, used, True
        if res < 0.5 * best:
            best, stall = res, 0
        else:
            stall += 1
            if stall >= 6:
                return u, v, act_offset, res, used, False

        # frame: tangent T and symplectic normal N = J^{-1} T / |T|^2
        t1 = 1.0 + derivative(u)
        t2 = derivative(v)
        norm2 = t1 * t1 + t2 * t2
        n1 = t2 / norm2
        n2 = -t1 / norm2
        frame = np.empty((n_grid, 2, 2))
        frame[:, 0, 0], frame[:, 0, 1] = t1, n1
        frame[:, 1, 0], frame[:, 1, 1] = t2, n2
        frame_ahead = np.empty_like(frame)
        for i in range(2):
            for j in range(2):
                frame_ahead[:, i, j] = shift(frame[:, i, j])

        c = eps * np.cos(phi)
        df = np.empty((n_grid, 2, 2))
        df[:, 0, 0], df[:, 0, 1] = 1.0 + c, 1.0
        df[:, 1, 0], df[:, 1, 1] = c, 1.0

        inv_ahead = np.linalg.inv(frame_ahead)
        lam = inv_ahead @ df @ frame
        shear = lam[:, 0, 1]
        mean_shear = shear.mean()
        if abs(mean_shear) < 1e-12:
            return u, v, act_offset, res, used, False  # twist degenerate

        err = np.stack([e_phi, e_act], axis=1)[:, :, None]
        eta = -(inv_ahead @ err)[:, :, 0]

        # rows of (Lambda xi - xi o S = eta): xi2 solves -L xi2 = eta2 up
        # to its free mean, which the twist fixes through row 1
        xi2_osc = -solve_l(eta[:, 1] - eta[:, 1].mean())
        xi2_mean = (eta[:, 0].mean() - (shear * xi2_osc).mean()) / mean_shear
        xi2 = xi2_osc + xi2_mean
        xi1 = solve_l(shear * xi2 - eta[:, 0])

        du = frame[:, 0, 0] * xi1 + frame[:, 0, 1] * xi2
        dv = frame[:, 1, 0] * xi1 + frame[:, 1, 1] * xi2
        u = u + du
        v = v + dv
        act_offset += v.mean()
        v = v - v.mean()
    return u, v, act_offset, best, used, False


def invariant_circle(twist_map: TwistMap, omega: float, tol: float = 1e-12,
                     n_harmonics: int = 64, max_iterations: int = 80,
                     certificate: tuple[float, float] | None = None,
                     warm_start: InvariantCircle | None = None) -> InvariantCircle:
    """Newton solve for the circle of rotation number omega.

    Harmonics double (at most twice) when Newton stalls or the spectral
    tail stays above tol/10.  A solve that still fails after that and
    after the full iteration budget is flagged as suspected breakup
    rather than raised, since non-existence is exactly the interesting
    outcome near the critical coupling.
    """
    if twist_map.kernel_family != "standard":
        raise ValueError("circle solver is implemented for the standard family")
    eps = float(twist_map.params["eps"])

    n_grid = 2 * n_harmonics
    u = np.zeros(n_grid)
    v = np.zeros(n_grid)
    act_offset = TWO_PI * omega
    if warm_start is not None:
        phi, act = warm_start.evaluate(TWO_PI * np.arange(n_grid) / n_grid)
        u = phi - TWO_PI * np.arange(n_grid) / n_grid
        v = act - warm_start.action_offset
        act_offset = warm_start.action_offset

    budget = max_iterations
    iterations_total = 0
    doublings = 0
    while True:
        u, v, act_offset, res, used, ok = _newton_at_resolution(
            eps, omega, n_grid, u, v, act_offset, tol, budget - iterations_total,
            certificate)
        iterations_total += used

        if ok and abs(u.mean()) > 1e-15:
            # re-origin the parameter so u is zero-mean; shifting both
            # u and v by the same delta keeps the conjugacy exact
            delta = -u.mean()
            ks = np.fft.fftfreq(n_grid, d=1.0 / n_grid)
            mover = np.exp(1j * ks * delta)
            u = np.fft.ifft(np.fft.fft(u) * mover).real + delta
            v = np.fft.ifft(np.fft.fft(v) * mover).real

        circle = InvariantCircle(
            omega=float(omega), eps=eps,
            u_hat=np.fft.fft(u) / n_grid, v_hat=np.fft.fft(v) / n_grid,
            action_offset=float(act_offset), residual=float(res),
            newton_iterations=iterations_total, n_harmonics=n_grid // 2,
            converged=bool(ok), breakup_suspected=False)

        needs_more = (not ok) or circle.harmonic_tail_mass() > tol / 10.0
        if ok and not needs_more:
            return circle
        if doublings >= 2 or iterations_total >= budget:
            circle.breakup_suspected = not ok
            return circle
        # refine: double the harmonic range, keep the current state
        doublings += 1
        u = np.fft.ifft(np.concatenate([
            np.fft.fft(u)[:n_grid // 2],
            np.zeros(n_grid),
            np.fft.fft(u)[n_grid // 2:]]) ).real * 2.0
        v = np.fft.ifft(np.concatenate([
            np.fft.fft(v)[:n_grid // 2],
            np.zeros(n_grid),
            np.fft.fft(v)[n_grid // 2:]]) ).real * 2.0
        n_grid *= 2


@dataclass
class BreakupBracket:
    omega: float
    eps_survives: float
    eps_fails: float
    history: list[tuple[float, bool]]

    @property
    def width(self) -> float:
        return self.eps_fails - self.eps_survives


def breakup_scan(omega: float, eps_low: float, eps_high: float,
                 bracket_width: float = 0.05, tol: float = 1e-10,
                 n_harmonics: int = 64, certificate=None,
                 continuation_step: float = 0.025) -> BreakupBracket:
    """Bisect for the coupling where the omega-circle stops existing.

    Each probe is reached by continuation in eps from the last surviving
    solution, so Newton always starts near a genuine circle.  Raises
    NoBreakupTransition when the whole range survives or none of it does.
    """
    from .maps import standard_map

    history: list[tuple[float, bool]] = []
    good_state: dict[float, InvariantCircle] = {}

    def survives(eps_target: float) -> bool:
        below = [e for e in good_state if e < eps_target]
        eps_from = max(below) if below else None
        warm = good_state.get(eps_from) if eps_from is not None else None
        eps_curr = eps_from if eps_from is not None else eps_target
        while True:
            if eps_from is not None:
                eps_curr = min(eps_curr + continuation_step, eps_target)
            circle = invariant_circle(standard_map(eps_curr), omega, tol=tol,
                                      n_harmonics=n_harmonics,
                                      certificate=certificate, warm_start=warm)
            if not circle.converged:
                history.append((eps_target, False))
                return False
            good_state[eps_curr] = circle
            warm = circle
            if eps_curr >= eps_target:
                history.append((eps_target, True))
                return True

    if not survives(eps_low):
        raise NoBreakupTransition(f"no circle found at the lower end {eps_low}")
    if survives(eps_high):
        raise NoBreakupTransition(f"circle survives the whole range up to {eps_high}")

    lo, hi = eps_low, eps_high
    while hi - lo > bracket_width:
        mid = 0.5 * (lo + hi)
        if survives(mid):
            lo = mid
        else:
            hi = mid
    return BreakupBracket(omega=float(omega), eps_survives=lo, eps_fails=hi,
                          history=history)
