"""Area-preserving cylinder maps and orbit records."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels

TWO_PI = 2.0 * np.pi


@dataclass
class TwistMap:
    """One step of a cylinder map (phi, I) -> (phi', I').

    advance acts on arrays of lifted angles and actions and returns the
    new pair; angles live on the real line so rotation numbers can be
    read off without unwrapping.  kernel_family tags maps whose hot
    loops have dedicated kernels.
    """

    advance: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]
    name: str = "twist-map"
    params: dict = field(default_factory=dict)
    frequency: Callable[[np.ndarray], np.ndarray] | None = None
    twist_bound: float | None = None
    intersection_property: bool = True
    kernel_family: str | None = None

    def area_preserving_defect(self, n_samples: int = 64, seed: int = 7,
                               fd_step: float = 1e-6) -> float:
        """Max |det D(map) - 1| over sample points, by central differences."""
        rng = np.random.default_rng(seed)
        phis = rng.uniform(0.0, TWO_PI, n_samples)
        acts = rng.uniform(-2.0, 2.0, n_samples)
        worst = 0.0
        for p, a in zip(phis, acts):
            jac = np.empty((2, 2))
            for col, (dp, da) in enumerate(((fd_step, 0.0), (0.0, fd_step))):
                pp, ap = self.advance(np.array([p + dp]), np.array([a + da]))
                pm, am = self.advance(np.array([p - dp]), np.array([a - da]))
                jac[0, col] = (pp[0] - pm[0]) / (2 * fd_step)
                jac[1, col] = (ap[0] - am[0]) / (2 * fd_step)
            worst = max(worst, abs(float(np.linalg.det(jac)) - 1.0))
        return worst

    def is_area_preserving(self, tol: float = 1e-8) -> bool:
        return self.area_preserving_defect() < tol


def standard_map(eps: float) -> TwistMap:
    """phi' = phi + I + eps sin(phi), I' = I + eps sin(phi)."""

    def advance(phi, act):
        phi = np.asarray(phi, dtype=float)
        act = np.asarray(act, dtype=float)
        kick = act + eps * np.sin(phi)
        return phi + kick, kick

    return TwistMap(
        advance=advance,
        name="standard-map",
        params={"eps": float(eps)},
        frequency=lambda act: np.asarray(act) / TWO_PI,
        twist_bound=1.0,
        intersection_property=True,
        kernel_family="standard",
    )


@dataclass
class OrbitRecord:
    seed: tuple[float, float]
    lifted_angles: np.ndarray
    actions: np.ndarray
    rotation_number: float
    rotation_error: float


def rotation_number_estimate(lifted_angles: np.ndarray) -> tuple[float, float]:
    """(phi_n - phi_0) / (2 pi n), with an error bar from partial spans.

    The error combines the full-span estimate against the half-span and
    second-half estimates; for a conjugacy to rotation all three agree
    up to O(1/n).
    """
    phi = np.asarray(lifted_angles, dtype=float)
    n = len(phi) - 1
    if n < 2:
        raise ValueError("need at least two iterates")
    full = (phi[n] - phi[0]) / (TWO_PI * n)
    half = (phi[n // 2] - phi[0]) / (TWO_PI * (n // 2))
    second_half = (phi[n] - phi[n // 2]) / (TWO_PI * (n - n // 2))
    err = max(abs(full - half), abs(full - second_half))
    return float(full), float(err)


def iterate_orbit(twist_map: TwistMap, phi0: float, act0: float,
                  n_steps: int) -> OrbitRecord:
    """Run one seed for n_steps and estimate its rotation number."""
    if twist_map.kernel_family == "standard":
        phis, acts = kernels.orbit_batch(np.array([phi0]), np.array([act0]),
                                         twist_map.params["eps"], n_steps)
        lifted, actions = phis[:, 0], acts[:, 0]
    else:
        lifted = np.empty(n_steps + 1)
        actions = np.empty(n_steps + 1)
        p, a = np.array([phi0], dtype=float), np.array([act0], dtype=float)
        lifted[0], actions[0] = p[0], a[0]
        for j in range(n_steps):
            p, a = twist_map.advance(p, a)
            lifted[j + 1], actions[j + 1] = p[0], a[0]
    rot, err = rotation_number_estimate(lifted)
    return OrbitRecord(seed=(float(phi0), float(act0)), lifted_angles=lifted,
                       actions=actions, rotation_number=rot, rotation_error=err)


def phase_portrait(twist_map: TwistMap, n_seeds: int = 40, n_steps: int = 400,
                   action_range: tuple[float, float] = (0.0, TWO_PI),
                   rng_seed: int = 0) -> np.ndarray:
    """Point cloud (phi mod 2pi, I, seed_index) stacked over seeds."""
    rng = np.random.default_rng(rng_seed)
    phi0 = rng.uniform(0.0, TWO_PI, n_seeds)
    act0 = np.linspace(action_range[0], action_range[1], n_seeds) \
        + rng.uniform(-0.01, 0.01, n_seeds)
    if twist_map.kernel_family == "standard":
        phis, acts = kernels.orbit_batch(phi0, act0, twist_map.params["eps"],
                                         n_steps)
    else:
        phis = np.empty((n_steps + 1, n_seeds))
        acts = np.empty((n_steps + 1, n_seeds))
        p, a = phi0.copy(), act0.copy()
        phis[0], acts[0] = p, a
        for j in range(n_steps):
            p, a = twist_map.advance(p, a)
            phis[j + 1], acts[j + 1] = p, a
    rows = []
    for s in range(n_seeds):
        block = np.column_stack([
            np.mod(phis[:, s], TWO_PI),
            acts[:, s],
            np.full(n_steps + 1, s, dtype=float),
        ])
        rows.append(block)
    return np.vstack(rows)
