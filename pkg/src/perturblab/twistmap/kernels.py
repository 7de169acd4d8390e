"""Hot iteration kernels with a compiled path and a numpy path.

The compiled path uses numba when it is importable and the environment
variable PERTURBLAB_NUMBA is not set to 0/false/off/numpy; otherwise
the numpy implementations run.  Both paths are importable directly
(orbit_batch_numba, orbit_batch_numpy, ...) so they can be compared
and benchmarked against each other; the unsuffixed names dispatch to
the active backend.
"""

from __future__ import annotations

import math
import os

import numpy as np

_env = os.environ.get("PERTURBLAB_NUMBA", "1").strip().lower()
_WANT_NUMBA = _env not in {"0", "false", "no", "off", "numpy"}

try:
    if not _WANT_NUMBA:
        raise ImportError("compiled path disabled by PERTURBLAB_NUMBA")
    from numba import njit, prange
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

ACTIVE_BACKEND = "numba" if HAVE_NUMBA else "numpy"


def backend_name() -> str:
    return ACTIVE_BACKEND


# ----------------------------------------------------------------------
# batched orbits of phi' = phi + I', I' = I + eps sin(phi)
# angles are accumulated on the real line (no wrapping)


def orbit_batch_numpy(phi0: np.ndarray, act0: np.ndarray, eps: float,
                      n_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized over seeds, sequential in the iterate index."""
    phi = np.asarray(phi0, dtype=np.float64).copy()
    act = np.asarray(act0, dtype=np.float64).copy()
    m = phi.shape[0]
    phis = np.empty((n_steps + 1, m))
    acts = np.empty((n_steps + 1, m))
    phis[0] = phi
    acts[0] = act
    for j in range(n_steps):
        act = act + eps * np.sin(phi)
        phi = phi + act
        phis[j + 1] = phi
        acts[j + 1] = act
    return phis, acts


if HAVE_NUMBA:

    @njit(parallel=True, cache=True)
    def _orbit_batch_nb(phi0, act0, eps, n_steps):
        # row per seed so each thread streams a contiguous strip
        m = phi0.shape[0]
        phis = np.empty((m, n_steps + 1))
        acts = np.empty((m, n_steps + 1))
        for s in prange(m):
            phi = phi0[s]
            act = act0[s]
            phis[s, 0] = phi
            acts[s, 0] = act
            for j in range(n_steps):
                act = act + eps * math.sin(phi)
                phi = phi + act
                phis[s, j + 1] = phi
                acts[s, j + 1] = act
        return phis, acts

    def orbit_batch_numba(phi0, act0, eps, n_steps):
        phi0 = np.ascontiguousarray(phi0, dtype=np.float64)
        act0 = np.ascontiguousarray(act0, dtype=np.float64)
        phis, acts = _orbit_batch_nb(phi0, act0, float(eps), int(n_steps))
        # transpose to (iterate, seed) to match the numpy path; the
        # views keep each seed's history contiguous in memory
        return phis.T, acts.T

else:
    orbit_batch_numba = None


def orbit_batch(phi0, act0, eps, n_steps):
    if HAVE_NUMBA:
        return orbit_batch_numba(phi0, act0, eps, n_steps)
    return orbit_batch_numpy(phi0, act0, eps, n_steps)


# ----------------------------------------------------------------------
# q-fold composition with its Jacobian, one seed


def power_jacobian_numpy(phi: float, act: float, eps: float, q: int):
    """Apply the map q times, accumulating the 2x2 tangent matrix."""
    j00 = j11 = 1.0
    j01 = j10 = 0.0
    for _ in range(q):
        c = eps * math.cos(phi)
        # tangent of (phi, I) -> (phi + I + eps sin phi, I + eps sin phi)
        a00, a01 = 1.0 + c, 1.0
        a10, a11 = c, 1.0
        n00 = a00 * j00 + a01 * j10
        n01 = a00 * j01 + a01 * j11
        n10 = a10 * j00 + a11 * j10
        n11 = a10 * j01 + a11 * j11
        j00, j01, j10, j11 = n00, n01, n10, n11
        act = act + eps * math.sin(phi)
        phi = phi + act
    return phi, act, np.array([[j00, j01], [j10, j11]])


if HAVE_NUMBA:

    @njit(cache=True)
    def _power_jac_nb(phi, act, eps, q):
        j00 = 1.0
        j01 = 0.0
        j10 = 0.0
        j11 = 1.0
        for _ in range(q):
            c = eps * math.cos(phi)
            a00 = 1.0 + c
            a10 = c
            n00 = a00 * j00 + j10
            n01 = a00 * j01 + j11
            n10 = a10 * j00 + j10
            n11 = a10 * j01 + j11
            j00, j01, j10, j11 = n00, n01, n10, n11
            act = act + eps * math.sin(phi)
            phi = phi + act
        return phi, act, j00, j01, j10, j11

    def power_jacobian_numba(phi, act, eps, q):
        p, a, j00, j01, j10, j11 = _power_jac_nb(float(phi), float(act),
                                                 float(eps), int(q))
        return p, a, np.array([[j00, j01], [j10, j11]])

else:
    power_jacobian_numba = None


def power_jacobian(phi, act, eps, q):
    if HAVE_NUMBA:
        return power_jacobian_numba(phi, act, eps, q)
    return power_jacobian_numpy(phi, act, eps, q)
