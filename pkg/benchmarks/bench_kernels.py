"""Timing comparison of the compiled and numpy orbit kernels.

Run as a script:  python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time

import numpy as np

from perturblab.twistmap.kernels import (
    HAVE_NUMBA,
    orbit_batch_numba,
    orbit_batch_numpy,
)


def _time(fun, *args, repeats: int = 3) -> float:
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fun(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    rng = np.random.default_rng(11)
    cases = [
        (256, 2_000),
        (1024, 5_000),
        (4096, 10_000),
    ]
    eps = 0.7

    print(f"{'seeds':>8} {'steps':>8} {'numpy [s]':>12} "
          f"{'numba [s]':>12} {'speedup':>9}")
    for n_seeds, n_steps in cases:
        phi0 = rng.uniform(0.0, 2 * np.pi, n_seeds)
        act0 = rng.uniform(0.0, 2 * np.pi, n_seeds)
        t_np = _time(orbit_batch_numpy, phi0, act0, eps, n_steps)
        if HAVE_NUMBA:
            orbit_batch_numba(phi0, act0, eps, 10)  # compile outside timing
            t_nb = _time(orbit_batch_numba, phi0, act0, eps, n_steps)
            print(f"{n_seeds:>8} {n_steps:>8} {t_np:>12.4f} "
                  f"{t_nb:>12.4f} {t_np / t_nb:>8.1f}x")
        else:
            print(f"{n_seeds:>8} {n_steps:>8} {t_np:>12.4f} "
                  f"{'n/a':>12} {'n/a':>9}")

    if HAVE_NUMBA:
        phi0 = rng.uniform(0.0, 2 * np.pi, 512)
        act0 = rng.uniform(0.0, 2 * np.pi, 512)
        a = orbit_batch_numpy(phi0, act0, eps, 500)
        b = orbit_batch_numba(phi0, act0, eps, 500)
        drift = max(float(np.max(np.abs(a[0] - b[0]))),
                    float(np.max(np.abs(a[1] - b[1]))))
        print(f"\nbackend agreement over 500 steps: max drift {drift:.3e}")
    else:
        print("\nnumba unavailable; compiled path skipped")


if __name__ == "__main__":
    main()
