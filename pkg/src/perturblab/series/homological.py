"""First-order generator solves for Hamiltonians with linear action part.

For H0 = Omega . I the equation {H0, W} + H1 = K diagonalizes over
Fourier modes: the mode k of W picks up the small denominator i k.Omega.
Modes whose denominator falls below the resonance tolerance (always
including k = 0) cannot be removed and stay in K.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from ._rational import RationalComplex
from .fourier_taylor import FourierTaylorSeries


@dataclass
class HomologicalSolution:
    generator: FourierTaylorSeries
    resonant: FourierTaylorSeries
    resonant_keys: list[tuple[tuple[int, ...], tuple[int, ...]]]
    tol: float


def solve_homological(h1: FourierTaylorSeries, omega, tol: float | None = None
                      ) -> HomologicalSolution:
    """Solve {Omega . I, W} + H1 = K for W, collecting resonant terms in K.

    omega is the constant frequency vector, one entry per angle.  In
    exact mode (rational omega and coefficients) the resonance test is
    exact equality k.Omega == 0 and the division is exact.
    """
    omega = list(omega)
    if len(omega) != h1.n_angles:
        raise ValueError("frequency vector length must match the number of angles")

    exact = h1.exact and all(isinstance(w, Rational) for w in omega)
    if exact:
        omega = [Fraction(w) for w in omega]
    else:
        h1 = h1.to_float()
        omega = [float(w) for w in omega]

    if tol is None:
        norm = float(sum(abs(float(w)) for w in omega)) or 1.0
        tol = 1e-8 * norm

    gen = h1.zero_like()
    res = h1.zero_like()
    keys = []
    for (k, m), c in h1.terms.items():
        kdot = sum(ki * wi for ki, wi in zip(k, omega))
        resonant = (kdot == 0) if exact else (abs(kdot) < tol)
        if resonant:
            res._set(k, m, c)
            keys.append((k, m))
        else:
            denom = RationalComplex.of(0, kdot) if exact else 1j * kdot
            gen._set(k, m, c / denom)
    keys.sort(key=lambda km: (sum(abs(x) for x in km[0]), km[0], km[1]))
    return HomologicalSolution(generator=gen, resonant=res, resonant_keys=keys,
                               tol=float(tol))


def average_hamiltonian(h: FourierTaylorSeries, fast=None) -> FourierTaylorSeries:
    """Keep only terms constant in the fast angles (default: all angles)."""
    return h.angle_average(fast)
