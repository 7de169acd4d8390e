"""Continued fractions and convergents at extended precision.

Floating input is expanded at roughly 31 significant digits so that
partial quotients stay trustworthy well past the denominators any
certification run needs.  Exact rational input uses the Euclidean
algorithm and terminates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath

WORKING_DPS = 31


@dataclass
class ContinuedFraction:
    """Partial quotients a_i and convergents p_i/q_i of a real number."""

    value: float
    quotients: list[int]
    convergents: list[tuple[int, int]]
    terminated: bool

    def convergent_fractions(self) -> list[Fraction]:
        return [Fraction(p, q) for p, q in self.convergents]


def _euclid_quotients(x: Fraction, n_terms: int) -> tuple[list[int], bool]:
    num, den = x.numerator, x.denominator
    out = []
    while den != 0 and len(out) < n_terms:
        a, rem = divmod(num, den)
        out.append(int(a))
        num, den = den, rem
    return out, den == 0 or (num % den == 0 if den else True)


def _mpf_quotients(x, n_terms: int) -> tuple[list[int], bool]:
    out = []
    terminated = False
    with mpmath.workdps(WORKING_DPS):
        val = mpmath.mpf(x)
        for _ in range(n_terms):
            a = int(mpmath.floor(val))
            out.append(a)
            frac = val - a
            # once the remainder is at noise level the expansion is over
            if frac < mpmath.mpf(10) ** (-(WORKING_DPS - 2)):
                terminated = True
                break
            val = 1 / frac
    return out, terminated


def continued_fraction(omega, n_terms: int = 40) -> ContinuedFraction:
    """Expand omega as [a0; a1, a2, ...] with convergents from the
    standard recurrence p_i = a_i p_{i-1} + p_{i-2}."""
    if isinstance(omega, Rational):
        quotients, terminated = _euclid_quotients(Fraction(omega), n_terms)
    elif isinstance(omega, str):
        with mpmath.workdps(WORKING_DPS):
            quotients, terminated = _mpf_quotients(mpmath.mpf(omega), n_terms)
    else:
        quotients, terminated = _mpf_quotients(float(omega), n_terms)

    convergents = []
    p_prev, q_prev = 1, 0
    p_curr, q_curr = quotients[0] if quotients else 0, 1
    if quotients:
        convergents.append((p_curr, q_curr))
    for a in quotients[1:]:
        p_curr, p_prev = a * p_curr + p_prev, p_curr
        q_curr, q_prev = a * q_curr + q_prev, q_curr
        convergents.append((p_curr, q_curr))

    return ContinuedFraction(
        value=float(omega) if not isinstance(omega, str) else float(mpmath.mpf(omega)),
        quotients=quotients,
        convergents=convergents,
        terminated=terminated,
    )


GOLDEN_MEAN = float((5 ** 0.5 - 1) / 2)


def golden_mean_mpf():
    with mpmath.workdps(WORKING_DPS):
        return (mpmath.sqrt(5) - 1) / 2
