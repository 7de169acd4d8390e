"""Effective irrationality constants for algebraic numbers.

For a root omega of an integer polynomial P of degree d with no
rational roots, any p/q inside the window [omega - delta, omega + delta]
satisfies |P(p/q)| >= 1/q^d while |P(p/q)| <= M |omega - p/q| with M a
bound on |P'| over the window; fractions outside the window are at
least delta away.  Hence omega has type (C, d - 1) with
C = min(delta, 1/M), and delta is chosen to balance the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .confrac import WORKING_DPS


@dataclass
class LiouvilleBound:
    coefficients: list[int]
    root: float
    constant: float
    exponent: float
    delta: float
    derivative_bound: float


def _poly_eval(coeffs, x):
    acc = mpmath.mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _derivative_sup(coeffs, radius) -> float:
    """Upper bound for |P'| on |x| <= radius via coefficient sums."""
    total = mpmath.mpf(0)
    for i, c in enumerate(coeffs):
        if i >= 1:
            total += abs(c) * i * radius ** (i - 1)
    return total


def _has_rational_root(coeffs: list[int]) -> bool:
    lead = coeffs[-1]
    const = coeffs[0]
    if const == 0:
        return True  # x = 0
    for p in range(1, abs(const) + 1):
        if abs(const) % p:
            continue
        for q in range(1, abs(lead) + 1):
            if abs(lead) % q:
                continue
            for sign in (1, -1):
                cand = Fraction(sign * p, q)
                val = sum(Fraction(c) * cand ** i for i, c in enumerate(coeffs))
                if val == 0:
                    return True
    return False


def liouville_constant(coeffs: list[int], bracket: tuple[float, float]
                       ) -> LiouvilleBound:
    """Type constant for the unique root of the polynomial in bracket.

    coeffs are integer coefficients, low order first.  The bracket must
    isolate one simple root and P must have no rational roots at all
    (otherwise the lower bound on |P(p/q)| fails).
    """
    coeffs = [int(c) for c in coeffs]
    degree = len(coeffs) - 1
    while degree > 0 and coeffs[degree] == 0:
        degree -= 1
    coeffs = coeffs[:degree + 1]
    if degree < 2:
        raise ValueError("need degree at least 2; rationals have no such bound")
    if _has_rational_root(coeffs):
        raise ValueError("polynomial has a rational root; the bound breaks down")

    lo, hi = (mpmath.mpf(bracket[0]), mpmath.mpf(bracket[1]))
    with mpmath.workdps(WORKING_DPS):
        f_lo, f_hi = _poly_eval(coeffs, lo), _poly_eval(coeffs, hi)
        if f_lo == 0 or f_hi == 0 or mpmath.sign(f_lo) == mpmath.sign(f_hi):
            raise ValueError("bracket does not isolate a sign change")
        a, b = lo, hi
        for _ in range(200):
            mid = (a + b) / 2
            fm = _poly_eval(coeffs, mid)
            if fm == 0:
                a = b = mid
                break
            if mpmath.sign(fm) == mpmath.sign(_poly_eval(coeffs, a)):
                a = mid
            else:
                b = mid
        root = (a + b) / 2

        def balance(delta):
            radius = abs(root) + delta
            return delta * _derivative_sup(coeffs, radius) - 1

        # delta * M(delta) is increasing from 0 to infinity; the optimum
        # C = min(delta, 1/M(delta)) sits where the two branches cross
        d_lo, d_hi = mpmath.mpf("1e-8"), mpmath.mpf(1)
        while balance(d_hi) < 0:
            d_hi *= 2
        for _ in range(100):
            mid = (d_lo + d_hi) / 2
            if balance(mid) < 0:
                d_lo = mid
            else:
                d_hi = mid
        delta = (d_lo + d_hi) / 2

        m_bound = _derivative_sup(coeffs, abs(root) + delta)
        constant = min(delta, 1 / m_bound)

    return LiouvilleBound(
        coefficients=coeffs,
        root=float(root),
        constant=float(constant),
        exponent=float(degree - 1),
        delta=float(delta),
        derivative_bound=float(m_bound),
    )
