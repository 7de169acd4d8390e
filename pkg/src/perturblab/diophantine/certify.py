"""Certification of Diophantine type and small-denominator bounds.

A number omega has type (C, nu) up to q_max when

    q^(1+nu) |omega - p/q| >= C    for all 1 <= q <= q_max and all p.

The margin of a denominator q is q^nu * dist(q omega, Z); the
certificate passes when the worst margin stays at or above C.  The
fast route checks only convergent and intermediate-fraction
denominators, where best approximations live; the exhaustive route
scans every q and exists to validate the fast one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath

from .confrac import WORKING_DPS, continued_fraction


@dataclass
class CertificationResult:
    omega: float
    constant: float
    exponent: float
    q_max: int
    passed: bool
    worst_margin: float
    worst_q: int
    worst_p: int
    method: str

    def __str__(self):
        verdict = "certified" if self.passed else "failed"
        return (f"type ({self.constant}, {self.exponent}) {verdict} up to "
                f"q={self.q_max}: worst margin {self.worst_margin:.6g} at "
                f"q={self.worst_q}")


def _margin_at(omega_mp, q: int, nu: float) -> tuple[float, int]:
    qw = q * omega_mp
    p = int(mpmath.nint(qw))
    dist = abs(qw - p)
    return float(mpmath.mpf(q) ** nu * dist), p


def _candidate_denominators(omega, q_max: int) -> list[int]:
    cf = continued_fraction(omega, n_terms=64)
    qs = {1}
    quotients = cf.quotients
    convs = cf.convergents
    for i in range(1, len(convs)):
        q_prev = convs[i - 1][1]
        q_back = convs[i - 2][1] if i >= 2 else 0
        a_next = quotients[i]
        # intermediate fractions m*q_{i-1} + q_{i-2}, m = 1..a_i
        for m in range(1, a_next + 1):
            q = m * q_prev + q_back
            if q <= q_max:
                qs.add(q)
            else:
                break
        if q_prev > q_max:
            break
    qs.update(q for _, q in convs if q <= q_max)
    return sorted(qs)


def certify_type(omega, constant: float, exponent: float, q_max: int = 10_000,
                 method: str = "auto") -> CertificationResult:
    """Check the type inequality for all denominators up to q_max.

    method: "convergents" checks only best-approximation candidates,
    "exhaustive" scans every q, "auto" picks exhaustive for small q_max.
    """
    if method == "auto":
        method = "exhaustive" if q_max <= 20_000 else "convergents"

    exact = isinstance(omega, Rational)
    with mpmath.workdps(WORKING_DPS):
        if exact:
            om = Fraction(omega)
            omega_mp = mpmath.mpf(om.numerator) / om.denominator
        else:
            omega_mp = mpmath.mpf(omega)

        if method == "exhaustive":
            qs = range(1, q_max + 1)
        elif method == "convergents":
            qs = _candidate_denominators(omega, q_max)
        else:
            raise ValueError(f"unknown method {method!r}")

        worst = math.inf
        worst_q, worst_p = 0, 0
        for q in qs:
            margin, p = _margin_at(omega_mp, q, exponent)
            if margin < worst:
                worst, worst_q, worst_p = margin, q, p
                if worst == 0.0:
                    break

    return CertificationResult(
        omega=float(omega_mp), constant=float(constant), exponent=float(exponent),
        q_max=int(q_max), passed=bool(worst >= constant),
        worst_margin=float(worst), worst_q=worst_q, worst_p=worst_p,
        method=method)


def unit_circle_gap(omega, q: int) -> float:
    """|exp(2 pi i q omega) - 1|, evaluated at extended precision."""
    with mpmath.workdps(WORKING_DPS):
        omega_mp = mpmath.mpf(omega)
        return float(2 * abs(mpmath.sin(mpmath.pi * q * omega_mp)))


def small_denominator_bound(constant: float, exponent: float, q: int) -> float:
    """Lower bound 4 C / |q|^nu on |exp(2 pi i q omega) - 1|.

    Chain: |e^{2 pi i q w} - 1| = 2|sin(pi q w)| >= 4 dist(q w, Z)
    and dist(q w, Z) >= C / q^nu from the type inequality.
    """
    if q == 0:
        raise ValueError("q must be nonzero")
    return 4.0 * constant / abs(q) ** exponent


def excluded_measure_bound(constant: float, exponent: float) -> float:
    """Bound C zeta(nu) on the measure of numbers in a unit interval
    failing the (C, nu) type condition; finite only for nu > 1."""
    if exponent <= 1:
        raise ValueError("the excluded-measure bound needs exponent > 1")
    return float(constant * mpmath.zeta(exponent))
