"""Rational approximation: continued fractions, type certification,
and effective constants for algebraic numbers."""

from .certify import (
    CertificationResult,
    certify_type,
    excluded_measure_bound,
    small_denominator_bound,
    unit_circle_gap,
)
from .confrac import (
    GOLDEN_MEAN,
    ContinuedFraction,
    continued_fraction,
    golden_mean_mpf,
)
from .liouville import LiouvilleBound, liouville_constant

__all__ = [
    "GOLDEN_MEAN",
    "CertificationResult",
    "ContinuedFraction",
    "LiouvilleBound",
    "certify_type",
    "continued_fraction",
    "excluded_measure_bound",
    "golden_mean_mpf",
    "liouville_constant",
    "small_denominator_bound",
    "unit_circle_gap",
]
