"""Continued fractions, type certification, effective constants."""

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perturblab.diophantine import (
    GOLDEN_MEAN,
    certify_type,
    continued_fraction,
    excluded_measure_bound,
    liouville_constant,
    small_denominator_bound,
    unit_circle_gap,
)

SQRT2 = math.sqrt(2.0)


class TestContinuedFraction:
    def test_golden_mean_has_all_ones(self):
        cf = continued_fraction(GOLDEN_MEAN, n_terms=20)
        assert cf.quotients[0] == 0
        assert all(a == 1 for a in cf.quotients[1:])

    def test_golden_denominators_grow_like_fibonacci(self):
        cf = continued_fraction(GOLDEN_MEAN, n_terms=20)
        qs = [q for _, q in cf.convergents]
        for i in range(2, len(qs)):
            assert qs[i] == qs[i - 1] + qs[i - 2]

    def test_sqrt2_quotients(self):
        cf = continued_fraction(SQRT2, n_terms=15)
        assert cf.quotients[0] == 1
        assert all(a == 2 for a in cf.quotients[1:])

    def test_convergent_gap_bound(self):
        # |omega - p_i/q_i| < 1/(q_i q_{i+1})
        for omega in (GOLDEN_MEAN, SQRT2, math.e - 2.0):
            cf = continued_fraction(omega, n_terms=18)
            with mpmath.workdps(40):
                om = mpmath.mpf(omega)
                for i in range(len(cf.convergents) - 1):
                    p, q = cf.convergents[i]
                    q_next = cf.convergents[i + 1][1]
                    assert abs(om - mpmath.mpf(p) / q) < mpmath.mpf(1) / (q * q_next)

    def test_rational_input_terminates_and_reconstructs(self):
        cf = continued_fraction(Fraction(355, 113))
        assert cf.terminated
        p, q = cf.convergents[-1]
        assert Fraction(p, q) == Fraction(355, 113)


class TestCertification:
    def test_sqrt2_certified(self):
        res = certify_type(SQRT2, 0.29, 1.0, q_max=10_000)
        assert res.passed
        # by the Pell relation the margin at a convergent is 1/(sqrt2 + p/q),
        # smallest at p/q = 3/2: the worst margin is 6 - 4 sqrt(2) at q = 2
        assert res.worst_q == 2
        assert res.worst_margin == pytest.approx(6.0 - 4.0 * SQRT2, abs=1e-12)

    def test_golden_mean_certified(self):
        res = certify_type(GOLDEN_MEAN, 0.38, 1.0, q_max=10_000)
        assert res.passed
        assert res.worst_margin == pytest.approx(1.0 - GOLDEN_MEAN, abs=1e-3)
        assert res.worst_q == 1

    def test_rational_fails_with_zero_margin(self):
        res = certify_type(Fraction(1, 3), 0.1, 1.0, q_max=100)
        assert not res.passed
        assert res.worst_margin == 0.0
        assert res.worst_q == 3

    def test_fast_route_agrees_with_exhaustive_scan(self):
        for omega in (SQRT2, GOLDEN_MEAN, math.e - 2.0):
            fast = certify_type(omega, 0.2, 1.0, q_max=2000, method="convergents")
            full = certify_type(omega, 0.2, 1.0, q_max=2000, method="exhaustive")
            assert fast.worst_q == full.worst_q
            assert fast.worst_margin == pytest.approx(full.worst_margin, rel=1e-12)

    def test_certificate_monotone_in_constant_and_exponent(self):
        base = certify_type(GOLDEN_MEAN, 0.38, 1.0, q_max=1000)
        assert base.passed
        weaker_c = certify_type(GOLDEN_MEAN, 0.19, 1.0, q_max=1000)
        assert weaker_c.passed
        weaker_nu = certify_type(GOLDEN_MEAN, 0.38, 1.5, q_max=1000)
        assert weaker_nu.passed
        assert weaker_nu.worst_margin >= base.worst_margin - 1e-12


class TestSmallDenominators:
    @given(st.integers(1, 10_000),
           st.floats(0.01, 0.99, allow_nan=False, allow_infinity=False))
    @settings(max_examples=50, deadline=None)
    def test_gap_equals_two_sine(self, q, omega):
        gap = unit_circle_gap(omega, q)
        with mpmath.workdps(35):
            expected = float(2 * abs(mpmath.sin(mpmath.pi * q * mpmath.mpf(omega))))
        assert gap == pytest.approx(expected, abs=1e-12)

    def test_certified_bound_holds_for_sqrt2(self):
        C, nu = 0.29, 1.0
        assert certify_type(SQRT2, C, nu, q_max=1000).passed
        for q in range(1, 1001):
            assert unit_circle_gap(SQRT2, q) >= small_denominator_bound(C, nu, q)

    def test_bound_formula(self):
        assert small_denominator_bound(0.29, 1.0, 10) == pytest.approx(0.116)
        with pytest.raises(ValueError):
            small_denominator_bound(0.29, 1.0, 0)

    def test_excluded_measure_example(self):
        assert excluded_measure_bound(0.1, 2.0) == pytest.approx(
            0.1 * math.pi ** 2 / 6.0, abs=1e-12)
        with pytest.raises(ValueError):
            excluded_measure_bound(0.1, 1.0)


class TestLiouville:
    def test_sqrt2_constant(self):
        bound = liouville_constant([-2, 0, 1], (1.2, 1.6))
        assert bound.exponent == 1.0
        assert bound.root == pytest.approx(SQRT2, abs=1e-12)
        # balance point delta = 1 - sqrt(2)/2
        assert bound.constant == pytest.approx(1.0 - SQRT2 / 2.0, abs=2e-3)

    def test_golden_constant(self):
        bound = liouville_constant([-1, 1, 1], (0.5, 0.7))
        assert bound.root == pytest.approx(GOLDEN_MEAN, abs=1e-12)
        # balance of delta against 2(omega + delta) + 1
        expected = (math.sqrt(13.0) - math.sqrt(5.0)) / 4.0
        assert bound.constant == pytest.approx(expected, abs=2e-3)

    def test_cube_root_certifies_at_its_own_constant(self):
        bound = liouville_constant([-2, 0, 0, 1], (1.0, 2.0))
        assert bound.exponent == 2.0
        res = certify_type(2.0 ** (1.0 / 3.0), bound.constant, bound.exponent,
                           q_max=2000)
        assert res.passed

    def test_rational_root_rejected(self):
        with pytest.raises(ValueError):
            liouville_constant([-1, 0, 1], (0.5, 1.5))  # x^2 - 1

    def test_bad_bracket_rejected(self):
        with pytest.raises(ValueError):
            liouville_constant([-2, 0, 1], (2.0, 3.0))
