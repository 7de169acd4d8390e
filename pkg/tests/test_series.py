"""Series algebra: exact identities, canonical transforms, map normal forms."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from perturblab.odeflow import VectorField
from perturblab.series import (
    FourierTaylorSeries,
    Poly2,
    RationalComplex,
    action_monomial,
    averaged_field,
    averaging_error_scaling,
    birkhoff_normal_form,
    complex_coordinates_map,
    conjugacy_defect,
    conjugate_swap,
    cos_angle,
    flow_polynomial_jet,
    inverse_near_identity,
    lie_triangle_invert,
    lie_triangle_transform,
    poisson_bracket,
    sin_angle,
    solve_homological,
    substitute,
)


def series_from(termlist, truncation=12):
    """Build an exact series over one angle-action pair from (k, m, p, q)."""
    terms = {}
    for k, m, p, q in termlist:
        key = ((k,), (m,))
        c = terms.get(key, RationalComplex.of(0))
        terms[key] = c + RationalComplex.of(Fraction(p, q))
    return FourierTaylorSeries(1, 1, terms, truncation_order=truncation, exact=True)


term_st = st.tuples(st.integers(-2, 2), st.integers(0, 3),
                    st.integers(-4, 4), st.integers(1, 5))
series_st = st.lists(term_st, min_size=0, max_size=4).map(series_from)


class TestRationalComplex:
    def test_field_operations(self):
        a = RationalComplex.of(Fraction(2, 3), Fraction(-1, 2))
        b = RationalComplex.of(Fraction(1, 5), Fraction(3, 7))
        assert ((a * b) / b) == a
        assert (a + b - b) == a
        assert (a * a.conjugate()).im == 0

    def test_refuses_floats(self):
        with pytest.raises(TypeError):
            RationalComplex.coerce(0.1 + 0.2j)


class TestFourierTaylorSeries:
    def test_evaluate_matches_trig(self):
        c = cos_angle()
        s = sin_angle()
        phi = 0.7
        assert abs(c.evaluate([phi], [1.0]) - math.cos(phi)) < 1e-14
        assert abs(s.evaluate([phi], [1.0]) - math.sin(phi)) < 1e-14
        prod = c * s
        assert abs(prod.evaluate([phi], [1.0]) - math.cos(phi) * math.sin(phi)) < 1e-14

    def test_product_prunes_small_terms(self):
        tiny = FourierTaylorSeries(1, 1, {(((1,), (0,))): 1e-20})
        assert len(tiny.terms) == 0

    def test_truncation_drops_high_action_powers(self):
        s = action_monomial((3,), 1.0, truncation_order=4)
        p = s * s
        assert len(p.terms) == 0  # degree 6 exceeds the cap

    def test_reality_check(self):
        c = cos_angle()
        assert c.is_real()
        skew = FourierTaylorSeries(1, 1, {((1,), (0,)): 1.0})
        assert not skew.is_real()
        assert skew.reality_defect() == pytest.approx(1.0)

    def test_conjugate_of_real_series_is_itself(self):
        c = cos_angle() + sin_angle()
        assert c.conjugate_series().max_abs_diff(c) < 1e-15

    def test_angle_average_keeps_constant_modes(self):
        h = cos_angle() + action_monomial((2,), 3.0)
        avg = h.angle_average()
        assert avg.coeff((0,), (2,)) == pytest.approx(3.0)
        assert avg.coeff((1,), (0,)) == 0

    def test_mixed_mode_coerces_to_float(self):
        exact = action_monomial((1,), Fraction(1, 3), exact=True)
        approx = action_monomial((1,), 0.5)
        total = exact + approx
        assert not total.exact
        assert total.coeff((0,), (1,)) == pytest.approx(1 / 3 + 0.5)

    def test_json_roundtrip_and_term_order(self):
        s = FourierTaylorSeries(2, 1, {
            ((0, 1), (2,)): 0.5 + 0.1j,
            ((1, 0), (0,)): 1.0,
            ((0, 0), (1,)): 2.0,
            ((-1, 0), (0,)): 1.0,
        })
        doc = s.to_json_dict()
        ks = [tuple(t["k"]) for t in doc["terms"]]
        assert ks == [(0, 0), (-1, 0), (0, 1), (1, 0)]  # by (sum|k|, k, m)
        back = FourierTaylorSeries.from_json(s.to_json())
        assert back.max_abs_diff(s) < 1e-15


class TestPoissonBracket:
    def test_canonical_pair(self):
        # {I cos(phi), I sin(phi)} = -I
        f = cos_angle(action_power=(1,), exact=True)
        g = sin_angle(action_power=(1,), exact=True)
        br = poisson_bracket(f, g)
        assert br == action_monomial((1,), -1, exact=True)

    @given(series_st, series_st)
    @settings(max_examples=25, deadline=None)
    def test_antisymmetry(self, f, g):
        lhs = poisson_bracket(f, g)
        rhs = poisson_bracket(g, f)
        assert (lhs + rhs).prune(0.0).terms == {}

    @given(series_st, series_st, series_st)
    @settings(max_examples=25, deadline=None)
    def test_bilinearity(self, f, g, h):
        a, b = Fraction(2, 3), Fraction(-5, 7)
        lhs = poisson_bracket(f.scale(a) + g.scale(b), h)
        rhs = poisson_bracket(f, h).scale(a) + poisson_bracket(g, h).scale(b)
        assert lhs == rhs

    @given(series_st, series_st, series_st)
    @settings(max_examples=25, deadline=None)
    def test_leibniz(self, f, g, h):
        lhs = poisson_bracket(f, g * h)
        rhs = poisson_bracket(f, g) * h + g * poisson_bracket(f, h)
        assert lhs == rhs

    @given(series_st, series_st, series_st)
    @settings(max_examples=25, deadline=None)
    def test_jacobi(self, f, g, h):
        total = (poisson_bracket(f, poisson_bracket(g, h))
                 + poisson_bracket(g, poisson_bracket(h, f))
                 + poisson_bracket(h, poisson_bracket(f, g)))
        assert total.prune(0.0).terms == {}

    def test_real_series_have_real_bracket(self):
        f = cos_angle(action_power=(1,))
        g = sin_angle(action_power=(2,))
        assert poisson_bracket(f, g).is_real(1e-13)


class TestLieTriangle:
    def setup_method(self):
        self.I = action_monomial((1,), 1, exact=True)
        self.zero = self.I.zero_like()

    def test_pendulum_like_example(self):
        # input I + eps I cos(phi), generator I sin(phi): the order-1 term
        # cancels and the order-2 output is exactly -I
        h = [self.I, cos_angle(action_power=(1,), exact=True), self.zero]
        w = [sin_angle(action_power=(1,), exact=True), self.zero]
        tri = lie_triangle_transform(h, w)
        assert tri.output[0] == self.I
        assert tri.output[1].terms == {}
        assert tri.output[2] == self.I.scale(-1)
        poly = tri.polynomial_coefficients()
        assert poly[2] == self.I.scale(Fraction(-1, 2))

    @given(st.lists(series_st, min_size=3, max_size=3),
           st.lists(series_st, min_size=2, max_size=2))
    @settings(max_examples=15, deadline=None)
    def test_first_and_second_order_identities(self, h, w):
        tri = lie_triangle_transform(h, w)
        k1 = h[1] + poisson_bracket(h[0], w[0])
        assert tri.output[1] == k1
        k2 = (h[2] + poisson_bracket(h[1], w[0]).scale(2)
              + poisson_bracket(h[0], w[1])
              + poisson_bracket(poisson_bracket(h[0], w[0]), w[0]))
        assert tri.output[2] == k2

    @given(st.lists(series_st, min_size=4, max_size=4),
           st.lists(series_st, min_size=3, max_size=3))
    @settings(max_examples=10, deadline=None)
    def test_invert_recovers_input_exactly(self, h, w):
        out = lie_triangle_transform(h, w).output
        back = lie_triangle_invert(out, w)
        assert len(back) == len(h)
        for a, b in zip(back, h):
            assert a == b

    def test_invert_float_mode(self):
        h = [self.I.to_float(),
             cos_angle(action_power=(1,)),
             (sin_angle(action_power=(2,))) * 0.3]
        w = [sin_angle(action_power=(1,)) * 0.7, cos_angle(action_power=(2,)) * 0.2]
        out = lie_triangle_transform(h, w).output
        back = lie_triangle_invert(out, w)
        for a, b in zip(back, h):
            assert a.max_abs_diff(b) < 1e-10


class TestHomological:
    def test_single_angle_example(self):
        # frequency 1, oscillation cos(phi): generator is sin(phi)
        h1 = cos_angle(exact=True)
        sol = solve_homological(h1, [Fraction(1)])
        assert sol.generator == sin_angle(exact=True)
        assert sol.resonant.terms == {}
        assert sol.resonant_keys == []

    def test_constant_term_is_resonant(self):
        h1 = cos_angle(exact=True) + action_monomial((1,), Fraction(3, 2), exact=True)
        sol = solve_homological(h1, [Fraction(1)])
        assert (((0,), (1,))) in dict.fromkeys(sol.resonant_keys)
        assert sol.resonant == action_monomial((1,), Fraction(3, 2), exact=True)

    @given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3),
                              st.integers(0, 2), st.integers(-4, 4), st.integers(1, 5)),
                    min_size=1, max_size=5))
    @settings(max_examples=25, deadline=None)
    def test_generator_satisfies_the_equation_exactly(self, termlist):
        terms = {}
        for k1, k2, m, p, q in termlist:
            key = ((k1, k2), (m, 0))
            c = terms.get(key, RationalComplex.of(0))
            terms[key] = c + RationalComplex.of(Fraction(p, q))
        h1 = FourierTaylorSeries(2, 2, terms, truncation_order=8, exact=True)
        omega = [Fraction(1), Fraction(3, 2)]
        sol = solve_homological(h1, omega)
        for (k, m), c in h1.terms.items():
            kdot = k[0] * omega[0] + k[1] * omega[1]
            if kdot == 0:
                assert sol.resonant.coeff(k, m) == c
            else:
                w = sol.generator.coeff(k, m)
                assert w * RationalComplex.of(0, kdot) == c

    def test_average_keeps_only_selected_fast_angle(self):
        from perturblab.series import average_hamiltonian
        h = FourierTaylorSeries(2, 2, {
            ((1, 0), (0, 0)): 1.0,
            ((0, 2), (0, 0)): 2.0,
            ((0, 0), (1, 0)): 3.0,
        })
        avg_all = average_hamiltonian(h)
        assert list(avg_all.terms) == [((0, 0), (1, 0))]
        avg_first = average_hamiltonian(h, fast=[0])
        assert ((0, 2), (0, 0)) in avg_first.terms


class TestPoly2:
    def test_inverse_composes_to_identity(self):
        phi = Poly2.variable(0, 5) + Poly2({(2, 0): 0.3, (1, 1): 0.1 - 0.2j}, 5)
        psi = inverse_near_identity(phi)
        comp = substitute(phi, psi, conjugate_swap(psi))
        ident = Poly2.variable(0, 5)
        assert comp.max_abs_diff(ident) < 1e-12

    def test_jet_of_linear_flow_matches_matrix_exponential(self):
        A = np.array([[0.3, 1.2], [-0.9, -0.1]])
        T = 1.7

        def rhs(state, t):
            x, v = state
            return [x * A[0, 0] + v * A[0, 1], x * A[1, 0] + v * A[1, 1]]

        x0 = Poly2.variable(0, 2)
        v0 = Poly2.variable(1, 2)
        xT, vT = flow_polynomial_jet(rhs, [x0, v0], 0.0, T, 400)
        M = expm(A * T)
        assert abs(xT.coeff(1, 0) - M[0, 0]) < 1e-8
        assert abs(xT.coeff(0, 1) - M[0, 1]) < 1e-8
        assert abs(vT.coeff(1, 0) - M[1, 0]) < 1e-8
        assert abs(vT.coeff(0, 1) - M[1, 1]) < 1e-8


class TestBirkhoffNormalForm:
    theta = 0.3819660112501051  # irrational rotation, far from low resonances

    def lam(self):
        return cmath.exp(2j * math.pi * self.theta)

    def test_single_term_removal_coefficient(self):
        g = 0.37 - 0.11j
        zmap = Poly2({(1, 0): self.lam(), (2, 0): g}, 3)
        nf = birkhoff_normal_form(zmap, order=1)
        lam = self.lam()
        expected = g * cmath.exp(-2j * math.pi * self.theta) / (lam - 1.0)
        assert abs(nf.transformation.coeff(2, 0) - expected) < 1e-12
        assert abs(nf.normal_form.coeff(2, 0)) < 1e-12

    def test_conjugacy_reproduces_input_map(self):
        zmap = Poly2({
            (1, 0): self.lam(),
            (2, 0): 0.3, (1, 1): 0.1 - 0.2j, (0, 2): 0.05,
            (3, 0): 0.02, (2, 1): 0.01 + 0.03j, (1, 2): -0.04, (0, 3): 0.015,
        }, 5)
        nf = birkhoff_normal_form(zmap, order=2)
        assert conjugacy_defect(zmap, nf) < 1e-10

    def test_strong_resonance_is_reported(self):
        lam = cmath.exp(2j * math.pi / 3)
        zmap = Poly2({(1, 0): lam, (0, 2): 0.2}, 3)
        nf = birkhoff_normal_form(zmap, order=1)
        assert nf.strong_resonance == 3
        # the zbar^2 small denominator vanishes at this rotation number
        assert any(key == (0, 2) for key, _ in nf.resonant_terms)

    def test_nonresonant_rotation_not_flagged(self):
        zmap = Poly2({(1, 0): self.lam(), (2, 0): 0.1}, 3)
        nf = birkhoff_normal_form(zmap, order=1)
        assert nf.strong_resonance is None


W0 = 0.6


@pytest.fixture(scope="module")
def zmap():
    """Time-2pi map of xddot = -w0^2 x + x^2 - x^3/2 at w0 = 0.6."""
    def rhs(state, t):
        x, v = state
        return [v, x * (-W0 * W0) + x * x - (x * x * x) * 0.5]

    x0 = Poly2.variable(0, 3)
    v0 = Poly2.variable(1, 3)
    xT, vT = flow_polynomial_jet(rhs, [x0, v0], 0.0, 2.0 * math.pi, 2000)
    return complex_coordinates_map(xT, vT, W0, -1j)


class TestOscillatorStroboscopicMap:
    w0 = W0

    def test_linear_part_is_the_expected_rotation(self, zmap):
        lam = cmath.exp(2j * math.pi * self.w0)
        assert abs(zmap.coeff(1, 0) - lam) < 1e-7
        assert abs(zmap.coeff(0, 1)) < 1e-7

    def test_twist_coefficient_matches_flow_computation(self, zmap):
        nf = birkhoff_normal_form(zmap, order=1)
        assert abs(nf.theta - self.w0) < 1e-8
        # conservative system: the resonant coefficient is purely rotational
        assert nf.twist_defect < 1e-6
        # independent route: third-order flow normal form gives the twist
        # 2 pi (3/(16 w0^3) - 5/(12 w0^5))
        expected = 2.0 * math.pi * (3.0 / (16.0 * self.w0 ** 3)
                                    - 5.0 / (12.0 * self.w0 ** 5))
        c1 = nf.coefficients[0]
        measured = (cmath.exp(-2j * math.pi * nf.theta) * c1).imag
        assert abs(measured - expected) < 1e-3


@pytest.fixture(scope="module")
def field():
    return VectorField(
        dimension=1,
        rhs=lambda x, t, p: (-x + math.sin(t) ** 2) * x,
        period=math.pi,
        name="logistic-forced")


class TestAveraging:
    """xdot = eps(-x + sin^2 t)x, averaged field y(1/2 - y)."""

    def test_averaged_field_value(self, field):
        system = averaged_field(field, math.pi)
        y = 0.7
        assert system.gbar([y])[0] == pytest.approx(y * (0.5 - y), abs=1e-12)

    def test_corrector_is_zero_mean(self, field):
        system = averaged_field(field, math.pi)
        w_full = system.corrector([0.8], math.pi)
        assert abs(w_full[0]) < 1e-12
        # oscillating part is y sin^2 t - y/2, primitive -y sin(2t)/4
        w = system.corrector([0.8], 0.3)
        assert w[0] == pytest.approx(-0.8 * math.sin(0.6) / 4.0, abs=1e-10)

    def test_guide_error_scales_linearly(self, field):
        errors, slope = averaging_error_scaling(field, math.pi, [0.8],
                                                [0.1, 0.03], tol=1e-10)
        assert errors[0] > errors[1]
        assert 0.75 < slope < 1.25
