"""Planar equilibria, center manifolds, fold/Hopf coefficients, connections."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from perturblab.bifurcation import (
    HOMOCLINIC_SLOPE,
    NonintegrableSingularityError,
    antisaddle_eigenvalues,
    center_manifold_coeffs,
    center_manifold_residual,
    classify_equilibrium,
    cusp_region,
    derivative_family,
    heteroclinic_splitting,
    homoclinic_locus,
    homoclinic_return_profile,
    hopf_coefficient,
    radial_decay_rate,
    saddle_eigenvalues,
    saddle_node_H,
    takens_bogdanov_diagram,
    takens_bogdanov_field,
    tb_region_grid,
)


class TestClassifyEquilibrium:
    def test_stable_node(self):
        cls = classify_equilibrium(np.diag([-1.0, -2.0]))
        assert cls.label == "stable node"
        assert cls.hyperbolic

    def test_center(self):
        cls = classify_equilibrium([[0.0, -1.0], [1.0, 0.0]])
        assert cls.label == "center"
        assert not cls.hyperbolic

    def test_unstable_improper_node(self):
        cls = classify_equilibrium([[1.0, 1.0], [0.0, 1.0]])
        assert cls.label == "unstable improper node"

    def test_saddle_focus_degenerate(self):
        assert classify_equilibrium([[2.0, 0.0], [0.0, -1.0]]).label == "saddle"
        assert classify_equilibrium([[0.1, -2.0], [2.0, 0.1]]).label \
            == "unstable focus"
        assert classify_equilibrium(np.diag([-3.0, -3.0])).label \
            == "stable degenerate node"

    def test_nonhyperbolic_labels(self):
        cls = classify_equilibrium(np.diag([0.0, -1.0]))
        assert cls.label == "elementary saddle-node candidate"
        assert not cls.hyperbolic
        assert classify_equilibrium([[0.0, 1.0], [0.0, 0.0]]).label == "elliptic"
        assert classify_equilibrium(np.zeros((2, 2))).label == "elliptic"

    def test_similarity_invariance(self):
        rng = np.random.default_rng(7)
        mats = [np.diag([-1.0, -2.0]), np.array([[0.0, -1.0], [1.0, 0.0]]),
                np.array([[2.0, 0.0], [0.0, -1.0]]),
                np.array([[0.1, -2.0], [2.0, 0.1]]),
                np.array([[0.0, 0.0], [0.0, -1.0]])]
        for jac in mats:
            base = classify_equilibrium(jac).label
            for _ in range(6):
                while True:
                    s = rng.normal(size=(2, 2))
                    if np.linalg.cond(s) < 1e3 and abs(np.linalg.det(s)) > 1e-3:
                        break
                conj = s @ jac @ np.linalg.inv(s)
                assert classify_equilibrium(conj).label == base

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            classify_equilibrium(np.eye(3))


class TestCuspRegion:
    def test_critical_line_point(self):
        reg = cusp_region(3.0, 2.0)   # 4*27 = 27*4 exactly
        assert reg.label == "critical line"
        assert reg.count == 2
        assert sorted(reg.stability) == ["semi-stable", "stable"]
        semi = reg.equilibria[reg.stability.index("semi-stable")]
        assert semi == pytest.approx(-1.0, abs=1e-9)

    def test_three_equilibria(self):
        reg = cusp_region(1.0, 0.0)
        assert reg.label == "three equilibria"
        assert np.allclose(sorted(reg.equilibria), [-1.0, 0.0, 1.0], atol=1e-12)
        assert reg.stability == ("stable", "unstable", "stable")

    def test_single_equilibrium(self):
        reg = cusp_region(-1.0, 0.0)
        assert reg.label == "single equilibrium"
        assert reg.count == 1
        assert reg.equilibria[0] == pytest.approx(0.0, abs=1e-12)
        assert reg.stability == ("stable",)

    def test_cusp_point_and_mirror(self):
        assert cusp_region(0.0, 0.0).label == "cusp point"
        plus = cusp_region(3.0, 2.0)
        minus = cusp_region(3.0, -2.0)
        assert minus.label == "critical line"
        assert np.allclose(sorted(minus.equilibria),
                           sorted(-np.array(plus.equilibria)), atol=1e-9)


class TestCenterManifold:
    def test_exact_rational_graph(self):
        # dx1/dt = x1 x2, dx2/dt = -x2 + x1^2
        g1 = {(1, 1): Fraction(1)}
        g2 = {(2, 0): Fraction(1)}
        cm = center_manifold_coeffs(g1, g2, a=Fraction(-1), order=4)
        assert cm.h_coefficients == {2: Fraction(1), 4: Fraction(-2)}
        assert cm.reduced_coefficients == {3: Fraction(1), 5: Fraction(-2)}
        assert not cm.elementary_saddle_node
        assert center_manifold_residual(cm, g1, g2) == {}

    def test_callable_inputs_match_exact(self):
        cm = center_manifold_coeffs(lambda x1, x2: x1 * x2,
                                    lambda x1, x2: x1 ** 2, a=-1.0, order=4)
        assert cm.h_coefficients[2] == pytest.approx(1.0, abs=1e-8)
        assert cm.h_coefficients[4] == pytest.approx(-2.0, abs=1e-7)
        assert cm.h(0.1) == pytest.approx(0.01 - 2e-4, abs=1e-7)

    def test_zero_transverse_forcing_gives_flat_graph(self):
        cm = center_manifold_coeffs({(2, 0): 1.0}, {}, a=-2.0, order=5)
        assert cm.h_coefficients == {}
        assert cm.reduced_coefficients == {2: 1.0}
        assert cm.elementary_saddle_node
        assert cm.c == 1.0

    def test_input_validation(self):
        with pytest.raises(ValueError):
            center_manifold_coeffs({(2, 0): 1.0}, {}, a=0)
        with pytest.raises(ValueError):
            center_manifold_coeffs({(1, 0): 1.0}, {}, a=-1.0)
        with pytest.raises(ValueError):
            center_manifold_coeffs(lambda a, b: a * b, lambda a, b: a ** 2,
                                   a=-1.0, order=8)

    def test_residual_vanishes_for_generic_rational_system(self):
        g1 = {(2, 0): Fraction(1, 2), (1, 1): Fraction(-1, 3),
              (0, 2): Fraction(2)}
        g2 = {(2, 0): Fraction(3), (1, 1): Fraction(1, 5),
              (0, 2): Fraction(-1)}
        cm = center_manifold_coeffs(g1, g2, a=Fraction(-2), order=6)
        assert center_manifold_residual(cm, g1, g2) == {}
        assert cm.elementary_saddle_node


class TestSaddleNodeH:
    def test_fold_family(self):
        scan = saddle_node_H(lambda x, lam: lam + x ** 2, (-0.5, 0.5))
        assert scan.classification == "saddle-node"
        assert np.allclose(scan.H, scan.lambdas, atol=1e-7)
        assert scan.c == pytest.approx(1.0, rel=1e-5)
        assert all(c == 0 for c, lam in zip(scan.counts, scan.lambdas)
                   if lam > 1e-6)
        assert all(c == 2 for c, lam in zip(scan.counts, scan.lambdas)
                   if lam < -1e-6)

    def test_transcritical_families(self):
        scan = saddle_node_H(lambda x, lam: lam ** 2 - x ** 2, (-0.5, 0.5))
        assert scan.classification == "transcritical"
        assert np.allclose(scan.H, -scan.lambdas ** 2, atol=1e-7)

        scan2 = saddle_node_H(lambda x, lam: lam * x - x ** 2, (-0.5, 0.5))
        assert scan2.classification == "transcritical"
        assert np.allclose(scan2.H, -scan2.lambdas ** 2 / 4.0, atol=1e-7)
        assert np.allclose(scan2.extremum_path, scan2.lambdas / 2.0, atol=1e-7)

    def test_degenerate_and_unpinned_families_rejected(self):
        with pytest.raises(ValueError):
            saddle_node_H(lambda x, lam: lam + x ** 3, (-0.5, 0.5))
        with pytest.raises(ValueError):
            saddle_node_H(lambda x, lam: x + lam, (-0.5, 0.5))

    def test_sign_of_H_predicts_root_count(self):
        def family(x, lam):
            return lam + x ** 2 + 0.3 * x ** 3

        scan = saddle_node_H(family, (-0.2, 0.2), n_samples=50)
        xs = np.linspace(-0.5, 0.5, 4001)
        for lam, predicted in zip(scan.lambdas, scan.counts):
            vals = family(xs, lam)
            roots = int(np.sum(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0))
            assert roots == predicted

    def test_pitchfork_through_derivative_family(self):
        dF = derivative_family(lambda x, lam: lam * x - x ** 3)
        scan = saddle_node_H(dF, (-0.3, 0.3))
        assert np.allclose(scan.H, -scan.lambdas / 3.0, atol=1e-5)


W0 = 0.6


def oscillator_rhs(x1, x2):
    """Conservative oscillator with quadratic and cubic stiffness terms."""
    return (x2, -W0 * W0 * x1 + x1 ** 2 - 0.5 * x1 ** 3)


GENERIC_G = {(2, 0): 0.4 + 0.3j, (1, 1): -0.2 + 0.5j, (0, 2): 0.3 - 0.1j,
             (3, 0): 0.1 - 0.2j, (2, 1): -0.5 + 0.25j, (1, 2): 0.15 + 0.1j,
             (0, 3): -0.05 + 0.12j}
GENERIC_W0 = 1.3
GENERIC_C21 = -0.6076923077 - 0.2012820513j


def generic_complex_field(x1, x2):
    z = x1 + 1j * x2
    w = 1j * GENERIC_W0 * z
    for (n, m), g in GENERIC_G.items():
        w += g * z ** n * np.conj(z) ** m
    return (w.real, w.imag)


class TestHopfCoefficient:
    def test_pure_resonant_term_passes_through(self):
        res = hopf_coefficient({(2, 1): -0.5 + 0.25j}, omega0=1.0)
        assert res.c21 == pytest.approx(-0.5 + 0.25j)
        assert res.stability == "supercritical"

    def test_quadratic_feedback_assembly(self):
        res = hopf_coefficient(GENERIC_G, omega0=GENERIC_W0)
        assert res.c21 == pytest.approx(GENERIC_C21, rel=1e-9)
        assert res.stability == "supercritical"

    def test_callable_extraction_recovers_coefficients(self):
        res = hopf_coefficient(generic_complex_field)
        assert res.omega0 == pytest.approx(GENERIC_W0, rel=1e-9)
        assert res.c21 == pytest.approx(GENERIC_C21, rel=1e-6)

    def test_decay_rate_matches_normal_form(self):
        slope = radial_decay_rate(generic_complex_field)
        assert slope == pytest.approx(-2.0 * GENERIC_C21.real, rel=0.02)

    def test_conservative_oscillator_is_degenerate(self):
        res = hopf_coefficient(oscillator_rhs)
        assert res.omega0 == pytest.approx(W0, rel=1e-9)
        assert abs(res.c21.real) < 1e-8
        expected_im = 3.0 / (16.0 * W0) - 5.0 / (12.0 * W0 ** 3)
        assert res.c21.imag == pytest.approx(expected_im, rel=1e-6)
        assert res.stability == "degenerate"

    def test_agrees_with_map_normal_form_twist(self):
        # same oscillator through completely different machinery: the
        # stroboscopic-map route normalizes the time-2pi polynomial jet,
        # the flow route fits Taylor coefficients at the equilibrium
        from perturblab.series import (Poly2, birkhoff_normal_form,
                                       complex_coordinates_map,
                                       flow_polynomial_jet)

        def rhs(state, t):
            x, v = state
            return [v, x * (-W0 * W0) + x * x - (x * x * x) * 0.5]

        x0 = Poly2.variable(0, 3)
        v0 = Poly2.variable(1, 3)
        xT, vT = flow_polynomial_jet(rhs, [x0, v0], 0.0, 2.0 * math.pi, 2000)
        nf = birkhoff_normal_form(complex_coordinates_map(xT, vT, W0, -1j),
                                  order=1)
        twist_map = (cmath.exp(-2j * math.pi * nf.theta)
                     * nf.coefficients[0]).imag
        res = hopf_coefficient(oscillator_rhs)
        twist_flow = 2.0 * math.pi * res.c21.imag / W0 ** 2
        assert twist_map == pytest.approx(twist_flow, abs=1e-3)
        assert nf.twist_defect < 1e-6 and abs(res.c21.real) < 1e-8

    def test_subcritical_at_double_zero_hopf_line(self):
        lam1 = -0.04
        s = math.sqrt(-lam1)
        field = takens_bogdanov_field(lam1, s)

        def shifted(u1, u2):
            v = field.f(np.array([-s + u1, u2]), 0.0)
            return (v[0], v[1])

        res = hopf_coefficient(shifted)
        assert res.omega0 == pytest.approx(math.sqrt(2.0 * s), rel=1e-6)
        assert res.c21.real > 0
        assert res.stability == "subcritical"

    def test_input_validation(self):
        with pytest.raises(ValueError):
            hopf_coefficient(GENERIC_G)              # omega0 missing
        with pytest.raises(ValueError):
            hopf_coefficient({(2, 1): 1.0}, omega0=0.0)
        with pytest.raises(ValueError):
            hopf_coefficient({(4, 0): 1.0}, omega0=1.0)
        with pytest.raises(ValueError):
            hopf_coefficient(lambda a, b: (b, a + 0.2 * b))   # not a center
        with pytest.raises(ValueError):
            hopf_coefficient(lambda a, b: (b + 1.0, -a))      # no equilibrium


def worked_f1(y):
    return y * (1.0 - y)


def worked_f22(y):
    return 2.0 * y - 1.0


@pytest.fixture(scope="module")
def worked():
    return heteroclinic_splitting(worked_f1, worked_f22, lambda y: 1.0)


class TestHeteroclinicSplitting:
    def test_closed_form_displacement(self, worked):
        for x in (0.1, 0.3, 0.5, 0.7, 0.85):
            assert worked.h1(x) == pytest.approx(1.0 / (1.0 - x), rel=1e-8)
        assert worked.h1(0.0) == 0.0

    def test_divergent_endpoint_with_finite_mass(self, worked):
        assert worked.endpoint_value == math.inf
        assert worked.melnikov == pytest.approx(4.0, rel=1e-8)
        assert worked.far_eigenvalue == pytest.approx(1.0)
        assert abs(worked.left_exponent) < 0.05
        assert worked.route_disagreement < 1e-8
        assert worked.quadrature_error < 1e-6

    def test_frozen_generic_values(self):
        res = heteroclinic_splitting(
            lambda y: y * (1.0 - y) * (1.0 + 0.3 * y),
            lambda y: -1.0 + 0.7 * y + 0.5 * y ** 2,
            lambda y: (0.5 + 0.2 * y) * math.sin(math.pi * y) + 0.1)
        assert res.h1(0.3) == pytest.approx(0.395482974847, rel=1e-8)
        assert res.h1(0.6) == pytest.approx(0.767180071327, rel=1e-8)
        assert res.h1(0.85) == pytest.approx(1.16941863224, rel=1e-8)
        assert res.route_disagreement < 1e-8

    def test_linearity_in_the_perturbation(self):
        g_a = lambda y: 1.0
        g_b = lambda y: math.sin(math.pi * y) + 0.1
        g_ab = lambda y: 2.0 * g_a(y) + 3.0 * g_b(y)
        r_a = heteroclinic_splitting(worked_f1, worked_f22, g_a)
        r_b = heteroclinic_splitting(worked_f1, worked_f22, g_b)
        r_ab = heteroclinic_splitting(worked_f1, worked_f22, g_ab)
        for x in (0.3, 0.7):
            combo = 2.0 * r_a.h1(x) + 3.0 * r_b.h1(x)
            assert abs(r_ab.h1(x) - combo) <= 1e-10 * max(1.0, abs(combo))

    def test_nonintegrable_left_endpoint(self):
        with pytest.raises(NonintegrableSingularityError) as err:
            heteroclinic_splitting(worked_f1, lambda y: 0.0, lambda y: 1.0)
        assert err.value.exponent == pytest.approx(-1.0, abs=0.02)
        assert err.value.endpoint == 0.0

    def test_zero_perturbation(self):
        res = heteroclinic_splitting(worked_f1, worked_f22, lambda y: 0.0)
        assert res.h1(0.5) == 0.0
        assert res.endpoint_value == 0.0 and res.melnikov == 0.0

    def test_attracting_far_eigenvalue_has_finite_limit(self):
        res = heteroclinic_splitting(worked_f1, lambda y: -1.0, lambda y: 1.0)
        assert res.far_eigenvalue == pytest.approx(-1.0)
        assert res.endpoint_value == pytest.approx(1.0, abs=1e-6)

    def test_interior_zero_of_f1_rejected(self):
        with pytest.raises(ValueError):
            heteroclinic_splitting(lambda y: y * (1.0 - y) * (0.5 - y),
                                   worked_f22, lambda y: 1.0)


class TestHomoclinicReturnProfile:
    def test_contraction_dominated_loop(self):
        prof = homoclinic_return_profile(-2.0, 1.0, 0.1, [1e-2, 1e-3, 1e-4])
        assert prof.ratios[-1] == pytest.approx(1e-3, rel=1e-12)
        assert prof.limit == 0.0 and prof.limit_class == "vanishing"
        assert prof.orbit_side == +1
        assert prof.admits_periodic_orbit(0.05)
        assert prof.loop_outcome(-0.05) == "no invariant set"
        assert prof.loop_outcome(0.0) == "homoclinic loop"

    def test_expansion_dominated_loop(self):
        prof = homoclinic_return_profile(-1.0, 2.0, 0.1, [1e-4])
        assert prof.ratios[0] == pytest.approx(math.sqrt(1000.0), rel=1e-12)
        assert prof.limit == math.inf and prof.limit_class == "diverging"
        assert prof.orbit_side == -1
        assert prof.admits_periodic_orbit(-0.05)
        assert prof.splitting_functional(0.05) < 0

    def test_validation(self):
        with pytest.raises(ValueError):
            homoclinic_return_profile(-1.0, 1.0, 0.1, [1e-3])
        with pytest.raises(ValueError):
            homoclinic_return_profile(1.0, 2.0, 0.1, [1e-3])
        with pytest.raises(ValueError):
            homoclinic_return_profile(-2.0, 1.0, 0.1, [0.2])


LOCUS_L1 = -0.04
LOCUS_FROZEN = 0.14405102


@pytest.fixture(scope="module")
def shot_locus():
    return homoclinic_locus(LOCUS_L1)


class TestDoubleZeroUnfolding:
    def test_eigenvalue_helpers_match_jacobian(self):
        lam1, lam2 = -0.04, 0.17
        s = math.sqrt(-lam1)
        field = takens_bogdanov_field(lam1, lam2)
        for loc, helper in (((s, 0.0), saddle_eigenvalues),
                            ((-s, 0.0), antisaddle_eigenvalues)):
            jac = field.jacobian(np.array(loc), 0.0)
            expected = np.sort_complex(np.linalg.eigvals(jac))
            got = np.sort_complex(np.array(helper(lam1, lam2), dtype=complex))
            assert np.allclose(got, expected, atol=1e-12)
        lo, hi = saddle_eigenvalues(lam1, lam2)
        assert lo < 0 < hi

    def test_region_classification(self):
        assert takens_bogdanov_diagram(0.1, 0.5).region == 1
        assert takens_bogdanov_diagram(-0.04, 0.2).region == "B"
        assert takens_bogdanov_diagram(-0.04, 0.3).region == 2
        hom = LOCUS_FROZEN
        assert takens_bogdanov_diagram(-0.04, 0.15,
                                       homoclinic_lambda2=hom).region == 3
        assert takens_bogdanov_diagram(-0.04, 0.10,
                                       homoclinic_lambda2=hom).region == 4
        assert takens_bogdanov_diagram(-0.04, hom,
                                       homoclinic_lambda2=hom).region == "C"

    def test_fold_curves_and_organizing_point(self):
        assert takens_bogdanov_diagram(0.0, 0.5).region == "A"
        assert takens_bogdanov_diagram(0.0, -0.5).region == "D"
        with pytest.raises(ValueError):
            takens_bogdanov_diagram(0.0, 0.0)
        diag = takens_bogdanov_diagram(0.0, 0.5)
        assert diag.eigenvalues_at_equilibria["double"]["label"] \
            == "elementary saddle-node candidate"

    def test_diagnosis_payload(self):
        diag = takens_bogdanov_diagram(-0.04, 0.15,
                                       homoclinic_lambda2=LOCUS_FROZEN)
        assert diag.equilibria["saddle"] == pytest.approx((0.2, 0.0))
        assert diag.eigenvalues_at_equilibria["saddle"]["label"] == "saddle"
        assert diag.eigenvalues_at_equilibria["antisaddle"]["label"] \
            == "stable focus"
        assert diag.hopf_lambda2 == pytest.approx(0.2)
        assert diag.homoclinic_reference == pytest.approx(HOMOCLINIC_SLOPE * 0.2)
        payload = diag.to_dict()
        assert payload["region"] == "3"
        assert isinstance(
            payload["eigenvalues_at_equilibria"]["saddle"]["eigenvalues"][0],
            list)

    def test_homoclinic_locus_against_independent_shooting(self, shot_locus):
        assert shot_locus == pytest.approx(LOCUS_FROZEN, abs=5e-4)

    def test_locus_sits_near_leading_order_line(self, shot_locus):
        s = math.sqrt(-LOCUS_L1)
        band = 0.2 * abs(LOCUS_L1) ** 0.25 * s
        assert abs(shot_locus - HOMOCLINIC_SLOPE * s) < band

    def test_region_grid_without_shooting(self):
        grid = tb_region_grid([-0.04, 0.0, 0.02], [-0.1, 0.0, 0.1, 0.25],
                              shoot=False)
        assert grid.regions[0] == ["4", "4", "4", "2"]
        assert grid.regions[1] == ["D", "TB", "A", "A"]
        assert grid.regions[2] == ["1", "1", "1", "1"]
        assert grid.locus_coeffs is None
