"""Series algebra: Fourier-Taylor containers, canonical transformations,
map normal forms, and time averaging."""

from ._rational import RationalComplex
from .averaging import (
    AveragedSystem,
    AveragingComparison,
    averaged_field,
    averaging_error_scaling,
)
from .fourier_taylor import (
    DEFAULT_TRUNCATION,
    FourierTaylorSeries,
    PRUNE_TOL,
    action_monomial,
    cos_angle,
    poisson_bracket,
    sin_angle,
)
from .homological import HomologicalSolution, average_hamiltonian, solve_homological
from .lie import LieTriangle, lie_triangle_invert, lie_triangle_transform
from .normalform import (
    MapNormalForm,
    birkhoff_normal_form,
    complex_coordinates_map,
    conjugacy_defect,
)
from .poly2 import (
    Poly2,
    conjugate_swap,
    flow_polynomial_jet,
    inverse_near_identity,
    substitute,
)

__all__ = [
    "AveragedSystem",
    "AveragingComparison",
    "DEFAULT_TRUNCATION",
    "FourierTaylorSeries",
    "HomologicalSolution",
    "LieTriangle",
    "MapNormalForm",
    "PRUNE_TOL",
    "Poly2",
    "RationalComplex",
    "action_monomial",
    "average_hamiltonian",
    "averaged_field",
    "averaging_error_scaling",
    "birkhoff_normal_form",
    "complex_coordinates_map",
    "conjugacy_defect",
    "conjugate_swap",
    "cos_angle",
    "flow_polynomial_jet",
    "inverse_near_identity",
    "lie_triangle_invert",
    "lie_triangle_transform",
    "poisson_bracket",
    "sin_angle",
    "solve_homological",
    "substitute",
]
