"""Local bifurcation analysis of planar flows.

Linear classification of equilibria, center-manifold reduction, the fold
functional H(lambda), the first resonant Hopf coefficient, splitting of
heteroclinic and homoclinic connections under perturbation, and the
region diagram of the double-zero unfolding.
"""

from .equilibria import CuspRegion, EquilibriumClass, classify_equilibrium, cusp_region
from .center import (CenterManifold, SaddleNodeScan, center_manifold_coeffs,
                     center_manifold_residual, derivative_family, saddle_node_H)
from .hopf import HopfResult, hopf_coefficient, radial_decay_rate
from .connections import (HomoclinicProfile, NonintegrableSingularityError,
                          SplittingResult, heteroclinic_splitting,
                          homoclinic_return_profile)
from .unfolding import (HOMOCLINIC_SLOPE, TBDiagnosis, TBGrid,
                        antisaddle_eigenvalues, homoclinic_locus,
                        saddle_eigenvalues, takens_bogdanov_diagram,
                        takens_bogdanov_field, tb_region_grid)

__all__ = [
    "EquilibriumClass", "classify_equilibrium", "CuspRegion", "cusp_region",
    "CenterManifold", "center_manifold_coeffs", "center_manifold_residual",
    "SaddleNodeScan", "saddle_node_H", "derivative_family",
    "HopfResult", "hopf_coefficient", "radial_decay_rate",
    "SplittingResult", "heteroclinic_splitting",
    "NonintegrableSingularityError",
    "HomoclinicProfile", "homoclinic_return_profile",
    "TBDiagnosis", "TBGrid", "takens_bogdanov_field",
    "takens_bogdanov_diagram", "tb_region_grid", "homoclinic_locus",
    "saddle_eigenvalues", "antisaddle_eigenvalues", "HOMOCLINIC_SLOPE",
]
