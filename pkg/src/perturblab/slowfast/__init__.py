"""Slow-fast systems: slow manifolds, matched expansions, delayed exits.

The pipeline: ``slow_manifold`` locates the attracting equilibrium branch
of the fast dynamics and wraps it in a chart; ``asymptotic_expansion``
builds the eps-power corrections to that branch (divergent in general,
with ``optimal_truncation`` picking the useful order);  ``tihonov_verify``
measures the convergence rates the reduction claims; ``hopf_delay`` and
``buffer_point`` quantify how far past a dynamic instability a trajectory
survives; and ``relaxation_cycle`` measures the fractional-power fold
laws of the van der Pol oscillator.
"""

from .delay import DelayAnalysis, ThresholdNotCrossed, buffer_point, hopf_delay
from .expansion import (AsymptoticExpansion, TruncationResult,
                        asymptotic_expansion, cauchy_drive,
                        disordering_crossing, fourier_periodic_solution,
                        optimal_truncation, scalar_drive_expansion, sin_drive)
from .manifold import (FoldPointError, NotAttracting, SlowManifoldChart,
                       slow_manifold)
from .relaxation import (T0_SINGULAR, FoldConstants, RelaxationMetrics,
                         RelaxationScaling, fold_crossing_constant,
                         relaxation_cycle, relaxation_scaling)
from .system import (SlowFastSystem, delayed_hopf_system,
                     drifted_hopf_system, linear_decay_system, vdp_system)
from .tihonov import TihonovReport, tihonov_verify

__all__ = [
    "SlowFastSystem", "linear_decay_system", "vdp_system",
    "delayed_hopf_system", "drifted_hopf_system",
    "SlowManifoldChart", "slow_manifold", "FoldPointError", "NotAttracting",
    "AsymptoticExpansion", "TruncationResult", "asymptotic_expansion",
    "optimal_truncation", "scalar_drive_expansion", "sin_drive",
    "cauchy_drive", "fourier_periodic_solution", "disordering_crossing",
    "TihonovReport", "tihonov_verify",
    "DelayAnalysis", "ThresholdNotCrossed", "hopf_delay", "buffer_point",
    "RelaxationMetrics", "RelaxationScaling", "relaxation_cycle",
    "relaxation_scaling", "FoldConstants", "fold_crossing_constant",
    "T0_SINGULAR",
]
