"""Numerical laboratory for perturbation methods in dynamical systems.

Subpackages
-----------
odeflow
    Adaptive integration, Picard iteration, Poincare sections, periodic
    orbits and Floquet data.
series
    Fourier-Taylor series algebra, Lie transforms, homological equations,
    normal forms of planar maps, averaging.
diophantine
    Continued fractions, Diophantine type certification, small-denominator
    bounds.
twistmap
    Area-preserving twist maps, rotation numbers, invariant circles,
    breakup scans, periodic orbit chains.
slowfast
    Slow manifolds, reduced dynamics, asymptotic expansions with optimal
    truncation, delayed loss of stability, relaxation oscillations.
bifurcation
    Planar equilibria, center manifolds, scalar bifurcation families,
    first Lyapunov coefficients, splitting integrals, the degenerate
    double-zero unfolding.
cli
    Experiment runner with deterministic CSV/JSON/SVG output.
"""

__version__ = "0.1.0"

__all__ = [
    "odeflow",
    "series",
    "diophantine",
    "twistmap",
    "slowfast",
    "bifurcation",
    "cli",
]
