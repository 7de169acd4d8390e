"""Flows: integration, sections, periodic orbits, contraction bounds."""

from .events import HyperplaneSection, StroboscopicSection, poincare_section
from .periodic import (CharacteristicExponents, PeriodicOrbit,
                       characteristic_exponents, find_periodic_orbit,
                       floquet_data)
from .picard import (ContractionLost, PicardResult, gronwall_bound,
                     picard_iterate)
from .rk import flow_map, integrate, variational_matrix
from .vectorfield import (FloquetData, IntegratorStats,
                          NonFiniteRightHandSide, OdeError, SectionEvent,
                          SingularOrbitJacobian, StepUnderflow, Trajectory,
                          VectorField)

__all__ = [
    "CharacteristicExponents",
    "ContractionLost",
    "FloquetData",
    "HyperplaneSection",
    "IntegratorStats",
    "NonFiniteRightHandSide",
    "OdeError",
    "PeriodicOrbit",
    "PicardResult",
    "SectionEvent",
    "SingularOrbitJacobian",
    "StepUnderflow",
    "StroboscopicSection",
    "Trajectory",
    "VectorField",
    "characteristic_exponents",
    "find_periodic_orbit",
    "floquet_data",
    "flow_map",
    "gronwall_bound",
    "integrate",
    "picard_iterate",
    "poincare_section",
    "variational_matrix",
]
