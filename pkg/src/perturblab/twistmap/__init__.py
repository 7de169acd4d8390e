"""Area-preserving twist maps: portraits, invariant circles, breakup."""

from .circles import (
    BreakupBracket,
    InvariantCircle,
    NoBreakupTransition,
    ResonantFrequency,
    breakup_scan,
    invariant_circle,
)
from .kernels import (
    ACTIVE_BACKEND,
    HAVE_NUMBA,
    backend_name,
    orbit_batch,
    orbit_batch_numba,
    orbit_batch_numpy,
    power_jacobian,
    power_jacobian_numba,
    power_jacobian_numpy,
)
from .maps import (
    OrbitRecord,
    TwistMap,
    iterate_orbit,
    phase_portrait,
    rotation_number_estimate,
    standard_map,
)
from .pborbits import PeriodicOrbitRecord, pb_periodic_orbits

__all__ = [
    "ACTIVE_BACKEND",
    "BreakupBracket",
    "HAVE_NUMBA",
    "InvariantCircle",
    "NoBreakupTransition",
    "OrbitRecord",
    "PeriodicOrbitRecord",
    "ResonantFrequency",
    "TwistMap",
    "backend_name",
    "breakup_scan",
    "invariant_circle",
    "iterate_orbit",
    "orbit_batch",
    "orbit_batch_numba",
    "orbit_batch_numpy",
    "pb_periodic_orbits",
    "phase_portrait",
    "power_jacobian",
    "power_jacobian_numba",
    "power_jacobian_numpy",
    "rotation_number_estimate",
    "standard_map",
]
