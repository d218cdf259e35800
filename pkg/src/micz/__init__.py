"""Geometry and dynamics of oriented MICZ-Kepler orbits."""
from .errors import (
    ClassBoundary,
    DegenerateOrbit,
    HyperbolicUnsupported,
    InvalidParams,
    InvalidTransform,
    MiczError,
    NearCollision,
    NonUnitDirection,
    OriginPoint,
    SignFlip,
    StepLimitExceeded,
    WrongClass,
)
from .linalg import CausalClass, causal_class, cross3, dot3, mdot
from .orbit_params import (
    EuclideanOrbitParams,
    MinkowskiOrbitParams,
    OrbitClass,
    classify,
    eccentricity,
    energy_euclidean,
    energy_minkowski,
    is_circle,
    magnetic_charge,
    to_euclidean,
    to_minkowski,
    validate_euclidean,
    validate_minkowski,
)
from .conic import lift_to_cone, orbit_residuals, plane_frame, plane_residuals, sample_orbit
from .dynamics import (
    DriftReport,
    IntegratorConfig,
    PhaseState,
    Trajectory,
    acceleration,
    angular_momentum,
    drift_report,
    energy,
    integrate,
    lenz_vector,
    magnetic_field,
    synthesize_initial_state,
)
from .lorentz import (
    LorentzTransform,
    OrientedSymmetry,
    act,
    boost,
    canonicalize_elliptic,
    canonicalize_parabolic,
    compose,
    inverse,
    random_element,
    rotation,
    spatial_reflection,
    transport,
)

__version__ = "0.1.0"
