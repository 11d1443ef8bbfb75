"""Geodesic complexity on the oscillator group with a left-invariant metric."""

from .boundary import (
    BoundaryProblem,
    ComplexityResult,
    GeodesicCandidate,
    branch_max,
    complexity,
    enumerate_roots,
    f_of_nu,
    solve_constants,
)
from .errors import (
    DegenerateAutomorphism,
    EmptyWindow,
    InvalidMetric,
    InvalidRepresentation,
    NegativeAmplitudeSquared,
    NoConvergence,
    NotInExponentialImage,
    OscillatorGroupError,
    PoleAtRoot,
    SingularRoot,
    WindowCapExceeded,
)
from .geodesics import (
    DEFAULT_MODEL,
    GeodesicModel,
    GeodesicParams,
    Metric,
    euler_arnold_pi,
    exp_is_geodesic,
    geodesic_point,
    speed,
)
from .group import (
    IDENTITY,
    AlgebraElement,
    Automorphism,
    GroupElement,
    apply_automorphism,
    compose,
    exp,
    inverse,
    log,
)
from .representations import (
    Displacement,
    Generic,
    OscillatorEvolution,
    RepresentationSpec,
    ShiftedOscillator,
    coset_complexity,
    kernel,
    quotient_reduce,
    spectrum,
    to_group_element,
    unitary_complexity,
)

__version__ = "0.1.0"
