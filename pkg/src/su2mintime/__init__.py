"""Time-optimal SU(2) synthesis for a driven two-level system with asymmetric control bounds."""

from .errors import (
    ConfigError,
    DegenerateError,
    EmptyLocus,
    NormalizationError,
    NotFound,
    RangeError,
    StepError,
    Su2Error,
    Unreachable,
)
from .su2 import (
    GENERATORS,
    Generator,
    ProblemParams,
    Su2Element,
    commutator,
    diagonal,
    disk_coords,
    equiv_distance,
    identity,
    make_element,
    swap,
)
from .extremals import (
    Branch,
    DerivedFrequencies,
    ExtremalSpec,
    boundary_frequency,
    critical_frequency,
    critical_time,
    derived,
    extremal_controls,
    extremal_element,
    frontline_point,
)
from .schedule import ControlSchedule, SchedulePiece
from .frontlines import (
    FrontLineSample,
    ReachableBoundary,
    RegimeClass,
    classify,
    contains,
    frontline_intersections,
    reachable_boundary,
    sample_frontline,
    spiral_cuts,
    truncated_range,
)
from .verify import (
    CostateReport,
    CostateState,
    IntegrationConfig,
    brute_force_min_time,
    costate_check,
    propagate,
)
from .synthesis import (
    SynthesisResult,
    lagrange_consistency_check,
    min_time_diagonal,
    min_time_general,
    min_time_swap,
    symmetric_bound_time,
)

__version__ = "0.1.0"
