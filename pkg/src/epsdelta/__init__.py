"""Epsilon-delta analysis toolkit.

Computes optimal uniform-continuity tolerances delta(eps) on closed
intervals (grid search, closed forms, finite-space oracle), refines
extrema over nested dyadic nets with certified bounds, and runs
generalized intermediate-value bisection against target sets.
"""

from ._kernels import backend
from .delta import (
    BIAS_EXACT,
    BIAS_UPPER_BOUND,
    METHOD_CLOSED_FORM,
    METHOD_EXHAUSTIVE,
    METHOD_GRID,
    DeltaProfile,
    DeltaSample,
    GridConfig,
    VerificationReport,
    base_grid_points,
    build_profile,
    modulus_of_continuity,
    optimal_delta_closed_form,
    optimal_delta_finite,
    optimal_delta_grid,
    verify_largest_delta,
)
from .errors import (
    DomainError,
    EmptyLevelSet,
    EpsDeltaError,
    LevelTooLarge,
    NotSelfMap,
    OutOfRange,
    ParseError,
    PreconditionViolated,
    UnsupportedFamily,
)
from .extremum import (
    MAX_NET_LEVEL,
    DyadicNet,
    RefinementTrace,
    certified_max_bound,
    dyadic_net,
    envelope,
    first_maximizer,
    refine_extrema,
)
from .functions import (
    Chainsaw,
    Expression,
    FiniteMetricSpace,
    Interval,
    PiecewiseLinear,
    Polynomial,
    PowerFamily,
    RealFunction,
    anchor_points,
    canonical_text,
    chainsaw_function,
    evaluate,
    evaluate_many,
    expression_function,
    parse_function,
    piecewise_linear_function,
    polynomial_function,
    power_function,
    range_bounds,
)
from .intermediate import (
    BOUNDARY,
    EXTERIOR,
    INTERIOR,
    BisectionStep,
    BisectionTrace,
    FixedPointResult,
    TargetSet,
    bisect_boundary,
    classical_ivt,
    classify,
    fixed_point,
    parse_target_set,
)

__version__ = "0.1.0"

__all__ = [
    "BIAS_EXACT",
    "BIAS_UPPER_BOUND",
    "BOUNDARY",
    "BisectionStep",
    "BisectionTrace",
    "Chainsaw",
    "DeltaProfile",
    "DeltaSample",
    "DomainError",
    "DyadicNet",
    "EmptyLevelSet",
    "EpsDeltaError",
    "Expression",
    "EXTERIOR",
    "FiniteMetricSpace",
    "FixedPointResult",
    "GridConfig",
    "INTERIOR",
    "Interval",
    "LevelTooLarge",
    "MAX_NET_LEVEL",
    "METHOD_CLOSED_FORM",
    "METHOD_EXHAUSTIVE",
    "METHOD_GRID",
    "NotSelfMap",
    "OutOfRange",
    "ParseError",
    "PiecewiseLinear",
    "Polynomial",
    "PowerFamily",
    "PreconditionViolated",
    "RealFunction",
    "RefinementTrace",
    "TargetSet",
    "UnsupportedFamily",
    "VerificationReport",
    "anchor_points",
    "backend",
    "base_grid_points",
    "bisect_boundary",
    "build_profile",
    "canonical_text",
    "certified_max_bound",
    "chainsaw_function",
    "classical_ivt",
    "classify",
    "dyadic_net",
    "envelope",
    "evaluate",
    "evaluate_many",
    "expression_function",
    "first_maximizer",
    "fixed_point",
    "modulus_of_continuity",
    "optimal_delta_closed_form",
    "optimal_delta_finite",
    "optimal_delta_grid",
    "parse_function",
    "parse_target_set",
    "piecewise_linear_function",
    "polynomial_function",
    "power_function",
    "range_bounds",
    "verify_largest_delta",
]
