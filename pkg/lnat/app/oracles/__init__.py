"""Brute-force certification oracles and random instance generators."""

from .checks import (
    CheckReport,
    EstimatorOutcome,
    brute_force_min,
    check_declared_constants,
    check_estimator_moments,
    check_midpoint_convexity,
    check_rounding_identity,
    check_subgradient,
    check_surrogate_gap,
    estimator_outcomes,
    run_oracle_suite,
    sample_hull_points,
)
from .generators import (
    FunctionFamily,
    MaxTerm,
    SeparableQuadratic,
    SumFunction,
    random_domain,
    random_function,
    random_lnat_function,
)

__all__ = [
    "CheckReport",
    "EstimatorOutcome",
    "FunctionFamily",
    "MaxTerm",
    "SeparableQuadratic",
    "SumFunction",
    "brute_force_min",
    "check_declared_constants",
    "check_estimator_moments",
    "check_midpoint_convexity",
    "check_rounding_identity",
    "check_subgradient",
    "check_surrogate_gap",
    "estimator_outcomes",
    "random_domain",
    "random_function",
    "random_lnat_function",
    "run_oracle_suite",
    "sample_hull_points",
]
