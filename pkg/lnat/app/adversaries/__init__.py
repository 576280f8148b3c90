"""Cost-sequence generators."""

from .sequences import (
    CostSequence,
    GeneratorCertificationError,
    LinearCoordinateCost,
    lower_bound_adversary,
    lower_bound_comparator,
    lower_bound_domain,
    random_lnat_stream,
)

__all__ = [
    "CostSequence",
    "GeneratorCertificationError",
    "LinearCoordinateCost",
    "lower_bound_adversary",
    "lower_bound_comparator",
    "lower_bound_domain",
    "random_lnat_stream",
]
