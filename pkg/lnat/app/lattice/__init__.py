"""L-natural convex domains given by difference constraints."""

from .domain import (
    DEFAULT_ENUMERATION_CAP,
    DimensionMismatchError,
    EmptyDomainError,
    EnumerationLimitError,
    InfeasibleRegionError,
    LatticePoint,
    LNatDomain,
    NotFullDimensionalError,
    RationalVector,
    lnatural_violation,
    verify_lnatural_set,
)
from .graph import Arc, NegativeCycleError, all_pairs_distances, constraint_graph, shortest_distances
from .io import DomainFormatError, DomainSpec, domain_from_dict, dump_domain, load_domain

__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "Arc",
    "DimensionMismatchError",
    "DomainFormatError",
    "DomainSpec",
    "EmptyDomainError",
    "EnumerationLimitError",
    "InfeasibleRegionError",
    "LNatDomain",
    "LatticePoint",
    "NegativeCycleError",
    "NotFullDimensionalError",
    "RationalVector",
    "all_pairs_distances",
    "constraint_graph",
    "domain_from_dict",
    "dump_domain",
    "lnatural_violation",
    "load_domain",
    "shortest_distances",
    "verify_lnatural_set",
]
