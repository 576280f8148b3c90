"""Maximal chains and threshold rounding."""

from .maximal import (
    ChainConstructionError,
    InvalidPermutationError,
    MaximalChain,
    OutOfDomainError,
    as_rational,
    decompose,
    maximal_chain,
    round_by_threshold,
    threshold_index,
)

__all__ = [
    "ChainConstructionError",
    "InvalidPermutationError",
    "MaximalChain",
    "OutOfDomainError",
    "as_rational",
    "decompose",
    "maximal_chain",
    "round_by_threshold",
    "threshold_index",
]
