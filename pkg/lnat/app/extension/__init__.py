"""Convex extension of L-natural convex functions."""

from .lovasz import (
    certify_constants,
    evaluate_chain,
    expected_rounding_value,
    extension_from_values,
    extension_value,
    subgradient,
    subgradient_from_values,
    with_certified_constants,
)
from .types import CostOracle, OracleConstants, PointFunction, Subgradient

__all__ = [
    "CostOracle",
    "OracleConstants",
    "PointFunction",
    "Subgradient",
    "certify_constants",
    "evaluate_chain",
    "expected_rounding_value",
    "extension_from_values",
    "extension_value",
    "subgradient",
    "subgradient_from_values",
    "with_certified_constants",
]
