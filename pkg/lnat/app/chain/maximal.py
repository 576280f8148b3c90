"""Maximal chains of fractional points in an L-natural convex set.

Every ``x`` in the convex hull of K is a convex combination of the lattice
points ``base + chi(A_0), ..., base + chi(A_d)`` where ``A_0 < A_1 < ... < A_d``
is a maximal chain of coordinate sets. All arithmetic here is exact.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from ..lattice import (
    DimensionMismatchError,
    LatticePoint,
    LNatDomain,
    RationalVector,
)
from ..lattice.domain import BoxRefinement
from ..utils.logging import get_logger

logger = get_logger(__name__)

Scalar = int | float | Fraction


class OutOfDomainError(ValueError):
    """Raised when a point lies outside the convex hull of the domain."""

    def __init__(self, point: Sequence[Scalar], message: str | None = None) -> None:
        self.point = tuple(point)
        super().__init__(message or f"Point {[str(v) for v in point]} is outside the domain")


class InvalidPermutationError(ValueError):
    """Raised when a permutation does not order fractional parts decreasingly."""

    pass


class ChainConstructionError(Exception):
    """Raised when a chain cannot be built (cyclic order or a chain point outside K)."""

    pass


def as_rational(x: Sequence[Scalar]) -> RationalVector:
    """Convert a vector to exact fractions (floats are taken at their binary value)."""
    return tuple(Fraction(v) for v in x)


@dataclass(frozen=True)
class MaximalChain:
    """Base point, permutation and convex weights describing a fractional point.

    Attributes:
        base: Lower corner of the unit cube containing ``x``.
        perm: Order in which coordinates enter the chain (0-based).
        coeffs: Weights ``mu_0 .. mu_d`` of the chain points.
        x: The point the chain was built from.
    """

    base: LatticePoint
    perm: tuple[int, ...]
    coeffs: tuple[Fraction, ...]
    x: RationalVector

    def __post_init__(self) -> None:
        d = len(self.base)
        if sorted(self.perm) != list(range(d)):
            raise InvalidPermutationError(f"{self.perm} is not a permutation of 0..{d - 1}")
        if len(self.coeffs) != d + 1:
            raise ValueError(f"Expected {d + 1} coefficients, got {len(self.coeffs)}")

    @property
    def dim(self) -> int:
        return len(self.base)

    @property
    def sets(self) -> tuple[frozenset[int], ...]:
        """``A_0 .. A_d`` with ``A_k = {perm[0], .., perm[k-1]}``."""
        return tuple(frozenset(self.perm[:k]) for k in range(self.dim + 1))

    def point(self, k: int) -> LatticePoint:
        """Chain point ``base + chi(A_k)``."""
        if not 0 <= k <= self.dim:
            raise IndexError(f"Chain index {k} out of range 0..{self.dim}")
        members = set(self.perm[:k])
        return tuple(b + (1 if i in members else 0) for i, b in enumerate(self.base))

    @property
    def points(self) -> tuple[LatticePoint, ...]:
        return tuple(self.point(k) for k in range(self.dim + 1))

    @property
    def fractional_parts(self) -> RationalVector:
        """``r = x - base``, each in ``[0, 1]``."""
        return tuple(v - b for v, b in zip(self.x, self.base, strict=True))

    def reconstruct(self) -> RationalVector:
        """``base + sum_k mu_k chi(A_k)``; equals ``x`` for a valid chain."""
        out = [Fraction(b) for b in self.base]
        for k, mu in enumerate(self.coeffs):
            for i in self.perm[:k]:
                out[i] += mu
        return tuple(out)


def decompose(base: Sequence[int], perm: Sequence[int], x: Sequence[Scalar]) -> RationalVector:
    """Convex weights of the chain points for a given base and order.

    ``mu_0 = 1 - r[perm[0]]``, ``mu_k = r[perm[k-1]] - r[perm[k]]`` and
    ``mu_d = r[perm[d-1]]`` with ``r = x - base``.

    Raises:
        OutOfDomainError: If ``x`` is not inside the cube ``[base, base + 1]``.
        InvalidPermutationError: If ``r`` does not decrease along ``perm``.
    """
    xr = as_rational(x)
    d = len(xr)
    if len(base) != d or len(perm) != d:
        raise DimensionMismatchError("base, perm and x must have equal length")
    if sorted(perm) != list(range(d)):
        raise InvalidPermutationError(f"{list(perm)} is not a permutation of 0..{d - 1}")

    r = [xr[i] - base[i] for i in range(d)]
    if any(v < 0 or v > 1 for v in r):
        raise OutOfDomainError(xr, "x must lie in the unit cube above base")
    ordered = [r[i] for i in perm]
    for k in range(d - 1):
        if ordered[k] < ordered[k + 1]:
            raise InvalidPermutationError(
                f"Fractional parts increase from position {k} to {k + 1} of {list(perm)}"
            )

    coeffs = [1 - ordered[0]]
    coeffs.extend(ordered[k - 1] - ordered[k] for k in range(1, d))
    coeffs.append(ordered[d - 1])
    return tuple(coeffs)


def _chain_order(base: Sequence[int], r: Sequence[Fraction], delta: Sequence[Sequence[int]]) -> list[int]:
    d = len(base)
    # j must precede i whenever base already attains the tight bound on z_i - z_j
    precedence = nx.DiGraph()
    precedence.add_nodes_from(range(d))
    precedence.add_edges_from(
        (j, i) for i in range(d) for j in range(d) if i != j and base[i] - base[j] == delta[i][j]
    )

    # Largest fractional part first, then smallest index
    try:
        return list(nx.lexicographical_topological_sort(precedence, key=lambda node: (-r[node], node)))
    except nx.NetworkXUnfeasible as e:
        cycle = [u for u, _ in nx.find_cycle(precedence)]
        raise ChainConstructionError(f"Precedence relation is cyclic: {cycle}") from e


def maximal_chain(domain: LNatDomain, x: Sequence[Scalar]) -> MaximalChain:
    """Compute the maximal chain associated with ``x``.

    A fractional coordinate rounds down. An integral coordinate ``x_i`` becomes
    ``x_i - 1`` when ``x_i`` is the largest value coordinate ``i`` can take in
    the region refined so far, and stays ``x_i`` otherwise. Each decision adds
    the refinement ``base_i <= y_i <= base_i + 1``.

    Args:
        domain: A full-dimensional domain.
        x: A point of the convex hull of the domain.

    Returns:
        The chain with exact coefficients.

    Raises:
        OutOfDomainError: If ``x`` is outside the convex hull.
        ChainConstructionError: If the chain would leave K.
    """
    xr = as_rational(x)
    if len(xr) != domain.dim:
        raise DimensionMismatchError(f"Expected {domain.dim} coordinates, got {len(xr)}")
    if not domain.in_hull(xr):
        raise OutOfDomainError(xr)

    refinements: list[BoxRefinement] = []
    base: list[int] = []
    for i, value in enumerate(xr):
        if value.denominator != 1:
            low = math.floor(value)
        else:
            top = domain.coordinate_max(refinements, i)
            low = int(value) - 1 if top == value else int(value)
        base.append(low)
        refinements.append((i, low, low + 1))

    r = [xr[i] - base[i] for i in range(domain.dim)]
    perm = _chain_order(base, r, domain.difference_matrix)
    coeffs = decompose(base, perm, xr)
    chain = MaximalChain(base=tuple(base), perm=tuple(perm), coeffs=coeffs, x=xr)

    for k, z in enumerate(chain.points):
        if not domain.contains(z):
            raise ChainConstructionError(f"Chain point {k} = {z} is outside the domain")

    logger.debug("Chain at %s: base=%s perm=%s", [str(v) for v in xr], chain.base, chain.perm)
    return chain


def threshold_index(chain: MaximalChain, tau: Scalar) -> int:
    """``|S_tau|`` where ``S_tau = {i : x_i > base_i + tau}``."""
    t = Fraction(tau)
    if not 0 <= t <= 1:
        raise ValueError(f"Threshold must lie in [0, 1], got {tau}")
    return sum(1 for v in chain.fractional_parts if v > t)


def round_by_threshold(chain: MaximalChain, x: Sequence[Scalar], tau: Scalar) -> LatticePoint:
    """Round ``x`` to ``base + chi(S_tau)``.

    Since fractional parts decrease along the chain order, ``S_tau`` is the
    chain set ``A_k`` with ``k = |S_tau|``.
    """
    t = Fraction(tau)
    if not 0 <= t <= 1:
        raise ValueError(f"Threshold must lie in [0, 1], got {tau}")
    xr = as_rational(x)
    return tuple(b + (1 if v > b + t else 0) for v, b in zip(xr, chain.base, strict=True))
