"""Bounded L-natural convex sets given by difference constraints."""

from __future__ import annotations

import math
import operator
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from ..utils.logging import get_logger
from .graph import Arc, NegativeCycleError, all_pairs_distances, shortest_distances

logger = get_logger(__name__)

LatticePoint = tuple[int, ...]
RationalVector = tuple[Fraction, ...]
BoxRefinement = tuple[int, int, int]
"""``(k, low, high)``: the extra constraint ``low <= y_k <= high``."""

DEFAULT_ENUMERATION_CAP = 1_000_000


class DimensionMismatchError(ValueError):
    """Raised when a vector or index does not fit the domain dimension."""

    pass


class EmptyDomainError(Exception):
    """Raised when the constraint system has no integer solution."""

    pass


class InfeasibleRegionError(Exception):
    """Raised when a refined region of the domain is empty."""

    pass


class NotFullDimensionalError(Exception):
    """Raised when the convex hull of the domain has empty interior."""

    pass


class EnumerationLimitError(Exception):
    """Raised when enumerating a domain would exceed the configured cap.

    Attributes:
        cap: The cap that was exceeded.
        size_hint: Number of integer points in the bounding box, an upper
            bound on |K| (exact for a box).
    """

    def __init__(self, cap: int, size_hint: int | None = None) -> None:
        self.cap = cap
        self.size_hint = size_hint
        hint = "" if size_hint is None else f" (bounding box holds {size_hint})"
        super().__init__(f"Domain has more than {cap} points{hint}")


def _as_int_tuple(values: Iterable[int]) -> tuple[int, ...]:
    return tuple(operator.index(v) for v in values)


@dataclass(frozen=True)
class LNatDomain:
    """A bounded L-natural convex set.

    The set is ``K = {z in Z^d : lower <= z <= upper, z_i - z_j <= diff_bounds[i][j]}``
    where ``None`` entries of ``diff_bounds`` mean the pair is unconstrained.
    Construction certifies that ``K`` is nonempty and, unless
    ``require_full_dimension`` is false, that its convex hull is full-dimensional.

    Internally the system is a graph on ``d + 1`` nodes: one per coordinate and
    an origin node (index ``d``) pinned at zero that carries the bounds.
    """

    lower: tuple[int, ...]
    upper: tuple[int, ...]
    diff_bounds: tuple[tuple[int | None, ...], ...]
    require_full_dimension: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", _as_int_tuple(self.lower))
        object.__setattr__(self, "upper", _as_int_tuple(self.upper))
        object.__setattr__(
            self,
            "diff_bounds",
            tuple(
                tuple(None if v is None else operator.index(v) for v in row)
                for row in self.diff_bounds
            ),
        )

        d = len(self.lower)
        if d == 0:
            raise DimensionMismatchError("Domain needs at least one coordinate")
        if len(self.upper) != d:
            raise DimensionMismatchError(f"lower has {d} entries, upper has {len(self.upper)}")
        if len(self.diff_bounds) != d or any(len(row) != d for row in self.diff_bounds):
            raise DimensionMismatchError(f"diff_bounds must be a {d}x{d} matrix")
        for i in range(d):
            if self.diff_bounds[i][i] != 0:
                raise ValueError(f"diff_bounds[{i}][{i}] must be 0")
            if self.lower[i] > self.upper[i]:
                raise EmptyDomainError(
                    f"Coordinate {i}: lower bound {self.lower[i]} exceeds upper bound {self.upper[i]}"
                )

        try:
            _ = self.distances
        except NegativeCycleError as e:
            raise EmptyDomainError("Difference constraints admit no solution") from e

        if self.require_full_dimension and not self.is_full_dimensional():
            raise NotFullDimensionalError(
                "Convex hull of the domain is not full-dimensional "
                "(a coordinate or a coordinate difference is pinned)"
            )

    @classmethod
    def create(
        cls,
        lower: Sequence[int],
        upper: Sequence[int],
        gamma: Mapping[tuple[int, int], int] | None = None,
        *,
        require_full_dimension: bool = True,
    ) -> LNatDomain:
        """Build a domain from bounds and a sparse difference-bound mapping.

        Args:
            lower: Lower bounds (one per coordinate).
            upper: Upper bounds (one per coordinate).
            gamma: ``{(i, j): g}`` meaning ``z_i - z_j <= g``, 0-based indices.
            require_full_dimension: Reject domains with empty interior.

        Returns:
            The validated domain.
        """
        d = len(lower)
        rows: list[list[int | None]] = [[None] * d for _ in range(d)]
        for i in range(d):
            rows[i][i] = 0
        for (i, j), value in (gamma or {}).items():
            if not (0 <= i < d and 0 <= j < d) or i == j:
                raise DimensionMismatchError(f"Invalid difference bound index ({i}, {j})")
            rows[i][j] = value
        return cls(
            lower=tuple(lower),
            upper=tuple(upper),
            diff_bounds=tuple(tuple(row) for row in rows),
            require_full_dimension=require_full_dimension,
        )

    @classmethod
    def box(cls, lower: Sequence[int], upper: Sequence[int]) -> LNatDomain:
        """Build a box domain without difference constraints."""
        return cls.create(lower, upper)

    @property
    def dim(self) -> int:
        """Number of coordinates d."""
        return len(self.lower)

    @property
    def width(self) -> int:
        """N, the largest coordinate range ``max_i (upper_i - lower_i)``."""
        return max(u - lo for lo, u in zip(self.lower, self.upper, strict=True))

    @property
    def origin(self) -> int:
        """Graph index of the origin node."""
        return self.dim

    def gamma(self, i: int, j: int) -> int | None:
        """Declared bound on ``z_i - z_j`` (``None`` when absent)."""
        return self.diff_bounds[i][j]

    @cached_property
    def finite_differences(self) -> tuple[tuple[int, int, int], ...]:
        """Declared ``(i, j, gamma_ij)`` with ``i != j``, in lexicographic order."""
        out: list[tuple[int, int, int]] = []
        for i, row in enumerate(self.diff_bounds):
            for j, value in enumerate(row):
                if i != j and value is not None:
                    out.append((i, j, value))
        return tuple(out)

    @cached_property
    def arcs(self) -> tuple[Arc, ...]:
        """Constraint graph arcs: bounds first, then difference arcs."""
        o = self.origin
        out: list[Arc] = []
        for i in range(self.dim):
            out.append(Arc(o, i, self.upper[i]))
            out.append(Arc(i, o, -self.lower[i]))
        for i, j, value in self.finite_differences:
            out.append(Arc(j, i, value))
        return tuple(out)

    @cached_property
    def distances(self) -> tuple[tuple[int, ...], ...]:
        """All-pairs shortest distances over the ``d + 1`` graph nodes.

        Entry ``[s][v]`` is ``max (y_v - y_s)`` over the convex hull, with the
        origin node fixed at zero. Every node reaches every other one through
        the origin, so all entries are finite.
        """
        table = all_pairs_distances(self.dim + 1, self.arcs)
        return tuple(tuple(int(v) if v is not None else 0 for v in row) for row in table)

    @cached_property
    def difference_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Tight bounds ``delta[i][j] = max (y_i - y_j)`` over the convex hull."""
        d = self.dim
        return tuple(tuple(self.distances[j][i] for j in range(d)) for i in range(d))

    def tight_lower(self, i: int) -> int:
        """Smallest value coordinate ``i`` takes in the convex hull."""
        return -self.distances[i][self.origin]

    def tight_upper(self, i: int) -> int:
        """Largest value coordinate ``i`` takes in the convex hull."""
        return self.distances[self.origin][i]

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.dim:
            raise DimensionMismatchError(f"Index {i} out of range for dimension {self.dim}")

    def _check_length(self, x: Sequence[object]) -> None:
        if len(x) != self.dim:
            raise DimensionMismatchError(f"Expected {self.dim} coordinates, got {len(x)}")

    def _satisfies(self, x: Sequence[int | Fraction]) -> bool:
        values = [*x, 0]
        return all(values[a.head] - values[a.tail] <= a.weight for a in self.arcs)

    def contains(self, z: Sequence[int]) -> bool:
        """Membership of an integer point in K.

        Raises:
            DimensionMismatchError: If ``z`` has the wrong length.
        """
        self._check_length(z)
        if any(Fraction(v).denominator != 1 for v in z):
            return False
        return self._satisfies(z)

    def in_hull(self, x: Sequence[int | Fraction]) -> bool:
        """Exact membership of a rational point in the convex hull of K."""
        self._check_length(x)
        return self._satisfies(x)

    def max_violation(self, x: Sequence[float]) -> float:
        """Largest amount by which ``x`` violates any constraint (0 when feasible)."""
        self._check_length(x)
        values = [float(v) for v in x] + [0.0]
        worst = 0.0
        for a in self.arcs:
            worst = max(worst, values[a.head] - values[a.tail] - float(a.weight))
        return worst

    def tightest_difference(self, i: int, j: int) -> int:
        """Maximum of ``y_i - y_j`` over the convex hull.

        Raises:
            DimensionMismatchError: If an index is out of range.
            ValueError: If ``i == j``.
        """
        self._check_index(i)
        self._check_index(j)
        if i == j:
            raise ValueError("tightest_difference needs two distinct coordinates")
        return self.difference_matrix[i][j]

    def coordinate_max(self, extra_box: Sequence[BoxRefinement], i: int) -> int:
        """Maximum of ``y_i`` over the convex hull intersected with extra box bounds.

        Args:
            extra_box: Refinements ``(k, low, high)`` meaning ``low <= y_k <= high``.
            i: Coordinate to maximize.

        Raises:
            InfeasibleRegionError: If the refined region is empty.
        """
        self._check_index(i)
        o = self.origin
        arcs = list(self.arcs)
        for k, low, high in extra_box:
            self._check_index(k)
            arcs.append(Arc(o, k, high))
            arcs.append(Arc(k, o, -low))
        try:
            dist = shortest_distances(self.dim + 1, arcs, o)
        except NegativeCycleError as e:
            raise InfeasibleRegionError(f"Refinement {list(extra_box)} empties the domain") from e
        value = dist[i]
        if value is None:  # pragma: no cover - origin reaches every coordinate
            raise InfeasibleRegionError(f"Coordinate {i} unreachable")
        return int(value)

    def is_full_dimensional(self) -> bool:
        """Whether the convex hull contains an open ball.

        With integer data this holds iff no coordinate and no coordinate
        difference is pinned, i.e. ``dist(u, v) + dist(v, u) >= 1`` for every
        pair of graph nodes (origin included).
        """
        n = self.dim + 1
        return all(
            self.distances[u][v] + self.distances[v][u] >= 1
            for u in range(n)
            for v in range(u + 1, n)
        )

    @cached_property
    def interior_point(self) -> RationalVector:
        """A rational point with slack at least ``1/(d+2)`` in every constraint.

        Every cycle of the constraint graph has integer weight >= 1 on a
        full-dimensional domain and at most ``d + 1`` arcs, so lowering each
        arc weight by ``1/(d+2)`` keeps the system feasible.

        Raises:
            NotFullDimensionalError: If the domain has empty interior.
        """
        if not self.is_full_dimensional():
            raise NotFullDimensionalError("Domain has no interior point")
        eps = Fraction(1, self.dim + 2)
        shrunk = [Arc(a.tail, a.head, a.weight - eps) for a in self.arcs]
        dist = shortest_distances(self.dim + 1, shrunk, self.origin)
        return tuple(Fraction(v if v is not None else 0) for v in dist[: self.dim])

    @property
    def box_midpoint(self) -> RationalVector:
        """Componentwise midpoint of the bounding box."""
        return tuple(Fraction(lo + u, 2) for lo, u in zip(self.lower, self.upper, strict=True))

    @property
    def box_size(self) -> int:
        """Number of integer points in the bounding box (an upper bound on |K|)."""
        return math.prod(u - lo + 1 for lo, u in zip(self.lower, self.upper, strict=True))

    def enumerate_points(self, cap: int = DEFAULT_ENUMERATION_CAP) -> list[LatticePoint]:
        """All members of K in lexicographic order.

        Coordinates are fixed left to right inside ranges tightened by the
        difference matrix, so every leaf of the search is a member.

        Raises:
            EnumerationLimitError: If K has more than ``cap`` points.
        """
        d = self.dim
        if not self.finite_differences and self.box_size > cap:
            raise EnumerationLimitError(cap, self.box_size)
        delta = self.difference_matrix
        lows = [self.tight_lower(k) for k in range(d)]
        highs = [self.tight_upper(k) for k in range(d)]
        points: list[LatticePoint] = []
        prefix: list[int] = []

        def extend(k: int) -> None:
            if k == d:
                points.append(tuple(prefix))
                if len(points) > cap:
                    raise EnumerationLimitError(cap, self.box_size)
                return
            low, high = lows[k], highs[k]
            for j in range(k):
                low = max(low, prefix[j] - delta[j][k])
                high = min(high, prefix[j] + delta[k][j])
            for value in range(low, high + 1):
                prefix.append(value)
                extend(k + 1)
                prefix.pop()

        extend(0)
        logger.debug("Enumerated %d points of a %d-dimensional domain", len(points), d)
        return points


def _rounded_midpoints(p: LatticePoint, q: LatticePoint) -> tuple[LatticePoint, LatticePoint]:
    sums = [a + b for a, b in zip(p, q, strict=True)]
    return tuple(-(-s // 2) for s in sums), tuple(s // 2 for s in sums)


def lnatural_violation(
    points: Iterable[Sequence[int]],
) -> tuple[LatticePoint, LatticePoint] | None:
    """First pair whose rounded midpoints leave the set, or ``None``."""
    members = [tuple(p) for p in points]
    lookup = set(members)
    for a, p in enumerate(members):
        for q in members[a + 1 :]:
            up, down = _rounded_midpoints(p, q)
            if up not in lookup or down not in lookup:
                return p, q
    return None


def verify_lnatural_set(points: Iterable[Sequence[int]]) -> bool:
    """Whether a finite point set is closed under rounded midpoints."""
    return lnatural_violation(points) is None
