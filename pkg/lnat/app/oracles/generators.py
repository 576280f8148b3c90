"""Random L-natural convex instances.

Families:
    separable_quadratic: ``sum_i a_i (z_i - c_i)^2`` with ``a_i >= 0``.
    max_component: weighted terms ``w * max(t_0, s z_i + t_i for i in S)`` with one
        sign ``s`` per term (``s = -1`` is the negated-argument composition).
    mixed: a separable quadratic plus a few max terms.

Sums of L-natural convex functions are L-natural convex, so every member of
every family is.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..extension import CostOracle, certify_constants
from ..lattice import (
    EmptyDomainError,
    EnumerationLimitError,
    LatticePoint,
    LNatDomain,
    NotFullDimensionalError,
)
from ..utils.logging import get_logger

logger = get_logger(__name__)


class FunctionFamily(str, Enum):
    """Random function families."""

    SEPARABLE_QUADRATIC = "separable_quadratic"
    MAX_COMPONENT = "max_component"
    MIXED = "mixed"


@dataclass(frozen=True)
class SeparableQuadratic:
    """``sum_i weights[i] * (z_i - centers[i])^2``."""

    weights: tuple[float, ...]
    centers: tuple[float, ...]

    def __call__(self, z: LatticePoint) -> float:
        return float(sum(w * (v - c) ** 2 for w, v, c in zip(self.weights, z, self.centers, strict=True)))

    def lipschitz_bound(self, domain: LNatDomain) -> float:
        total = 0.0
        for w, c, lo, hi in zip(self.weights, self.centers, domain.lower, domain.upper, strict=True):
            reach = max(abs(hi - c), abs(c - lo))
            total += w * (2 * reach + 1)
        return total

    def magnitude_bound(self, domain: LNatDomain) -> float:
        return float(
            sum(
                w * max(abs(hi - c), abs(c - lo)) ** 2
                for w, c, lo, hi in zip(self.weights, self.centers, domain.lower, domain.upper, strict=True)
            )
        )


@dataclass(frozen=True)
class MaxTerm:
    """``weight * max(base, sign * z_i + offsets[i] for i in coords)``."""

    weight: float
    sign: int
    base: float
    coords: tuple[int, ...]
    offsets: tuple[float, ...]

    def __call__(self, z: LatticePoint) -> float:
        inner = max([self.base, *(self.sign * z[i] + t for i, t in zip(self.coords, self.offsets, strict=True))])
        return self.weight * inner

    def lipschitz_bound(self, domain: LNatDomain) -> float:  # noqa: ARG002
        return self.weight

    def magnitude_bound(self, domain: LNatDomain) -> float:
        reach = [abs(self.base)]
        for i, t in zip(self.coords, self.offsets, strict=True):
            reach.append(max(abs(domain.lower[i]), abs(domain.upper[i])) + abs(t))
        return self.weight * max(reach)


@dataclass(frozen=True)
class SumFunction:
    """Pointwise sum of callables."""

    parts: tuple[SeparableQuadratic | MaxTerm, ...]

    def __call__(self, z: LatticePoint) -> float:
        return float(sum(part(z) for part in self.parts))

    def lipschitz_bound(self, domain: LNatDomain) -> float:
        return float(sum(part.lipschitz_bound(domain) for part in self.parts))

    def magnitude_bound(self, domain: LNatDomain) -> float:
        return float(sum(part.magnitude_bound(domain) for part in self.parts))


def _quadratic(domain: LNatDomain, rng: np.random.Generator, scale: float) -> SeparableQuadratic:
    weights = rng.uniform(0.0, 1.0, domain.dim) * scale
    centers = rng.uniform(domain.lower, domain.upper)
    return SeparableQuadratic(tuple(float(w) for w in weights), tuple(float(c) for c in centers))


def _max_term(domain: LNatDomain, rng: np.random.Generator, scale: float) -> MaxTerm:
    size = int(rng.integers(1, domain.dim + 1))
    coords = tuple(sorted(int(i) for i in rng.choice(domain.dim, size=size, replace=False)))
    span = float(domain.width)
    return MaxTerm(
        weight=float(rng.uniform(0.0, 1.0) * scale),
        sign=1 if rng.random() < 0.5 else -1,
        base=float(rng.uniform(-span, span)),
        coords=coords,
        offsets=tuple(float(v) for v in rng.uniform(-span, span, size)),
    )


def random_function(
    domain: LNatDomain,
    family: FunctionFamily | str,
    rng: np.random.Generator,
    params: Mapping[str, float] | None = None,
) -> SumFunction:
    """Draw one function of ``family`` (see module docstring).

    Params:
        scale: Multiplier on all weights (default 1; 0 gives the zero function).
        terms: Number of max terms for ``max_component`` / ``mixed`` (default 2).
    """
    params = params or {}
    scale = float(params.get("scale", 1.0))
    terms = int(params.get("terms", 2))
    match FunctionFamily(family):
        case FunctionFamily.SEPARABLE_QUADRATIC:
            return SumFunction((_quadratic(domain, rng, scale),))
        case FunctionFamily.MAX_COMPONENT:
            return SumFunction(tuple(_max_term(domain, rng, scale) for _ in range(terms)))
        case FunctionFamily.MIXED:
            return SumFunction(
                (_quadratic(domain, rng, scale), *(_max_term(domain, rng, scale) for _ in range(terms)))
            )


def random_lnat_function(
    domain: LNatDomain,
    family: FunctionFamily | str,
    rng: np.random.Generator,
    params: Mapping[str, float] | None = None,
    *,
    cap: int = 10_000,
) -> CostOracle:
    """Random cost oracle with declared constants.

    M and L-hat are measured exhaustively when K has at most ``cap`` points and
    taken from analytic bounds otherwise.
    """
    fn = random_function(domain, family, rng, params)
    try:
        bound, lipschitz = certify_constants(domain, fn, cap)
    except EnumerationLimitError:
        bound, lipschitz = fn.magnitude_bound(domain), fn.lipschitz_bound(domain)
    return CostOracle(
        domain=domain,
        evaluate=fn,
        bound=bound,
        lipschitz=lipschitz,
        name=FunctionFamily(family).value,
    )


def random_domain(
    dim: int,
    width: int,
    rng: np.random.Generator,
    *,
    density: float = 0.5,
    max_tries: int = 100,
) -> LNatDomain:
    """Random full-dimensional domain inside ``[0, width]^dim``.

    Each ordered pair gets a difference bound in ``0 .. width`` with
    probability ``density``; draws that pin a difference are retried.

    Raises:
        RuntimeError: If no full-dimensional draw appears within ``max_tries``.
    """
    if dim < 1 or width < 1:
        raise ValueError("dim and width must be positive")
    for _ in range(max_tries):
        gamma: dict[tuple[int, int], int] = {}
        for i in range(dim):
            for j in range(dim):
                if i != j and rng.random() < density:
                    gamma[(i, j)] = int(rng.integers(0, width + 1))
        try:
            return LNatDomain.create([0] * dim, [width] * dim, gamma)
        except (NotFullDimensionalError, EmptyDomainError):
            continue
    raise RuntimeError(f"No full-dimensional domain found in {max_tries} draws")
