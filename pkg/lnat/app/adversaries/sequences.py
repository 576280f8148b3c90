"""Oblivious cost sequences."""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..extension import CostOracle
from ..lattice import DEFAULT_ENUMERATION_CAP, EnumerationLimitError, LatticePoint, LNatDomain
from ..oracles import CheckReport, FunctionFamily, check_midpoint_convexity, random_lnat_function
from ..utils.logging import get_logger
from ..utils.streams import as_generator

logger = get_logger(__name__)


class GeneratorCertificationError(Exception):
    """Raised when a generated cost fails the midpoint convexity check."""

    def __init__(self, t: int, report: CheckReport) -> None:
        self.t = t
        self.report = report
        super().__init__(
            f"Generated cost for round {t} is not L-natural convex "
            f"(violation {report.metric:.3g}, witness {report.witness})"
        )


@dataclass(frozen=True)
class CostSequence:
    """Costs ``f_1 .. f_T`` on one domain with constants valid for every round.

    ``bound`` and ``lipschitz`` may be ``None`` when unknown; ``meta`` records
    the generator parameters and seed.
    """

    domain: LNatDomain
    costs: tuple[CostOracle, ...]
    bound: float | None = None
    lipschitz: float | None = None
    meta: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if not self.costs:
            raise ValueError("A cost sequence needs at least one round")
        for t, cost in enumerate(self.costs, start=1):
            if cost.domain != self.domain:
                raise ValueError(f"Cost for round {t} lives on a different domain")

    @property
    def horizon(self) -> int:
        return len(self.costs)

    def cost(self, t: int) -> CostOracle:
        """Cost of round ``t`` (1-based)."""
        if not 1 <= t <= self.horizon:
            raise IndexError(f"Round {t} outside 1..{self.horizon}")
        return self.costs[t - 1]

    def __len__(self) -> int:
        return self.horizon

    def __iter__(self) -> Iterator[CostOracle]:
        return iter(self.costs)

    @classmethod
    def from_oracles(cls, costs: Sequence[CostOracle], meta: Mapping[str, Any] | None = None) -> CostSequence:
        """Sequence whose constants are the worst declared ones (``None`` if any is unknown)."""
        bounds = [c.bound for c in costs]
        slopes = [c.lipschitz for c in costs]
        return cls(
            domain=costs[0].domain,
            costs=tuple(costs),
            bound=None if any(b is None for b in bounds) else max(b for b in bounds if b is not None),
            lipschitz=None if any(s is None for s in slopes) else max(s for s in slopes if s is not None),
            meta=dict(meta or {}),
        )


@dataclass(frozen=True)
class LinearCoordinateCost:
    """``slope * z[coordinate]``."""

    coordinate: int
    slope: float

    def __call__(self, z: LatticePoint) -> float:
        return self.slope * z[self.coordinate]


def lower_bound_domain(d: int, n: int) -> LNatDomain:
    """The box ``{0, .., N}^d`` the lower-bound construction plays on."""
    return LNatDomain.box([0] * d, [n] * d)


def lower_bound_adversary(
    d: int,
    n: int,
    lipschitz: float,
    horizon: int,
    seed: int | np.random.Generator = 0,
) -> CostSequence:
    """Random linear costs ``f_t(s) = sigma_t L s_{i(t)}`` with Rademacher signs.

    Round ``t`` (1-based) charges coordinate ``i(t) = t mod d`` (0-based). All
    ``T`` signs are drawn up front from the adversary stream.

    Args:
        d: Dimension.
        n: Domain width N.
        lipschitz: Slope L.
        horizon: Number of rounds T.
        seed: Experiment seed or an adversary generator.
    """
    if d < 1 or n < 1 or horizon < 1 or lipschitz <= 0:
        raise ValueError("d, N, T and L must be positive")
    rng = as_generator(seed)
    signs = rng.choice(np.array([-1, 1]), size=horizon)
    domain = lower_bound_domain(d, n)
    costs = tuple(
        CostOracle(
            domain=domain,
            evaluate=LinearCoordinateCost(coordinate=t % d, slope=float(signs[t - 1]) * lipschitz),
            bound=lipschitz * n,
            lipschitz=lipschitz,
            name=f"lower_bound[{t}]",
        )
        for t in range(1, horizon + 1)
    )
    return CostSequence(
        domain=domain,
        costs=costs,
        bound=lipschitz * n,
        lipschitz=lipschitz,
        meta={
            "kind": "lower_bound",
            "dim": d,
            "width": n,
            "lipschitz": lipschitz,
            "horizon": horizon,
            "seed": seed if isinstance(seed, int) else None,
            "signs": [int(s) for s in signs],
        },
    )


def lower_bound_comparator(
    signs: Sequence[int], d: int, n: int, lipschitz: float = 1.0
) -> tuple[LatticePoint, float]:
    """Best fixed point of the lower-bound sequence and its total cost.

    Coordinate ``i`` sits at 0 when the signs charged to it sum to a
    nonnegative value and at N otherwise.
    """
    totals = [0] * d
    for t, sign in enumerate(signs, start=1):
        totals[t % d] += sign
    point = tuple(0 if x >= 0 else n for x in totals)
    value = float(lipschitz * sum(x * s for x, s in zip(totals, point, strict=True)))
    return point, value


def random_lnat_stream(
    domain: LNatDomain,
    family: FunctionFamily | str,
    horizon: int,
    seed: int | np.random.Generator = 0,
    params: Mapping[str, float] | None = None,
    *,
    certify_cap: int = 400,
    constants_cap: int = DEFAULT_ENUMERATION_CAP,
) -> CostSequence:
    """``T`` independent random costs of one family.

    Each cost is certified midpoint convex at construction when K has at most
    ``certify_cap`` points.

    Raises:
        GeneratorCertificationError: If a generated cost fails certification.
    """
    if horizon < 1:
        raise ValueError("T must be positive")
    rng = as_generator(seed)
    try:
        domain.enumerate_points(certify_cap)
        certify = True
    except EnumerationLimitError:
        certify = False
        logger.info("Domain exceeds %d points; skipping per-round certification", certify_cap)

    costs: list[CostOracle] = []
    for t in range(1, horizon + 1):
        oracle = random_lnat_function(domain, family, rng, params, cap=constants_cap)
        if certify:
            report = check_midpoint_convexity(oracle, domain, cap=certify_cap)
            if not report.passed:
                raise GeneratorCertificationError(t, report)
        costs.append(oracle)

    return CostSequence.from_oracles(
        costs,
        meta={
            "kind": "random",
            "family": FunctionFamily(family).value,
            "params": dict(params or {}),
            "horizon": horizon,
            "seed": seed if isinstance(seed, int) else None,
            "certified": certify,
        },
    )
