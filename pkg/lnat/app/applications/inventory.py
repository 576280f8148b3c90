"""Online spare-parts inventory.

Each round the learner orders ``z_j`` units of every part type before the
demand ``y_t`` is revealed and pays ``p * max_j max(y_tj - z_j, 0) + sum_j c_j z_j``:
a penalty on the worst shortage plus the purchase cost. No demand distribution
is assumed.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..adversaries import CostSequence
from ..extension import CostOracle
from ..lattice import LatticePoint, LNatDomain
from ..utils.logging import get_logger

logger = get_logger(__name__)

DemandVector = tuple[int, ...]


class DemandTraceError(ValueError):
    """Raised when a demand trace file is malformed."""

    pass


@dataclass(frozen=True)
class InventoryModel:
    """Penalty, prices, order cap and the pre-materialized demand stream.

    Attributes:
        penalty: p, cost per unit of the worst shortage.
        prices: c, unit price per part type.
        max_order: N, largest order per part type.
        demands: ``y_1 .. y_T``.
        demand_cap: Largest admissible demand per part type (defaults to the
            largest demand in the stream).
    """

    penalty: float
    prices: tuple[float, ...]
    max_order: int
    demands: tuple[DemandVector, ...]
    demand_cap: int | None = None

    def __post_init__(self) -> None:
        if self.penalty <= 0:
            raise ValueError(f"Penalty must be positive, got {self.penalty}")
        if any(c < 0 for c in self.prices):
            raise ValueError("Prices must be nonnegative")
        if self.max_order < 1:
            raise ValueError("Order cap must be positive")
        cap = self.effective_demand_cap
        for t, y in enumerate(self.demands, start=1):
            if len(y) != self.dim:
                raise ValueError(f"Demand for round {t} has {len(y)} entries, expected {self.dim}")
            if any(v < 0 or v > cap for v in y):
                raise ValueError(f"Demand for round {t} outside 0..{cap}")

    @property
    def dim(self) -> int:
        return len(self.prices)

    @property
    def horizon(self) -> int:
        return len(self.demands)

    @property
    def effective_demand_cap(self) -> int:
        if self.demand_cap is not None:
            return self.demand_cap
        return max((max(y) for y in self.demands if y), default=0)

    @property
    def domain(self) -> LNatDomain:
        """Order quantities ``{0, .., N}^d``."""
        return LNatDomain.box([0] * self.dim, [self.max_order] * self.dim)

    @property
    def lipschitz(self) -> float:
        """Max-norm Lipschitz constant ``p + sum_j c_j``.

        A unit move in every coordinate changes the purchase cost by up to
        ``sum_j c_j`` and the worst shortage by at most one.
        """
        return self.penalty + float(sum(self.prices))

    @property
    def bound(self) -> float:
        """``|f_t| <= p * demand_cap + N * sum_j c_j``."""
        return self.penalty * self.effective_demand_cap + self.max_order * float(sum(self.prices))


@dataclass(frozen=True)
class InventoryCost:
    """The loss of one round for a fixed demand vector."""

    penalty: float
    prices: tuple[float, ...]
    demand: DemandVector

    def __call__(self, z: LatticePoint) -> float:
        shortage = max(max(y - v, 0) for y, v in zip(self.demand, z, strict=True))
        return self.penalty * shortage + float(sum(c * v for c, v in zip(self.prices, z, strict=True)))


def inventory_cost(model: InventoryModel, t: int, z: Sequence[int]) -> float:
    """Loss of ordering ``z`` in round ``t`` (1-based)."""
    if not 1 <= t <= model.horizon:
        raise IndexError(f"Round {t} outside 1..{model.horizon}")
    return InventoryCost(model.penalty, model.prices, model.demands[t - 1])(tuple(z))


def inventory_oracle(model: InventoryModel, t: int, domain: LNatDomain | None = None) -> CostOracle:
    """Cost oracle of round ``t``."""
    return CostOracle(
        domain=domain or model.domain,
        evaluate=InventoryCost(model.penalty, model.prices, model.demands[t - 1]),
        bound=model.bound,
        lipschitz=model.lipschitz,
        name=f"inventory[{t}]",
    )


def inventory_stream(model: InventoryModel) -> CostSequence:
    """All rounds of the model as a cost sequence."""
    domain = model.domain
    return CostSequence(
        domain=domain,
        costs=tuple(inventory_oracle(model, t, domain) for t in range(1, model.horizon + 1)),
        bound=model.bound,
        lipschitz=model.lipschitz,
        meta={
            "kind": "inventory",
            "penalty": model.penalty,
            "prices": list(model.prices),
            "max_order": model.max_order,
            "demand_cap": model.effective_demand_cap,
            "horizon": model.horizon,
        },
    )


def uniform_demands(dim: int, horizon: int, high: int, rng: np.random.Generator) -> tuple[DemandVector, ...]:
    """I.i.d. demands uniform on ``{0, .., high}``."""
    draws = rng.integers(0, high + 1, size=(horizon, dim))
    return tuple(tuple(int(v) for v in row) for row in draws)


def geometric_demands(
    dim: int, horizon: int, success: float, cap: int, rng: np.random.Generator
) -> tuple[DemandVector, ...]:
    """I.i.d. demands from a geometric law on ``{0, 1, ..}`` truncated to ``{0, .., cap}``."""
    if not 0 < success <= 1:
        raise ValueError("success probability must lie in (0, 1]")
    support = np.arange(cap + 1)
    weights = success * (1.0 - success) ** support
    draws = rng.choice(support, size=(horizon, dim), p=weights / weights.sum())
    return tuple(tuple(int(v) for v in row) for row in draws)


def load_demand_trace(path: Path, dim: int | None = None) -> tuple[DemandVector, ...]:
    """Read one demand vector per line (whitespace-separated integers).

    Blank lines and ``#`` comments are skipped.

    Raises:
        DemandTraceError: If a line is malformed or widths disagree.
    """
    rows: list[DemandVector] = []
    try:
        text = path.read_text()
    except OSError as e:
        raise DemandTraceError(f"{path}: {e}") from e
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            row = tuple(int(tok) for tok in line.split())
        except ValueError as e:
            raise DemandTraceError(f"{path}:{lineno}: not an integer row") from e
        if any(v < 0 for v in row):
            raise DemandTraceError(f"{path}:{lineno}: negative demand")
        expected = dim if dim is not None else (len(rows[0]) if rows else len(row))
        if len(row) != expected:
            raise DemandTraceError(f"{path}:{lineno}: expected {expected} values, got {len(row)}")
        rows.append(row)
    if not rows:
        raise DemandTraceError(f"{path}: no demand rows")
    logger.info("Loaded %d demand rows from %s", len(rows), path)
    return tuple(rows)
