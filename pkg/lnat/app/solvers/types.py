"""Type definitions for online learners and regret traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np

from ..extension import Subgradient
from ..lattice import LatticePoint, LNatDomain, RationalVector


class Algorithm(str, Enum):
    """Feedback model of the learner."""

    FULL = "full"  # whole cost function revealed
    BANDIT = "bandit"  # value at the played point only


class InvalidParameterError(ValueError):
    """Raised for nonpositive horizons, dimensions, constants or step sizes."""

    pass


@dataclass(frozen=True)
class LearnerState:
    """Fractional iterate and parameters of one learner.

    ``x`` is kept as exact fractions so every round's chain is computed on an
    exact member of the convex hull. ``delta`` is only used by the bandit
    learner. ``rng`` is the learner's private stream.
    """

    domain: LNatDomain
    x: RationalVector
    eta: float
    rng: np.random.Generator
    delta: float = 1.0
    round: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", tuple(Fraction(v) for v in self.x))
        if self.eta <= 0:
            raise InvalidParameterError(f"eta must be positive, got {self.eta}")
        if not 0 < self.delta <= 1:
            raise InvalidParameterError(f"delta must lie in (0, 1], got {self.delta}")


@dataclass(frozen=True)
class RoundOutcome:
    """What one round played, paid and used as a gradient."""

    played: LatticePoint
    loss: float
    estimate: Subgradient


@dataclass(frozen=True)
class RoundRecord:
    """One row of a regret trace."""

    t: int
    played: LatticePoint
    loss: float
    cumulative_loss: float
    regret_to_date: float | None = None


@dataclass
class RegretTrace:
    """Per-round losses and the final regret against the best fixed point.

    ``regret`` is ``None`` when the domain was too large to enumerate; in that
    case ``regret_omitted`` is set and only losses are reported.
    """

    records: list[RoundRecord] = field(default_factory=list)
    best_fixed_point: LatticePoint | None = None
    best_fixed_loss: float | None = None
    regret: float | None = None
    regret_omitted: bool = False
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def horizon(self) -> int:
        return len(self.records)

    @property
    def cumulative_loss(self) -> float:
        return self.records[-1].cumulative_loss if self.records else 0.0

    @property
    def losses(self) -> list[float]:
        return [r.loss for r in self.records]
