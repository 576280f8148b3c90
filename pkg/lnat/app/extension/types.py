"""Type definitions for cost oracles and subgradients."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from ..lattice import LatticePoint, LNatDomain

PointFunction = Callable[[LatticePoint], float]


@dataclass(frozen=True)
class CostOracle:
    """An L-natural convex cost on a domain.

    ``evaluate`` must be reentrant: experiments may call it from several
    workers. ``bound`` (M) and ``lipschitz`` (L-hat, with respect to the
    max-norm) are declared constants; ``None`` means unknown.
    """

    domain: LNatDomain
    evaluate: PointFunction
    bound: float | None = None
    lipschitz: float | None = None
    name: str = "cost"

    def __call__(self, z: Sequence[int]) -> float:
        return float(self.evaluate(tuple(z)))


@dataclass(frozen=True)
class Subgradient:
    """A subgradient (or its bandit estimate) of the convex extension."""

    values: tuple[float, ...]

    @classmethod
    def from_array(cls, g: npt.ArrayLike) -> Subgradient:
        return cls(tuple(float(v) for v in np.asarray(g, dtype=float)))

    @property
    def l1_norm(self) -> float:
        return float(sum(abs(v) for v in self.values))

    @property
    def squared_norm(self) -> float:
        return float(sum(v * v for v in self.values))

    def as_array(self) -> npt.NDArray[np.float64]:
        return np.asarray(self.values, dtype=float)


class OracleConstants(NamedTuple):
    """Measured magnitude bound M and max-norm Lipschitz constant L-hat."""

    bound: float
    lipschitz: float
