"""Pytest configuration and fixtures for lnat tests."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
import pytest
from ruamel.yaml import YAML

from lnat.app.experiments import TableFunction
from lnat.app.extension import CostOracle
from lnat.app.lattice import LatticePoint, LNatDomain

# f(0,0)=0, f(1,0)=1, f(0,1)=2, f(1,1)=2.5
UNIT_SQUARE_VALUES: dict[LatticePoint, float] = {
    (0, 0): 0.0,
    (1, 0): 1.0,
    (0, 1): 2.0,
    (1, 1): 2.5,
}


@pytest.fixture
def box2() -> LNatDomain:
    """The box [0, 2]^2."""
    return LNatDomain.box([0, 0], [2, 2])


@pytest.fixture
def box13() -> LNatDomain:
    """The box [1, 3]^2."""
    return LNatDomain.box([1, 1], [3, 3])


@pytest.fixture
def band2() -> LNatDomain:
    """[0, 2]^2 with ``|z_1 - z_2| <= 1``."""
    return LNatDomain.create([0, 0], [2, 2], {(0, 1): 1, (1, 0): 1})


@pytest.fixture
def unit_square() -> LNatDomain:
    """The box {0, 1}^2."""
    return LNatDomain.box([0, 0], [1, 1])


@pytest.fixture
def table_oracle(unit_square: LNatDomain) -> CostOracle:
    """The tabulated submodular function on {0, 1}^2."""
    return CostOracle(
        domain=unit_square,
        evaluate=TableFunction(UNIT_SQUARE_VALUES),
        bound=2.5,
        lipschitz=2.5,
        name="table",
    )


def linear_oracle(domain: LNatDomain, coeffs: tuple[float, ...], name: str = "linear") -> CostOracle:
    """``c . z`` with its exact constants."""
    lipschitz = float(sum(abs(c) for c in coeffs))
    bound = max(
        abs(sum(c * v for c, v in zip(coeffs, z, strict=True))) for z in domain.enumerate_points()
    )
    return CostOracle(
        domain=domain,
        evaluate=lambda z: float(sum(c * v for c, v in zip(coeffs, z, strict=True))),
        bound=float(bound),
        lipschitz=lipschitz,
        name=name,
    )


def constant_oracle(domain: LNatDomain, value: float = 0.0) -> CostOracle:
    """A cost that ignores the point."""
    return CostOracle(domain=domain, evaluate=lambda z: value, bound=abs(value), lipschitz=0.0, name="constant")


class CountingQuery:
    """Point-query wrapper recording every queried point."""

    def __init__(self, fn: Callable[[LatticePoint], float]) -> None:
        self._fn = fn
        self.queries: list[LatticePoint] = []

    def __call__(self, z: LatticePoint) -> float:
        self.queries.append(tuple(z))
        return float(self._fn(tuple(z)))


@pytest.fixture
def rng() -> np.random.Generator:
    """A fixed-seed generator."""
    return np.random.default_rng(12345)


def write_yaml_file(path: Path, data: Any) -> Path:
    """Dump ``data`` to ``path`` and return the path."""
    yaml = YAML(typ="safe")
    yaml.default_flow_style = False
    with path.open("w") as f:
        yaml.dump(data, f)
    return path
