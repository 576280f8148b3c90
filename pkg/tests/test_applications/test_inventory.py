"""Tests for the spare-parts inventory application."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from lnat.app.applications import (
    DemandTraceError,
    InventoryModel,
    geometric_demands,
    inventory_cost,
    inventory_oracle,
    inventory_stream,
    load_demand_trace,
    uniform_demands,
)
from lnat.app.oracles import check_declared_constants, check_midpoint_convexity


@pytest.fixture
def model() -> InventoryModel:
    """Two part types, penalty 2, unit prices."""
    return InventoryModel(penalty=2.0, prices=(1.0, 1.0), max_order=4, demands=((3, 0), (1, 2), (0, 4)))


class TestInventoryModel:
    """Tests for InventoryModel."""

    def test_cost(self, model: InventoryModel) -> None:
        """Shortage 1 on the first part, purchase cost 3."""
        assert inventory_cost(model, 1, (2, 1)) == pytest.approx(5.0)

    def test_no_shortage(self, model: InventoryModel) -> None:
        """Covering the demand pays only for the parts."""
        assert inventory_cost(model, 2, (1, 2)) == pytest.approx(3.0)

    def test_constants(self, model: InventoryModel) -> None:
        """``L = p + sum c`` and ``M = p * cap + N * sum c``."""
        assert model.lipschitz == pytest.approx(4.0)
        assert model.bound == pytest.approx(2.0 * 4 + 4 * 2.0)

    def test_round_range(self, model: InventoryModel) -> None:
        """Rounds are 1-based."""
        with pytest.raises(IndexError):
            inventory_cost(model, 4, (0, 0))

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"penalty": 0.0},
            {"prices": (-1.0, 1.0)},
            {"max_order": 0},
            {"demands": ((1, 2, 3),)},
            {"demands": ((5, 0),), "demand_cap": 4},
        ],
    )
    def test_validation(self, kwargs: dict[str, object]) -> None:
        """Invalid parameters are rejected."""
        base: dict[str, object] = {"penalty": 1.0, "prices": (1.0, 1.0), "max_order": 3, "demands": ((1, 1),)}
        base.update(kwargs)

        with pytest.raises(ValueError):
            InventoryModel(**base)  # type: ignore[arg-type]


class TestInventoryOracle:
    """Tests for the inventory cost oracles."""

    def test_midpoint_convex(self, model: InventoryModel) -> None:
        """Every round is L-natural convex."""
        for t in range(1, model.horizon + 1):
            assert check_midpoint_convexity(inventory_oracle(model, t)).passed

    def test_declared_constants(self, model: InventoryModel) -> None:
        """Declared M and L dominate the measured ones."""
        for t in range(1, model.horizon + 1):
            assert check_declared_constants(inventory_oracle(model, t)).passed

    def test_stream(self, model: InventoryModel) -> None:
        """The stream carries the model constants and metadata."""
        sequence = inventory_stream(model)

        assert sequence.horizon == 3
        assert sequence.domain == model.domain
        assert sequence.lipschitz == model.lipschitz
        assert sequence.meta["kind"] == "inventory"
        assert sequence.cost(3)((4, 4)) == pytest.approx(8.0)


class TestDemandStreams:
    """Tests for demand generators and trace files."""

    def test_uniform(self, rng: np.random.Generator) -> None:
        """Shape and range of uniform demands."""
        demands = uniform_demands(3, 50, 5, rng)

        assert len(demands) == 50
        assert all(len(y) == 3 and all(0 <= v <= 5 for v in y) for y in demands)

    def test_geometric(self, rng: np.random.Generator) -> None:
        """Truncated geometric demands stay under the cap."""
        demands = geometric_demands(2, 100, 0.4, 6, rng)

        assert all(0 <= v <= 6 for y in demands for v in y)

    def test_geometric_success_range(self, rng: np.random.Generator) -> None:
        """The success probability lies in (0, 1]."""
        with pytest.raises(ValueError):
            geometric_demands(2, 10, 0.0, 6, rng)

    def test_load_trace(self, tmp_path: Path) -> None:
        """Comments and blank lines are skipped."""
        path = tmp_path / "demands.txt"
        path.write_text("# part A, part B\n3 0\n\n1 2  # busy day\n")

        assert load_demand_trace(path) == ((3, 0), (1, 2))

    @pytest.mark.parametrize("text", ["1 2\n3\n", "1 -2\n", "1 x\n", "# nothing\n"])
    def test_bad_trace(self, tmp_path: Path, text: str) -> None:
        """Malformed rows are reported."""
        path = tmp_path / "demands.txt"
        path.write_text(text)

        with pytest.raises(DemandTraceError):
            load_demand_trace(path)

    def test_trace_width(self, tmp_path: Path) -> None:
        """An explicit width is enforced."""
        path = tmp_path / "demands.txt"
        path.write_text("1 2\n")

        with pytest.raises(DemandTraceError):
            load_demand_trace(path, dim=3)

    def test_missing_trace(self, tmp_path: Path) -> None:
        """A missing file is a trace error."""
        with pytest.raises(DemandTraceError):
            load_demand_trace(tmp_path / "absent.txt")
