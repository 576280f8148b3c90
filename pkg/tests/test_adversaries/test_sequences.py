"""Tests for cost-sequence generators."""

from __future__ import annotations

import numpy as np
import pytest

from lnat.app.adversaries import (
    CostSequence,
    GeneratorCertificationError,
    LinearCoordinateCost,
    lower_bound_adversary,
    lower_bound_comparator,
    lower_bound_domain,
    random_lnat_stream,
)
from lnat.app.extension import CostOracle
from lnat.app.lattice import LNatDomain
from lnat.app.oracles import CheckReport, FunctionFamily, brute_force_min

from ..conftest import constant_oracle, linear_oracle


class TestCostSequence:
    """Tests for CostSequence."""

    def test_rounds_are_one_based(self, box2: LNatDomain) -> None:
        """``cost(t)`` for ``t`` in ``1..T``."""
        first, second = constant_oracle(box2, 1.0), constant_oracle(box2, 2.0)
        sequence = CostSequence.from_oracles([first, second])

        assert sequence.cost(1) is first
        assert sequence.cost(2) is second
        assert len(sequence) == 2
        assert list(sequence) == [first, second]
        with pytest.raises(IndexError):
            sequence.cost(3)
        with pytest.raises(IndexError):
            sequence.cost(0)

    def test_constants_are_worst_case(self, box2: LNatDomain) -> None:
        """Declared constants take the maximum over rounds."""
        sequence = CostSequence.from_oracles([linear_oracle(box2, (1.0, 0.0)), linear_oracle(box2, (0.0, -3.0))])

        assert sequence.bound == pytest.approx(6.0)
        assert sequence.lipschitz == pytest.approx(3.0)

    def test_unknown_constant(self, box2: LNatDomain) -> None:
        """One unknown constant makes the sequence's unknown."""
        unknown = CostOracle(domain=box2, evaluate=lambda z: 0.0, bound=1.0)

        sequence = CostSequence.from_oracles([constant_oracle(box2), unknown])

        assert sequence.bound == 1.0
        assert sequence.lipschitz is None

    def test_empty(self, box2: LNatDomain) -> None:
        """At least one round."""
        with pytest.raises(ValueError):
            CostSequence(domain=box2, costs=())

    def test_mixed_domains(self, box2: LNatDomain, band2: LNatDomain) -> None:
        """All rounds share the domain."""
        with pytest.raises(ValueError):
            CostSequence(domain=box2, costs=(constant_oracle(box2), constant_oracle(band2)))


class TestLowerBoundAdversary:
    """Tests for the lower-bound construction."""

    def test_coordinate_cycle(self) -> None:
        """Round ``t`` charges coordinate ``t mod d``."""
        sequence = lower_bound_adversary(3, 2, 1.5, 7, seed=11)
        signs = sequence.meta["signs"]

        for t in range(1, 8):
            evaluate = sequence.cost(t).evaluate
            assert isinstance(evaluate, LinearCoordinateCost)
            assert evaluate.coordinate == t % 3
            assert evaluate.slope == pytest.approx(1.5 * signs[t - 1])

    def test_domain_and_constants(self) -> None:
        """The box ``{0..N}^d`` with ``M = L N``."""
        sequence = lower_bound_adversary(2, 4, 0.5, 3)

        assert sequence.domain == lower_bound_domain(2, 4) == LNatDomain.box([0, 0], [4, 4])
        assert sequence.bound == pytest.approx(2.0)
        assert sequence.lipschitz == pytest.approx(0.5)

    def test_seeded(self) -> None:
        """Seeds reproduce signs; a generator is used as is."""
        assert lower_bound_adversary(2, 2, 1.0, 50, seed=3).meta["signs"] == (
            lower_bound_adversary(2, 2, 1.0, 50, seed=3).meta["signs"]
        )
        sequence = lower_bound_adversary(1, 1, 1.0, 10, seed=np.random.default_rng(0))
        assert sequence.meta["seed"] is None
        assert set(sequence.meta["signs"]) <= {-1, 1}

    @pytest.mark.parametrize("args", [(0, 1, 1.0, 1), (1, 0, 1.0, 1), (1, 1, 0.0, 1), (1, 1, 1.0, 0)])
    def test_invalid(self, args: tuple[int, int, float, int]) -> None:
        """Every parameter must be positive."""
        with pytest.raises(ValueError):
            lower_bound_adversary(*args)

    def test_comparator_hand_case(self) -> None:
        """Signs ``- - -`` on ``d = 2``: coordinate 1 sums to -2, coordinate 0 to -1."""
        point, value = lower_bound_comparator([-1, -1, -1], 2, 3, 2.0)

        assert point == (3, 3)
        assert value == pytest.approx(2.0 * (-1 * 3 + -2 * 3))

    def test_comparator_matches_enumeration(self) -> None:
        """The closed form agrees with brute force on the summed cost."""
        d, n, horizon = 3, 2, 25
        sequence = lower_bound_adversary(d, n, 1.0, horizon, seed=6)
        total = CostOracle(
            domain=sequence.domain,
            evaluate=lambda z: sum(f(z) for f in sequence),
        )

        point, value = lower_bound_comparator(sequence.meta["signs"], d, n)

        assert brute_force_min(total, sequence.domain) == (point, pytest.approx(value))


class TestRandomStream:
    """Tests for random_lnat_stream."""

    def test_separable(self, band2: LNatDomain) -> None:
        """Certified costs with worst-case constants."""
        sequence = random_lnat_stream(band2, FunctionFamily.SEPARABLE_QUADRATIC, 6, seed=2)

        assert sequence.horizon == 6
        assert sequence.meta["certified"] is True
        assert sequence.lipschitz == pytest.approx(max(f.lipschitz or 0.0 for f in sequence))

    def test_zero_scale(self, box2: LNatDomain) -> None:
        """Scale 0 gives zero costs."""
        sequence = random_lnat_stream(box2, "mixed", 3, params={"scale": 0.0})

        assert all(f(z) == 0.0 for f in sequence for z in box2.enumerate_points())

    def test_uncertified_above_cap(self) -> None:
        """Large domains skip per-round certification."""
        domain = LNatDomain.box([0, 0, 0], [9, 9, 9])

        sequence = random_lnat_stream(domain, "separable_quadratic", 2, certify_cap=100)

        assert sequence.meta["certified"] is False

    def test_seeded(self, box2: LNatDomain) -> None:
        """The same seed draws the same stream."""
        values = [
            [f(z) for f in random_lnat_stream(box2, "max_component", 4, seed=9) for z in box2.enumerate_points()]
            for _ in range(2)
        ]

        assert values[0] == values[1]

    def test_invalid_horizon(self, box2: LNatDomain) -> None:
        """T must be positive."""
        with pytest.raises(ValueError):
            random_lnat_stream(box2, "mixed", 0)

    def test_certification_error_message(self) -> None:
        """The error names the round and the witness."""
        report = CheckReport.from_metric("midpoint_convexity", 2.0, 1e-9, ((2, 0), (0, 2)))

        error = GeneratorCertificationError(4, report)

        assert error.t == 4
        assert "round 4" in str(error)
