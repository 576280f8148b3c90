"""Tests for run_experiment and its parameter resolution."""

from __future__ import annotations

import itertools
import math
import statistics

import pytest

from lnat.app.adversaries import (
    CostSequence,
    lower_bound_adversary,
    lower_bound_comparator,
    random_lnat_stream,
)
from lnat.app.chain import OutOfDomainError
from lnat.app.experiments import fit_exponent
from lnat.app.lattice import LNatDomain
from lnat.app.solvers import (
    Algorithm,
    InvalidParameterError,
    bandit_regret_bound,
    full_info_regret_bound,
    initial_point,
    resolve_step_sizes,
    run_experiment,
    theoretical_bandit_params,
    theoretical_eta,
)

from ..conftest import constant_oracle, linear_oracle


class TestInitialPoint:
    """Tests for initial_point."""

    def test_box_midpoint(self, box2: LNatDomain) -> None:
        """The midpoint of a box is already feasible."""
        assert initial_point(box2) == (1, 1)

    def test_band_midpoint(self, band2: LNatDomain) -> None:
        """The midpoint of the band lies on its diagonal."""
        x = initial_point(band2)

        assert band2.in_hull(x)
        assert x == (1, 1)


class TestResolveStepSizes:
    """Tests for resolve_step_sizes."""

    def test_full_needs_lipschitz(self, box2: LNatDomain) -> None:
        """Without L-hat or an explicit step the full learner cannot start."""
        with pytest.raises(InvalidParameterError):
            resolve_step_sizes(Algorithm.FULL, box2, 10, bound=None, lipschitz=None)

    def test_bandit_needs_bound(self, box2: LNatDomain) -> None:
        """Without M the bandit learner needs both overrides."""
        with pytest.raises(InvalidParameterError):
            resolve_step_sizes(Algorithm.BANDIT, box2, 10, bound=None, lipschitz=1.0, eta=0.1)

    def test_full_theoretical(self, box2: LNatDomain) -> None:
        """The full learner uses the theoretical step."""
        eta, _, clamped = resolve_step_sizes(Algorithm.FULL, box2, 100, bound=None, lipschitz=2.0)

        assert eta == pytest.approx(theoretical_eta(2, 2, 100, 2.0))
        assert clamped is False

    def test_explicit_values_win(self, box2: LNatDomain) -> None:
        """Overrides are returned untouched."""
        eta, delta, _ = resolve_step_sizes(
            Algorithm.BANDIT, box2, 10, bound=None, lipschitz=None, eta=0.25, delta=0.5
        )

        assert (eta, delta) == (0.25, 0.5)

    def test_bandit_theoretical(self, box2: LNatDomain) -> None:
        """Missing bandit values come from the theoretical formulas."""
        params = theoretical_bandit_params(2, 2, 1000, 3.0)

        eta, delta, clamped = resolve_step_sizes(Algorithm.BANDIT, box2, 1000, bound=3.0, lipschitz=None)

        assert eta == pytest.approx(params.eta)
        assert delta == pytest.approx(params.delta)
        assert clamped is params.clamped


class TestRunExperiment:
    """Tests for run_experiment."""

    def test_constant_sequence_has_zero_regret(self, box2: LNatDomain) -> None:
        """Every point is optimal for a constant cost."""
        sequence = CostSequence.from_oracles([constant_oracle(box2, 1.0)] * 5)

        trace = run_experiment("full", sequence)

        assert trace.horizon == 5
        assert trace.cumulative_loss == pytest.approx(5.0)
        assert trace.regret == pytest.approx(0.0)
        assert trace.best_fixed_point == (0, 0)

    def test_lower_bound_comparator_agrees(self) -> None:
        """Enumeration finds the closed-form best fixed point."""
        sequence = lower_bound_adversary(2, 3, 1.0, 20, seed=7)
        point, value = lower_bound_comparator(sequence.meta["signs"], 2, 3)

        trace = run_experiment(Algorithm.FULL, sequence, seed=7)

        assert trace.best_fixed_point == point
        assert trace.best_fixed_loss == pytest.approx(value)
        assert trace.regret == pytest.approx(trace.cumulative_loss - value)

    def test_deterministic(self) -> None:
        """The same seed replays the same game."""
        runs = [
            run_experiment("bandit", lower_bound_adversary(2, 2, 1.0, 30, seed=3), seed=3)
            for _ in range(2)
        ]

        assert runs[0].losses == runs[1].losses
        assert [r.played for r in runs[0].records] == [r.played for r in runs[1].records]
        assert runs[0].regret == runs[1].regret

    def test_cumulative_loss_is_prefix_sum(self) -> None:
        """Each row accumulates the losses so far."""
        trace = run_experiment("full", lower_bound_adversary(3, 2, 1.0, 25, seed=1), seed=1)

        expected = list(itertools.accumulate(trace.losses))
        assert [r.cumulative_loss for r in trace.records] == pytest.approx(expected)
        assert [r.t for r in trace.records] == list(range(1, 26))

    def test_played_points_are_members(self, band2: LNatDomain) -> None:
        """Every played point belongs to K."""
        sequence = CostSequence.from_oracles([linear_oracle(band2, (1.0, -0.5))] * 15)

        for algorithm in Algorithm:
            trace = run_experiment(algorithm, sequence, seed=2)
            assert all(band2.contains(r.played) for r in trace.records)

    def test_regret_per_round(self) -> None:
        """Per-round regret ends at the final regret."""
        trace = run_experiment(
            "full", lower_bound_adversary(2, 2, 1.0, 12, seed=5), seed=5, regret_per_round=True
        )

        assert all(r.regret_to_date is not None for r in trace.records)
        assert trace.records[-1].regret_to_date == pytest.approx(trace.regret)

    def test_final_row_only(self) -> None:
        """By default only the last row carries regret."""
        trace = run_experiment("full", lower_bound_adversary(2, 2, 1.0, 12, seed=5), seed=5)

        assert all(r.regret_to_date is None for r in trace.records[:-1])
        assert trace.records[-1].regret_to_date is not None

    def test_regret_omitted_above_cap(self) -> None:
        """Large domains report losses only."""
        trace = run_experiment("full", lower_bound_adversary(2, 2, 1.0, 6), enumeration_cap=4)

        assert trace.regret is None
        assert trace.regret_omitted is True
        assert trace.metadata["regret_omitted"] is True
        assert trace.horizon == 6

    def test_shorter_horizon(self) -> None:
        """A prefix of the sequence can be played."""
        trace = run_experiment("full", lower_bound_adversary(1, 2, 1.0, 10), horizon=4)

        assert trace.horizon == 4
        assert trace.metadata["horizon"] == 4

    @pytest.mark.parametrize("horizon", [0, 11])
    def test_horizon_range(self, horizon: int) -> None:
        """T lies between 1 and the sequence length."""
        with pytest.raises(InvalidParameterError):
            run_experiment("full", lower_bound_adversary(1, 2, 1.0, 10), horizon=horizon)

    def test_initial_point_outside(self, box2: LNatDomain) -> None:
        """An infeasible start is rejected."""
        sequence = CostSequence.from_oracles([constant_oracle(box2)])

        with pytest.raises(OutOfDomainError):
            run_experiment("full", sequence, x1=(3, 0))

    def test_other_domain(self, box2: LNatDomain, band2: LNatDomain) -> None:
        """The sequence must live on the given domain."""
        sequence = CostSequence.from_oracles([constant_oracle(box2)])

        with pytest.raises(ValueError):
            run_experiment("full", sequence, domain=band2)

    def test_metadata(self) -> None:
        """Parameters used are recorded with the trace."""
        trace = run_experiment("bandit", lower_bound_adversary(2, 2, 1.0, 8, seed=4), seed=4)

        assert trace.metadata["algorithm"] == "bandit"
        assert trace.metadata["seed"] == 4
        assert trace.metadata["x1"] == ["1", "1"]
        assert 0 < trace.metadata["delta"] <= 1
        assert trace.metadata["sequence"]["kind"] == "lower_bound"

    @pytest.mark.slow
    def test_mean_regret_within_guarantee(self) -> None:
        """Mean full-information regret on the lower-bound game stays under the guarantee."""
        d, n, horizon = 2, 3, 64
        regrets = []
        for seed in range(40):
            trace = run_experiment("full", lower_bound_adversary(d, n, 1.0, horizon, seed=seed), seed=seed)
            assert trace.regret is not None
            regrets.append(trace.regret)

        assert statistics.fmean(regrets) <= full_info_regret_bound(d, n, horizon, 1.0)
        assert statistics.fmean(regrets) > 0

    @pytest.mark.slow
    @pytest.mark.parametrize("source", ["lower_bound", "random"])
    def test_bandit_regret_within_guarantee(self, source: str) -> None:
        """Mean bandit regret stays under ``6 d N M T^(2/3)``."""
        d, n, horizon = 2, 3, 64
        regrets = []
        bound = 0.0
        for seed in range(40):
            if source == "lower_bound":
                sequence = lower_bound_adversary(d, n, 1.0, horizon, seed=seed)
            else:
                sequence = random_lnat_stream(LNatDomain.box([0] * d, [n] * d), "mixed", horizon, seed=seed)
            assert sequence.bound is not None
            bound = max(bound, sequence.bound)
            trace = run_experiment("bandit", sequence, seed=seed)
            assert trace.regret is not None
            regrets.append(trace.regret)

        assert statistics.fmean(regrets) <= bandit_regret_bound(d, n, horizon, bound)

    @pytest.mark.slow
    def test_random_stream_full_info_within_guarantee(self) -> None:
        """The full-information guarantee also holds on random L-natural streams."""
        domain = LNatDomain.create([0, 0, 0], [3, 3, 3], {(0, 1): 1, (1, 2): 2})
        horizon = 64
        regrets = []
        for seed in range(40):
            sequence = random_lnat_stream(domain, "mixed", horizon, seed=seed)
            assert sequence.lipschitz is not None
            trace = run_experiment("full", sequence, seed=seed)
            assert trace.regret is not None
            regrets.append(trace.regret / full_info_regret_bound(3, domain.width, horizon, sequence.lipschitz))

        assert statistics.fmean(regrets) <= 1.0


class TestLowerBoundScaling:
    """Regret of actual runs against the lower-bound game.

    The learner's expected loss is zero whatever it plays, so the expected
    regret is ``L N E|S| / 2`` summed over coordinates, about
    ``0.4 L N sqrt(d T)``.
    """

    @pytest.mark.slow
    def test_slope_in_horizon(self) -> None:
        """``log R`` against ``log T`` has slope near 1/2."""
        horizons = [16, 64, 256]
        means = []
        for horizon in horizons:
            regrets = []
            for seed in range(300):
                trace = run_experiment("full", lower_bound_adversary(1, 1, 1.0, horizon, seed=seed), seed=seed)
                assert trace.regret is not None
                regrets.append(trace.regret)
            means.append(statistics.fmean(regrets))

        slope, _ = fit_exponent(horizons, means)

        assert 0.25 <= slope <= 0.75

    @pytest.mark.slow
    @pytest.mark.parametrize(("d", "n"), [(1, 1), (1, 3), (2, 3), (3, 1)])
    def test_normalized_by_width_and_dimension(self, d: int, n: int) -> None:
        """``R / (L N sqrt(d T))`` stays in one band across widths and dimensions."""
        horizon, lipschitz = 64, 2.0
        regrets = []
        for seed in range(200):
            sequence = lower_bound_adversary(d, n, lipschitz, horizon, seed=seed)
            trace = run_experiment("full", sequence, seed=seed)
            assert trace.regret is not None
            regrets.append(trace.regret)

        normalized = statistics.fmean(regrets) / (lipschitz * n * math.sqrt(d * horizon))

        assert 0.2 <= normalized <= 0.65
