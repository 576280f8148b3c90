"""Replicated experiment runs.

Seeds fan out over a process pool; each worker rebuilds its cost sequence from
the (picklable) config and writes its own trace. The summary is written once
all seeds have finished.
"""

from __future__ import annotations

import asyncio
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
import scipy.stats as stats

from ..config import ConfigError, ExperimentConfig, LnatSettings
from ..solvers import (
    Algorithm,
    InvalidParameterError,
    bandit_regret_bound,
    full_info_regret_bound,
    resolve_step_sizes,
    run_experiment,
)
from ..utils.logging import get_logger
from .functions import build_sequence
from .traces import emit_trace, write_yaml

logger = get_logger(__name__)


class SeedFailedError(Exception):
    """Raised when one seed of a run fails."""

    def __init__(self, seed: int, cause: BaseException) -> None:
        self.seed = seed
        self.cause = cause
        super().__init__(f"Seed {seed} failed: {type(cause).__name__}: {cause}")


@dataclass(frozen=True)
class SeedResult:
    """What one seed reports back to the summary."""

    seed: int
    regret: float | None
    cumulative_loss: float
    best_fixed_loss: float | None
    trace: str
    eta: float
    delta: float | None
    delta_clamped: bool


@dataclass
class RunSummary:
    """Aggregate over seeds."""

    algorithm: str
    horizon: int
    dim: int
    width: int
    bound: float | None
    lipschitz: float | None
    seeds: list[int]
    mean_regret: float | None
    std_regret: float | None
    confidence: float
    regret_upper: float | None
    theoretical_bound: float | None
    ratio: float | None
    wall_time: float
    results: list[SeedResult] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["results"] = [asdict(r) for r in self.results]
        return data


def trace_path(output_dir: Path, seed: int) -> Path:
    return output_dir / f"seed_{seed}.csv"


def run_seed(config: ExperimentConfig, settings: LnatSettings, seed: int, output_dir: Path) -> SeedResult:
    """Run one seed and write its trace."""
    sequence = build_sequence(config, seed, settings)
    trace = run_experiment(
        config.algorithm,
        sequence,
        horizon=config.horizon,
        seed=seed,
        projection=config.projection(settings),
        eta=config.eta,
        delta=config.delta,
        x1=config.x1,
        enumeration_cap=settings.enumeration_cap,
        regret_per_round=config.regret_per_round,
    )
    path = trace_path(output_dir, seed)
    emit_trace(trace, path)
    meta = trace.metadata
    return SeedResult(
        seed=seed,
        regret=trace.regret,
        cumulative_loss=trace.cumulative_loss,
        best_fixed_loss=trace.best_fixed_loss,
        trace=path.name,
        eta=meta["eta"],
        delta=meta["delta"],
        delta_clamped=meta["delta_clamped"],
    )


def regret_statistics(regrets: list[float], confidence: float = 0.95) -> tuple[float, float, float]:
    """Mean, sample standard deviation and a one-sided upper confidence bound.

    The bound is ``mean + z * std / sqrt(n)`` with ``z`` the normal quantile
    at ``confidence``.

    Raises:
        ValueError: If ``regrets`` is empty or ``confidence`` is outside (0, 1).
    """
    if not regrets:
        raise ValueError("regret_statistics needs at least one value")
    if not 0 < confidence < 1:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    values = np.asarray(regrets, dtype=float)
    mean = float(values.mean())
    std = float(values.std(ddof=1)) if len(values) > 1 else 0.0
    z = float(stats.norm.ppf(confidence))
    return mean, std, mean + z * std / math.sqrt(len(values))


def theoretical_bound(
    algorithm: Algorithm, d: int, n: int, horizon: int, *, bound: float | None, lipschitz: float | None
) -> float | None:
    """Expected-regret guarantee for the run's constants (``None`` if a constant is unknown)."""
    try:
        match algorithm:
            case Algorithm.FULL:
                return None if lipschitz is None else full_info_regret_bound(d, n, horizon, lipschitz)
            case Algorithm.BANDIT:
                return None if bound is None else bandit_regret_bound(d, n, horizon, bound)
    except InvalidParameterError:
        # zero constants give a vacuous bound
        return None
    return None  # pragma: no cover


class ExperimentRunner:
    """Runs every seed of an experiment config and writes the summary."""

    def __init__(self, config: ExperimentConfig, settings: LnatSettings) -> None:
        self._config = config
        self._settings = settings
        self._workers = config.workers or settings.workers
        self._output_dir = config.output_dir(settings)

    @property
    def output_dir(self) -> Path:
        return self._output_dir

    def prepare(self) -> tuple[int, int, float | None, float | None]:
        """Validate the parts of the config that depend on the built sequence.

        Returns:
            ``(d, N, M, L-hat)`` of the first seed's sequence.

        Raises:
            ConfigError: If step sizes cannot be derived or ``x1`` does not fit.
        """
        config = self._config
        sequence = build_sequence(config, config.seed_list[0], self._settings)
        domain = sequence.domain
        try:
            resolve_step_sizes(
                config.algorithm,
                domain,
                config.horizon,
                bound=sequence.bound,
                lipschitz=sequence.lipschitz,
                eta=config.eta,
                delta=config.delta,
            )
        except InvalidParameterError as e:
            raise ConfigError(str(e)) from e
        if config.x1 is not None:
            start = tuple(Fraction(v) for v in config.x1)
            if len(start) != domain.dim or not domain.in_hull(start):
                raise ConfigError(f"x1={config.x1} is outside the domain")
        return domain.dim, domain.width, sequence.bound, sequence.lipschitz

    async def run(self) -> RunSummary:
        """Run all seeds, then write ``summary.yaml``.

        Raises:
            ConfigError: If the config cannot drive a run.
            SeedFailedError: For the first seed (in seed order) that failed.
        """
        config = self._config
        seeds = config.seed_list
        d, n, bound, lipschitz = self.prepare()
        self._output_dir.mkdir(parents=True, exist_ok=True)
        logger.info(
            "Running %d seed(s) of %s learner, T=%d, workers=%d, output %s",
            len(seeds),
            config.algorithm.value,
            config.horizon,
            self._workers,
            self._output_dir,
        )

        started = time.perf_counter()
        if self._workers == 1:
            results = [self._run_inline(seed) for seed in seeds]
        else:
            results = await self._run_pool(seeds)
        elapsed = time.perf_counter() - started

        regrets = [r.regret for r in results if r.regret is not None]
        mean: float | None = None
        std: float | None = None
        upper: float | None = None
        if len(regrets) == len(results):
            mean, std, upper = regret_statistics(regrets, config.confidence)
        else:
            logger.warning("Regret omitted for some seeds; summary reports losses only")
        limit = theoretical_bound(config.algorithm, d, n, config.horizon, bound=bound, lipschitz=lipschitz)
        summary = RunSummary(
            algorithm=config.algorithm.value,
            horizon=config.horizon,
            dim=d,
            width=n,
            bound=bound,
            lipschitz=lipschitz,
            seeds=seeds,
            mean_regret=mean,
            std_regret=std,
            confidence=config.confidence,
            regret_upper=upper,
            theoretical_bound=limit,
            ratio=mean / limit if mean is not None and limit else None,
            wall_time=elapsed,
            results=results,
        )
        write_yaml(summary.to_dict(), self._output_dir / "summary.yaml")
        logger.info(
            "Finished %d seed(s) in %.2fs; mean regret %s",
            len(seeds),
            elapsed,
            "omitted" if mean is None else f"{mean:.6g}",
        )
        return summary

    def _run_inline(self, seed: int) -> SeedResult:
        try:
            return run_seed(self._config, self._settings, seed, self._output_dir)
        except Exception as e:
            logger.exception("Seed %d failed", seed)
            raise SeedFailedError(seed, e) from e

    async def _run_pool(self, seeds: list[int]) -> list[SeedResult]:
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=self._workers) as pool:
            futures = [
                loop.run_in_executor(pool, run_seed, self._config, self._settings, seed, self._output_dir)
                for seed in seeds
            ]
            outcomes = await asyncio.gather(*futures, return_exceptions=True)
        results: list[SeedResult] = []
        for seed, outcome in zip(seeds, outcomes, strict=True):
            if isinstance(outcome, BaseException):
                logger.error("Seed %d failed: %s", seed, outcome)
                raise SeedFailedError(seed, outcome) from outcome
            results.append(outcome)
        return results
