"""Regret-versus-horizon scaling study."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from ..config import ConfigError, ExperimentConfig, LnatSettings
from ..utils.logging import get_logger
from .runner import ExperimentRunner, RunSummary
from .traces import write_yaml

logger = get_logger(__name__)


@dataclass
class SweepPoint:
    """Aggregate regret at one horizon."""

    horizon: int
    mean_regret: float | None
    std_regret: float | None
    theoretical_bound: float | None
    # mean regret over L-hat * N * sqrt(d T)
    normalized: float | None


@dataclass
class SweepResult:
    """All horizons plus the fitted log-log slope."""

    points: list[SweepPoint] = field(default_factory=list)
    slope: float | None = None
    intercept: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "points": [asdict(p) for p in self.points],
            "slope": self.slope,
            "intercept": self.intercept,
        }


def fit_exponent(horizons: Sequence[int], regrets: Sequence[float]) -> tuple[float, float]:
    """Least-squares fit of ``log R = slope * log T + intercept``.

    Raises:
        ValueError: With fewer than two horizons or a nonpositive regret.
    """
    if len(horizons) < 2:
        raise ValueError("Need at least two horizons to fit an exponent")
    if any(r <= 0 for r in regrets):
        raise ValueError("Regrets must be positive to fit on a log scale")
    slope, intercept = np.polyfit(np.log(horizons), np.log(regrets), 1)
    return float(slope), float(intercept)


def _point(summary: RunSummary) -> SweepPoint:
    normalized = None
    if summary.mean_regret is not None and summary.lipschitz:
        scale = summary.lipschitz * summary.width * math.sqrt(summary.dim * summary.horizon)
        normalized = summary.mean_regret / scale
    return SweepPoint(
        horizon=summary.horizon,
        mean_regret=summary.mean_regret,
        std_regret=summary.std_regret,
        theoretical_bound=summary.theoretical_bound,
        normalized=normalized,
    )


async def run_sweep(config: ExperimentConfig, settings: LnatSettings, grid: Sequence[int]) -> SweepResult:
    """Run the experiment at every horizon of ``grid`` and fit the exponent.

    Each horizon writes into ``<output>/T_<T>/``; ``sweep.yaml`` goes to the
    output root.

    Raises:
        ConfigError: On an empty or invalid grid.
        SeedFailedError: If any seed fails.
    """
    if not grid or any(t < 1 for t in grid):
        raise ConfigError("T grid must be a nonempty list of positive horizons")
    root = config.output_dir(settings)
    result = SweepResult()
    for horizon in sorted(set(grid)):
        logger.info("Sweep: T=%d", horizon)
        sub = config.model_copy(update={"horizon": horizon, "output": root / f"T_{horizon}"})
        summary = await ExperimentRunner(sub, settings).run()
        result.points.append(_point(summary))

    means = [p.mean_regret for p in result.points]
    if all(m is not None for m in means):
        try:
            result.slope, result.intercept = fit_exponent(
                [p.horizon for p in result.points], [m for m in means if m is not None]
            )
        except ValueError as e:
            logger.warning("No exponent fitted: %s", e)
    root.mkdir(parents=True, exist_ok=True)
    write_yaml(result.to_dict(), root / "sweep.yaml")
    if result.slope is not None:
        logger.info("Fitted regret exponent %.3f", result.slope)
    return result
