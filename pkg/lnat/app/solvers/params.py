"""Step sizes and regret bounds for known horizons."""

from __future__ import annotations

import math
from typing import NamedTuple

from .types import InvalidParameterError


class BanditParameters(NamedTuple):
    """Bandit step size, exploration rate and whether the rate was clamped to 1."""

    eta: float
    delta: float
    clamped: bool


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if value <= 0:
            raise InvalidParameterError(f"{name} must be positive, got {value}")


def theoretical_eta(d: int, n: int, horizon: int, lipschitz: float) -> float:
    """Full-information step size ``sqrt(d N^2 / (T (1.5 L)^2))``.

    Args:
        d: Dimension.
        n: Domain width N.
        horizon: Number of rounds T.
        lipschitz: Max-norm Lipschitz constant L-hat.
    """
    _require_positive(d=d, N=n, T=horizon, lipschitz=lipschitz)
    return math.sqrt(d * n**2 / (horizon * (1.5 * lipschitz) ** 2))


def theoretical_bandit_params(d: int, n: int, horizon: int, bound: float) -> BanditParameters:
    """Bandit parameters ``delta = min(1, d / T^(1/3))`` and ``eta = N / (4 M T^(2/3))``."""
    _require_positive(d=d, N=n, T=horizon, M=bound)
    root = math.cbrt(horizon)
    raw_delta = d / root
    return BanditParameters(
        eta=n / (4 * bound * root**2),
        delta=min(1.0, raw_delta),
        clamped=raw_delta > 1,
    )


def full_info_regret_bound(d: int, n: int, horizon: int, lipschitz: float) -> float:
    """Expected-regret guarantee ``0.75 N L sqrt(d T)`` of the full-information learner."""
    _require_positive(d=d, N=n, T=horizon, lipschitz=lipschitz)
    return 0.75 * n * lipschitz * math.sqrt(d * horizon)


def bandit_regret_bound(d: int, n: int, horizon: int, bound: float) -> float:
    """Expected-regret guarantee ``6 d N M T^(2/3)`` of the bandit learner."""
    _require_positive(d=d, N=n, T=horizon, M=bound)
    return 6 * d * n * bound * math.cbrt(horizon) ** 2
