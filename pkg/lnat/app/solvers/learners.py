"""Projected subgradient learners for full-information and bandit feedback.

Randomness per round is drawn from ``state.rng`` in a fixed order: the
full-information learner draws the threshold; the bandit learner draws the
chain index and then, only for interior indices, the Rademacher sign.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import replace
from fractions import Fraction

import numpy as np
import numpy.typing as npt

from ..chain import MaximalChain, maximal_chain, round_by_threshold, threshold_index
from ..extension import CostOracle, Subgradient, evaluate_chain, subgradient_from_values
from ..lattice import LatticePoint, RationalVector
from ..projection import ProjectionConfig, project, pull_inside
from ..utils.logging import get_logger
from .types import LearnerState, RoundOutcome

logger = get_logger(__name__)

PointQuery = Callable[[LatticePoint], float]


def _descend(state: LearnerState, step: Subgradient, cfg: ProjectionConfig) -> RationalVector:
    y = np.array([float(v) for v in state.x]) - state.eta * step.as_array()
    return pull_inside(state.domain, project(state.domain, y, cfg))


def full_info_step(
    state: LearnerState,
    f: CostOracle,
    cfg: ProjectionConfig | None = None,
    *,
    tau: float | Fraction | None = None,
) -> tuple[RoundOutcome, LearnerState]:
    """One round with full information.

    Draws the threshold, plays the rounded point, evaluates ``f`` on the
    ``d + 1`` chain points (the played point is one of them) and takes a
    projected subgradient step.

    Args:
        state: Current learner state.
        f: This round's cost.
        cfg: Projection stopping rule.
        tau: Fixed threshold instead of a random draw.

    Returns:
        The round's outcome and the next state.
    """
    cfg = cfg or ProjectionConfig()
    threshold = Fraction(state.rng.random()) if tau is None else Fraction(tau)
    chain = maximal_chain(state.domain, state.x)
    values = evaluate_chain(f, chain)
    played = round_by_threshold(chain, chain.x, threshold)
    loss = values[threshold_index(chain, threshold)]
    g = subgradient_from_values(chain, values)

    x_next = _descend(state, g, cfg)
    logger.debug("Round %d: played %s loss %.6g", state.round, played, loss)
    return RoundOutcome(played=played, loss=loss, estimate=g), replace(
        state, x=x_next, round=state.round + 1
    )


def sampling_probabilities(coeffs: Sequence[Fraction | float], delta: float) -> npt.NDArray[np.float64]:
    """``rho_k = (1 - delta) mu_k + delta / (d + 1)``."""
    mu = np.array([float(c) for c in coeffs])
    return (1.0 - delta) * mu + delta / len(mu)


def bandit_estimate(
    chain: MaximalChain, index: int, value: float, rho: float, sign: int = 0
) -> Subgradient:
    """One-point subgradient estimate after playing chain point ``index``.

    ``index == 0`` puts ``-value / rho`` on ``perm[0]``; ``index == d`` puts
    ``value / rho`` on ``perm[d-1]``; an interior index puts ``2 value / rho``
    on ``perm[index-1]`` for ``sign = +1`` and ``-2 value / rho`` on
    ``perm[index]`` for ``sign = -1``.
    """
    d = chain.dim
    g = [0.0] * d
    if index == 0:
        g[chain.perm[0]] = -value / rho
    elif index == d:
        g[chain.perm[d - 1]] = value / rho
    elif sign > 0:
        g[chain.perm[index - 1]] = 2.0 * value / rho
    elif sign < 0:
        g[chain.perm[index]] = -2.0 * value / rho
    else:
        raise ValueError("Interior chain indices need a sign of +1 or -1")
    return Subgradient(tuple(g))


def bandit_step(
    state: LearnerState,
    f_point: PointQuery,
    cfg: ProjectionConfig | None = None,
    *,
    index: int | None = None,
    sign: int | None = None,
) -> tuple[RoundOutcome, LearnerState]:
    """One round with bandit feedback.

    Samples a chain point with probabilities ``rho``, queries ``f_point`` once
    at it, forms the unbiased estimate and takes a projected step.

    Args:
        state: Current learner state.
        f_point: Point-query access to this round's cost.
        cfg: Projection stopping rule.
        index: Fixed chain index instead of a random draw.
        sign: Fixed Rademacher sign instead of a random draw.
    """
    cfg = cfg or ProjectionConfig()
    chain = maximal_chain(state.domain, state.x)
    rho = sampling_probabilities(chain.coeffs, state.delta)
    d = chain.dim

    if index is None:
        u = state.rng.random()
        index = min(int(np.searchsorted(np.cumsum(rho), u, side="right")), d)
    if 0 < index < d:
        if sign is None:
            sign = 1 if state.rng.random() < 0.5 else -1
    else:
        sign = 0

    played = chain.point(index)
    loss = float(f_point(played))
    estimate = bandit_estimate(chain, index, loss, float(rho[index]), sign)

    x_next = _descend(state, estimate, cfg)
    logger.debug("Round %d: index %d sign %d loss %.6g", state.round, index, sign, loss)
    return RoundOutcome(played=played, loss=loss, estimate=estimate), replace(
        state, x=x_next, round=state.round + 1
    )
