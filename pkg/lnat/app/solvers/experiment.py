"""Learner-versus-sequence runs and regret accounting."""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from typing import TYPE_CHECKING, Any

import numpy as np

from ..chain import OutOfDomainError
from ..lattice import DEFAULT_ENUMERATION_CAP, EnumerationLimitError, LNatDomain, RationalVector
from ..projection import ProjectionConfig, project, pull_inside
from ..utils.logging import get_logger
from ..utils.streams import experiment_streams
from .learners import bandit_step, full_info_step
from .params import theoretical_bandit_params, theoretical_eta
from .types import (
    Algorithm,
    InvalidParameterError,
    LearnerState,
    RegretTrace,
    RoundOutcome,
    RoundRecord,
)

if TYPE_CHECKING:
    from ..adversaries import CostSequence

logger = get_logger(__name__)


def initial_point(domain: LNatDomain, cfg: ProjectionConfig | None = None) -> RationalVector:
    """Box midpoint projected into the convex hull (exact member)."""
    midpoint = np.array([float(v) for v in domain.box_midpoint])
    return pull_inside(domain, project(domain, midpoint, cfg))


def resolve_step_sizes(
    algorithm: Algorithm,
    domain: LNatDomain,
    horizon: int,
    *,
    bound: float | None,
    lipschitz: float | None,
    eta: float | None = None,
    delta: float | None = None,
) -> tuple[float, float, bool]:
    """Explicit values win; missing ones come from the theoretical formulas.

    Returns:
        ``(eta, delta, delta_clamped)``.

    Raises:
        InvalidParameterError: If a needed constant is unknown.
    """
    d, n = domain.dim, domain.width
    match algorithm:
        case Algorithm.FULL:
            if eta is None:
                if lipschitz is None:
                    raise InvalidParameterError(
                        "Full-information step size needs a Lipschitz constant; set `lipschitz` or `eta`"
                    )
                # A zero constant means a constant cost: every step leaves x alone
                eta = theoretical_eta(d, n, horizon, lipschitz) if lipschitz > 0 else 1.0
            return eta, 1.0 if delta is None else delta, False
        case Algorithm.BANDIT:
            clamped = False
            if eta is None or delta is None:
                if bound is None:
                    raise InvalidParameterError(
                        "Bandit parameters need a bound M on |f|; set `bound` or both `eta` and `delta`"
                    )
                if bound > 0:
                    params = theoretical_bandit_params(d, n, horizon, bound)
                    eta = params.eta if eta is None else eta
                    if delta is None:
                        delta, clamped = params.delta, params.clamped
                else:
                    eta = 1.0 if eta is None else eta
                    delta = 1.0 if delta is None else delta
            return eta, delta, clamped
    raise InvalidParameterError(f"Unknown algorithm: {algorithm}")  # pragma: no cover


def run_experiment(
    algorithm: Algorithm | str,
    sequence: CostSequence,
    domain: LNatDomain | None = None,
    horizon: int | None = None,
    seed: int = 0,
    *,
    projection: ProjectionConfig | None = None,
    eta: float | None = None,
    delta: float | None = None,
    x1: Sequence[int | float | Fraction] | None = None,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
    regret_per_round: bool = False,
) -> RegretTrace:
    """Play a learner against a cost sequence and measure its regret.

    The learner only sees what its feedback model allows; the harness itself
    evaluates every cost on all of K to find the best fixed point in hindsight
    (ties go to the lexicographically smallest point).

    Args:
        algorithm: ``full`` or ``bandit``.
        sequence: Oblivious cost sequence.
        domain: Domain of the costs (defaults to the sequence's).
        horizon: Number of rounds T (defaults to the sequence length).
        seed: Experiment seed; the learner uses its own substream.
        projection: Projection stopping rule.
        eta: Step size override.
        delta: Exploration rate override (bandit).
        x1: Initial iterate (defaults to the projected box midpoint).
        enumeration_cap: Largest |K| for which regret is computed.
        regret_per_round: Fill ``regret_to_date`` on every row, not just the last.

    Returns:
        The regret trace.

    Raises:
        InvalidParameterError: On an invalid horizon or missing constants.
        OutOfDomainError: If ``x1`` is outside the convex hull.
    """
    algorithm = Algorithm(algorithm)
    cfg = projection or ProjectionConfig()
    domain = domain or sequence.domain
    if domain != sequence.domain:
        raise ValueError("Cost sequence is defined on a different domain")
    horizon = sequence.horizon if horizon is None else horizon
    if not 1 <= horizon <= sequence.horizon:
        raise InvalidParameterError(f"T must be between 1 and {sequence.horizon}, got {horizon}")

    step, rate, clamped = resolve_step_sizes(
        algorithm,
        domain,
        horizon,
        bound=sequence.bound,
        lipschitz=sequence.lipschitz,
        eta=eta,
        delta=delta,
    )
    if clamped:
        logger.warning("Exploration rate clamped to 1 (T=%d is small for d=%d)", horizon, domain.dim)

    if x1 is None:
        start = initial_point(domain, cfg)
    else:
        start = tuple(Fraction(v) for v in x1)
        if len(start) != domain.dim or not domain.in_hull(start):
            raise OutOfDomainError(start, "Initial point is outside the domain")

    state = LearnerState(
        domain=domain,
        x=start,
        eta=step,
        rng=experiment_streams(seed).learner,
        delta=rate,
    )

    try:
        points = domain.enumerate_points(enumeration_cap)
    except EnumerationLimitError as e:
        logger.warning("Regret omitted: %s", e)
        points = []
    totals = np.zeros(len(points))

    trace = RegretTrace()
    cumulative = 0.0
    for t in range(1, horizon + 1):
        f = sequence.cost(t)
        outcome: RoundOutcome
        if algorithm is Algorithm.FULL:
            outcome, state = full_info_step(state, f, cfg)
        else:
            outcome, state = bandit_step(state, f, cfg)
        cumulative += outcome.loss

        regret_to_date: float | None = None
        if points:
            totals += np.array([f(z) for z in points])
            if regret_per_round or t == horizon:
                regret_to_date = cumulative - float(totals.min())
        trace.records.append(
            RoundRecord(
                t=t,
                played=outcome.played,
                loss=outcome.loss,
                cumulative_loss=cumulative,
                regret_to_date=regret_to_date,
            )
        )

    if points:
        best = int(np.argmin(totals))
        trace.best_fixed_point = points[best]
        trace.best_fixed_loss = float(totals[best])
        trace.regret = cumulative - trace.best_fixed_loss
    else:
        trace.regret_omitted = True

    trace.metadata = _metadata(
        algorithm, sequence, domain, horizon, seed, cfg, step, rate, clamped, start, trace
    )
    logger.info(
        "Seed %d: %s learner, T=%d, cumulative loss %.6g, regret %s",
        seed,
        algorithm.value,
        horizon,
        cumulative,
        "omitted" if trace.regret is None else f"{trace.regret:.6g}",
    )
    return trace


def _metadata(
    algorithm: Algorithm,
    sequence: CostSequence,
    domain: LNatDomain,
    horizon: int,
    seed: int,
    cfg: ProjectionConfig,
    eta: float,
    delta: float,
    clamped: bool,
    start: RationalVector,
    trace: RegretTrace,
) -> dict[str, Any]:
    return {
        "algorithm": algorithm.value,
        "seed": seed,
        "horizon": horizon,
        "dim": domain.dim,
        "width": domain.width,
        "eta": eta,
        "delta": delta if algorithm is Algorithm.BANDIT else None,
        "delta_clamped": clamped,
        "x1": [str(v) for v in start],
        "bound": sequence.bound,
        "lipschitz": sequence.lipschitz,
        "projection_tolerance": cfg.tolerance,
        "projection_max_sweeps": cfg.max_sweeps,
        "regret_omitted": trace.regret_omitted,
        "best_fixed_point": list(trace.best_fixed_point) if trace.best_fixed_point else None,
        "best_fixed_loss": trace.best_fixed_loss,
        "regret": trace.regret,
        "sequence": dict(sequence.meta),
    }
