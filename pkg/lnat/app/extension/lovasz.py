"""Convex extension values and subgradients along maximal chains."""

from __future__ import annotations

import itertools
from collections.abc import Callable, Sequence
from fractions import Fraction

from ..chain import MaximalChain
from ..lattice import DEFAULT_ENUMERATION_CAP, LatticePoint, LNatDomain
from ..utils.logging import get_logger
from .types import CostOracle, OracleConstants, Subgradient

logger = get_logger(__name__)


def evaluate_chain(f: Callable[[LatticePoint], float], chain: MaximalChain) -> tuple[float, ...]:
    """``f`` at the ``d + 1`` chain points, in chain order."""
    return tuple(float(f(z)) for z in chain.points)


def extension_from_values(chain: MaximalChain, values: Sequence[float]) -> float:
    """``sum_k mu_k * values[k]``."""
    return float(sum(float(mu) * v for mu, v in zip(chain.coeffs, values, strict=True)))


def subgradient_from_values(chain: MaximalChain, values: Sequence[float]) -> Subgradient:
    """``g[perm[k-1]] = values[k] - values[k-1]`` for ``k = 1 .. d``."""
    g = [0.0] * chain.dim
    for k in range(1, chain.dim + 1):
        g[chain.perm[k - 1]] = values[k] - values[k - 1]
    return Subgradient(tuple(g))


def extension_value(f: CostOracle, chain: MaximalChain) -> float:
    """Value of the convex extension at the chain's point.

    Uses exactly ``d + 1`` oracle calls. Oracle errors propagate.
    """
    return extension_from_values(chain, evaluate_chain(f, chain))


def subgradient(f: CostOracle, chain: MaximalChain) -> Subgradient:
    """Subgradient of the convex extension at the chain's point."""
    return subgradient_from_values(chain, evaluate_chain(f, chain))


def expected_rounding_value(f: CostOracle, chain: MaximalChain) -> float:
    """Exact ``E[f(round_by_threshold(x, tau))]`` for ``tau ~ Uniform[0, 1]``.

    Integrates the piecewise-constant integrand over the breakpoints given by
    the fractional parts of ``x``; independent of the chain weights.
    """
    r = [v - b for v, b in zip(chain.x, chain.base, strict=True)]
    breaks = sorted({Fraction(0), Fraction(1), *r})
    seen: dict[LatticePoint, float] = {}
    total = Fraction(0)
    weighted = 0.0
    for low, high in itertools.pairwise(breaks):
        length = high - low
        if length == 0:
            continue
        tau = (low + high) / 2
        z = tuple(b + (1 if rv > tau else 0) for rv, b in zip(r, chain.base, strict=True))
        if z not in seen:
            seen[z] = f(z)
        weighted += float(length) * seen[z]
        total += length
    if total != 1:  # pragma: no cover - breakpoints always cover [0, 1]
        raise ArithmeticError("Breakpoint segments do not cover [0, 1]")
    return weighted


def certify_constants(
    domain: LNatDomain,
    fn: Callable[[LatticePoint], float],
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> OracleConstants:
    """Measure M and the max-norm Lipschitz constant by exhaustive scan.

    Only unit moves ``v`` in ``{-1, 0, 1}^d`` are compared: any two points of an
    L-natural set are joined inside the set by ``||z - z'||_inf`` such moves.

    Raises:
        EnumerationLimitError: If the domain exceeds ``cap`` points.
    """
    points = domain.enumerate_points(cap)
    values = {z: float(fn(z)) for z in points}
    bound = max(abs(v) for v in values.values())
    lipschitz = 0.0
    moves = [v for v in itertools.product((-1, 0, 1), repeat=domain.dim) if any(v)]
    for z, value in values.items():
        for move in moves:
            neighbour = tuple(a + b for a, b in zip(z, move, strict=True))
            other = values.get(neighbour)
            if other is not None:
                lipschitz = max(lipschitz, abs(other - value))
    logger.debug("Certified M=%.6g L=%.6g over %d points", bound, lipschitz, len(points))
    return OracleConstants(bound=bound, lipschitz=lipschitz)


def with_certified_constants(
    oracle: CostOracle, cap: int = DEFAULT_ENUMERATION_CAP
) -> CostOracle:
    """Copy of ``oracle`` whose missing constants are filled by exhaustive scan."""
    if oracle.bound is not None and oracle.lipschitz is not None:
        return oracle
    measured = certify_constants(oracle.domain, oracle.evaluate, cap)
    return CostOracle(
        domain=oracle.domain,
        evaluate=oracle.evaluate,
        bound=oracle.bound if oracle.bound is not None else measured.bound,
        lipschitz=oracle.lipschitz if oracle.lipschitz is not None else measured.lipschitz,
        name=oracle.name,
    )
