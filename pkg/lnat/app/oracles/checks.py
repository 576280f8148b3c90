"""Brute-force and property checks used to certify the other modules.

Each check recomputes the quantity it certifies from first principles
(enumeration, direct sums over outcome tables) instead of reusing the helper
under test, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np
import numpy.typing as npt

from ..chain import MaximalChain, maximal_chain
from ..extension import CostOracle, expected_rounding_value, extension_value, subgradient
from ..lattice import DEFAULT_ENUMERATION_CAP, EnumerationLimitError, LatticePoint, LNatDomain
from ..solvers import bandit_estimate, sampling_probabilities
from ..utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_TOLERANCE = 1e-9
DENSE_LOOKUP_LIMIT = 10_000_000


@dataclass
class CheckReport:
    """Outcome of one check.

    ``passed`` is true iff ``metric`` (the worst violation) is at most
    ``tolerance``. ``witness`` carries a counterexample on failure.
    """

    name: str
    passed: bool
    metric: float
    tolerance: float
    witness: Any = None
    checked: int = 0
    details: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_metric(
        cls,
        name: str,
        metric: float,
        tolerance: float,
        witness: Any = None,
        checked: int = 0,
        details: dict[str, Any] | None = None,
    ) -> CheckReport:
        passed = metric <= tolerance
        return cls(
            name=name,
            passed=passed,
            metric=metric,
            tolerance=tolerance,
            witness=None if passed else witness,
            checked=checked,
            details=details or {},
        )

    def to_dict(self) -> dict[str, Any]:
        """Plain-data form for YAML reports."""
        return {
            "name": self.name,
            "passed": self.passed,
            "metric": self.metric,
            "tolerance": self.tolerance,
            "checked": self.checked,
            "witness": _plain(self.witness),
            "details": _plain(self.details),
        }


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_plain(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def brute_force_min(
    f: CostOracle, domain: LNatDomain, cap: int = DEFAULT_ENUMERATION_CAP
) -> tuple[LatticePoint, float]:
    """Exact minimizer of ``f`` over K; ties go to the lexicographically smallest point.

    Raises:
        EnumerationLimitError: If K exceeds ``cap`` points.
    """
    best_point: LatticePoint | None = None
    best_value = float("inf")
    for z in domain.enumerate_points(cap):
        value = f(z)
        if value < best_value:
            best_point, best_value = z, value
    assert best_point is not None  # K is never empty
    return best_point, best_value


def _midpoint_violation(
    f: CostOracle, p: LatticePoint, q: LatticePoint, values: dict[LatticePoint, float]
) -> float:
    sums = [a + b for a, b in zip(p, q, strict=True)]
    up = tuple(-(-s // 2) for s in sums)
    down = tuple(s // 2 for s in sums)
    f_up = values[up] if up in values else f(up)
    f_down = values[down] if down in values else f(down)
    return f_up + f_down - values[p] - values[q]


def check_midpoint_convexity(
    f: CostOracle,
    domain: LNatDomain | None = None,
    *,
    cap: int = 10_000,
    sample_budget: int = 100_000,
    rng: np.random.Generator | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CheckReport:
    """Discrete midpoint convexity ``f(p) + f(q) >= f(ceil((p+q)/2)) + f(floor((p+q)/2))``.

    All pairs are checked when K has at most ``cap`` points; otherwise
    ``sample_budget`` random pairs drawn by rejection from the bounding box.
    """
    domain = domain or f.domain
    try:
        points = domain.enumerate_points(cap)
    except EnumerationLimitError:
        return _sampled_midpoint_check(f, domain, sample_budget, rng, tolerance)

    values = np.array([f(z) for z in points])
    shape = tuple(u - lo + 1 for lo, u in zip(domain.lower, domain.upper, strict=True))
    if domain.box_size > DENSE_LOOKUP_LIMIT:
        return _pairwise_midpoint_check(f, points, values.tolist(), tolerance)

    # Dense box-indexed value table; midpoints of members are members
    offset = np.asarray(domain.lower)
    coords = np.asarray(points) - offset
    table = np.full(shape, np.nan)
    table[tuple(coords.T)] = values

    worst = 0.0
    witness: Any = None
    for a in range(len(points)):
        sums = coords[a] + coords[a:] + 2 * offset
        up = -((-sums) // 2) - offset
        down = sums // 2 - offset
        gap = table[tuple(up.T)] + table[tuple(down.T)] - values[a] - values[a:]
        if np.isnan(gap).any():
            bad = int(np.flatnonzero(np.isnan(gap))[0])
            return CheckReport.from_metric(
                "midpoint_convexity",
                float("inf"),
                tolerance,
                (points[a], points[a + bad]),
                details={"reason": "rounded midpoint outside the domain"},
            )
        b = int(np.argmax(gap))
        if gap[b] > worst:
            worst, witness = float(gap[b]), (points[a], points[a + b])

    n = len(points)
    logger.debug("Midpoint check over %d points: worst violation %.3g", n, worst)
    return CheckReport.from_metric(
        "midpoint_convexity", worst, tolerance, witness, checked=n * (n + 1) // 2
    )


def _pairwise_midpoint_check(
    f: CostOracle, points: list[LatticePoint], values: list[float], tolerance: float
) -> CheckReport:
    lookup = dict(zip(points, values, strict=True))
    worst = 0.0
    witness: Any = None
    for p, q in itertools.combinations(points, 2):
        violation = _midpoint_violation(f, p, q, lookup)
        if violation > worst:
            worst, witness = violation, (p, q)
    return CheckReport.from_metric(
        "midpoint_convexity", worst, tolerance, witness, checked=len(points) ** 2 // 2
    )


def _sample_member(domain: LNatDomain, rng: np.random.Generator) -> LatticePoint:
    while True:
        z = tuple(int(v) for v in rng.integers(domain.lower, np.asarray(domain.upper) + 1))
        if domain.contains(z):
            return z


def _sampled_midpoint_check(
    f: CostOracle,
    domain: LNatDomain,
    budget: int,
    rng: np.random.Generator | None,
    tolerance: float,
) -> CheckReport:
    rng = rng or np.random.default_rng(0)
    worst = 0.0
    witness: Any = None
    values: dict[LatticePoint, float] = {}
    for _ in range(budget):
        p, q = _sample_member(domain, rng), _sample_member(domain, rng)
        for z in (p, q):
            if z not in values:
                values[z] = f(z)
        violation = _midpoint_violation(f, p, q, values)
        if violation > worst:
            worst, witness = violation, (p, q)
    return CheckReport.from_metric(
        "midpoint_convexity",
        worst,
        tolerance,
        witness,
        checked=budget,
        details={"sampled": True},
    )


def check_subgradient(
    f: CostOracle,
    domain: LNatDomain | None,
    x: Sequence[int | float | Fraction],
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CheckReport:
    """Subgradient inequality ``f(y) >= fhat(x) + g . (y - x)`` for every ``y`` in K."""
    domain = domain or f.domain
    chain = maximal_chain(domain, x)
    value = extension_value(f, chain)
    g = subgradient(f, chain).as_array()
    xf = np.array([float(v) for v in chain.x])

    points = domain.enumerate_points(cap)
    worst = 0.0
    witness: Any = None
    for y in points:
        gap = value + float(g @ (np.asarray(y, dtype=float) - xf)) - f(y)
        if gap > worst:
            worst, witness = gap, y
    l1_norm = float(np.abs(g).sum())
    details: dict[str, Any] = {"extension_value": value, "subgradient": g.tolist(), "l1_norm": l1_norm}
    if f.lipschitz:
        # Reported, not enforced: the 1.5 L-hat norm bound fails for some L-natural costs
        details["norm_ratio"] = l1_norm / (1.5 * f.lipschitz)
    return CheckReport.from_metric("subgradient", worst, tolerance, witness, checked=len(points), details=details)


@dataclass(frozen=True)
class EstimatorOutcome:
    """One cell of the bandit estimator's outcome table."""

    index: int
    sign: int
    probability: float
    estimate: tuple[float, ...]


def _chain_values(f: CostOracle, chain: MaximalChain) -> list[float]:
    return [f(z) for z in chain.points]


def _local_probabilities(chain: MaximalChain, delta: float) -> npt.NDArray[np.float64]:
    mu = np.array([float(c) for c in chain.coeffs])
    return (1.0 - delta) * mu + delta / (chain.dim + 1)


def estimator_outcomes(f: CostOracle, x: Sequence[int | float | Fraction], delta: float) -> list[EstimatorOutcome]:
    """Full outcome table of the bandit estimator at ``x``."""
    chain = maximal_chain(f.domain, x)
    values = _chain_values(f, chain)
    rho = _local_probabilities(chain, delta)
    d = chain.dim
    table: list[EstimatorOutcome] = []
    for index in range(d + 1):
        signs = (1, -1) if 0 < index < d else (0,)
        for sign in signs:
            estimate = bandit_estimate(chain, index, values[index], float(rho[index]), sign)
            table.append(
                EstimatorOutcome(
                    index=index,
                    sign=sign,
                    probability=float(rho[index]) / len(signs),
                    estimate=estimate.values,
                )
            )
    return table


def check_estimator_moments(
    f: CostOracle,
    x: Sequence[int | float | Fraction],
    delta: float,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CheckReport:
    """Unbiasedness and second-moment bound of the bandit estimator.

    Computes the exact mean of the estimate over the outcome table and
    compares it with the chain-difference subgradient; the second moment is
    reported normalized by ``16 M^2 d^2 / delta`` and must not exceed 1. When
    ``f`` declares no bound, M is the largest ``|f|`` on the chain points.
    """
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    chain = maximal_chain(f.domain, x)
    values = _chain_values(f, chain)
    d = chain.dim

    exact = np.zeros(d)
    for k in range(1, d + 1):
        exact[chain.perm[k - 1]] = values[k] - values[k - 1]

    table = estimator_outcomes(f, x, delta)
    mean = np.zeros(d)
    second = 0.0
    for cell in table:
        vec = np.asarray(cell.estimate)
        mean += cell.probability * vec
        second += cell.probability * float(vec @ vec)

    bound = f.bound if f.bound is not None else max(abs(v) for v in values)
    limit = 16 * bound**2 * d**2 / delta
    ratio = second / limit if limit > 0 else (0.0 if second == 0 else float("inf"))
    bias = float(np.max(np.abs(mean - exact)))
    rho_gap = float(
        np.max(np.abs(_local_probabilities(chain, delta) - sampling_probabilities(chain.coeffs, delta)))
    )
    metric = max(bias, rho_gap, ratio - 1.0)
    return CheckReport.from_metric(
        "estimator_moments",
        max(metric, 0.0),
        tolerance,
        witness=[asdict(cell) for cell in table],
        checked=len(table),
        details={
            "mean": mean.tolist(),
            "subgradient": exact.tolist(),
            "bias": bias,
            "second_moment": second,
            "second_moment_limit": limit,
            "normalized_second_moment": ratio,
        },
    )


def check_surrogate_gap(
    f: CostOracle,
    x: Sequence[int | float | Fraction],
    delta: float,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CheckReport:
    """``|E f(z_t) - fhat(x)| <= 2 delta M`` for the bandit sampling distribution."""
    chain = maximal_chain(f.domain, x)
    values = np.asarray(_chain_values(f, chain))
    mu = np.array([float(c) for c in chain.coeffs])
    rho = _local_probabilities(chain, delta)
    gap = abs(float(rho @ values) - float(mu @ values))
    bound = f.bound if f.bound is not None else float(np.max(np.abs(values)))
    limit = 2 * delta * bound
    return CheckReport.from_metric(
        "surrogate_gap",
        max(0.0, gap - limit),
        tolerance,
        witness={"gap": gap, "limit": limit},
        details={"gap": gap, "limit": limit},
    )


def check_rounding_identity(
    f: CostOracle,
    x: Sequence[int | float | Fraction],
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CheckReport:
    """Expected value of threshold rounding equals the extension value."""
    chain = maximal_chain(f.domain, x)
    expected = expected_rounding_value(f, chain)
    mu = [float(c) for c in chain.coeffs]
    direct = float(sum(m * v for m, v in zip(mu, _chain_values(f, chain), strict=True)))
    gap = abs(expected - direct)
    return CheckReport.from_metric(
        "rounding_identity",
        gap,
        tolerance,
        witness={"x": [str(v) for v in chain.x], "expected": expected, "extension": direct},
        details={"expected": expected, "extension": direct},
    )


def check_declared_constants(
    f: CostOracle,
    domain: LNatDomain | None = None,
    *,
    cap: int = 10_000,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CheckReport:
    """Declared M and L-hat dominate the values measured over all pairs of K."""
    domain = domain or f.domain
    points = domain.enumerate_points(cap)
    coords = np.asarray(points)
    values = np.array([f(z) for z in points])

    magnitude = float(np.max(np.abs(values)))
    slope = 0.0
    witness: Any = None
    for a in range(len(points) - 1):
        dist = np.max(np.abs(coords[a + 1 :] - coords[a]), axis=1)
        ratios = np.abs(values[a + 1 :] - values[a]) / dist
        b = int(np.argmax(ratios))
        if ratios[b] > slope:
            slope, witness = float(ratios[b]), (points[a], points[a + 1 + b])

    excess = 0.0
    if f.bound is not None:
        excess = max(excess, magnitude - f.bound)
    if f.lipschitz is not None:
        excess = max(excess, slope - f.lipschitz)
    return CheckReport.from_metric(
        "declared_constants",
        max(0.0, excess),
        tolerance,
        witness,
        checked=len(points),
        details={
            "measured_bound": magnitude,
            "measured_lipschitz": slope,
            "declared_bound": f.bound,
            "declared_lipschitz": f.lipschitz,
        },
    )


def sample_hull_points(
    domain: LNatDomain, count: int, rng: np.random.Generator, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[tuple[Fraction, ...]]:
    """Random rational points of the convex hull (convex combinations of two members)."""
    points = domain.enumerate_points(cap)
    out: list[tuple[Fraction, ...]] = []
    for _ in range(count):
        p = points[int(rng.integers(len(points)))]
        q = points[int(rng.integers(len(points)))]
        w = Fraction(int(rng.integers(0, 17)), 16)
        out.append(tuple(w * a + (1 - w) * b for a, b in zip(p, q, strict=True)))
    return out


def run_oracle_suite(
    f: CostOracle,
    *,
    samples: int = 8,
    delta: float = 0.5,
    rng: np.random.Generator | None = None,
    cap: int = 10_000,
) -> list[CheckReport]:
    """Every check against one function, at ``samples`` random hull points."""
    rng = rng or np.random.default_rng(0)
    reports = [
        check_midpoint_convexity(f, cap=cap, rng=rng),
        check_declared_constants(f, cap=cap),
    ]
    for x in sample_hull_points(f.domain, samples, rng, cap):
        reports.append(check_subgradient(f, None, x, cap=cap))
        reports.append(check_rounding_identity(f, x))
        reports.append(check_estimator_moments(f, x, delta))
        reports.append(check_surrogate_gap(f, x, delta))
    return reports
