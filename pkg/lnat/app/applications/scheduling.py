"""Online shift scheduling with a global service level.

Each round the learner picks ``y_k`` operators for each of K shift types. A
shift starting at interval ``I_k`` covers ``M`` consecutive intervals, so
interval ``i`` is staffed by ``h_i(y) = sum(y_k for k with i - M < I_k <= i)``.
The round loss is

    f'_t(y) = -G * r * sum_i g_ti(h_i(y)) + sum_k l_k * y_k

where ``g_ti(n)`` is the M/M/n probability that a caller waits at most
``c_wait``. ``f'_t`` is multimodular in ``y``; the prefix-sum change of
variables turns it into an L-natural convex cost.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..adversaries import CostSequence, GeneratorCertificationError
from ..extension import CostOracle, PointFunction
from ..lattice import EnumerationLimitError, LatticePoint, LNatDomain
from ..oracles import check_midpoint_convexity
from ..utils.logging import get_logger

logger = get_logger(__name__)


class ServiceLevel(NamedTuple):
    """Probability of waiting at most the threshold, and whether the queue is stable."""

    value: float
    stable: bool


def erlang_b(n: int, load: float) -> float:
    """Erlang-B blocking probability by the standard recursion."""
    blocking = 1.0
    for k in range(1, n + 1):
        blocking = load * blocking / (k + load * blocking)
    return blocking


def erlang_c(n: int, load: float) -> float:
    """Erlang-C delay probability for ``n`` servers and offered load ``a < n``."""
    if n < 1 or load >= n:
        raise ValueError(f"Erlang-C needs a stable queue, got n={n}, a={load}")
    if load == 0:
        return 0.0
    b = erlang_b(n, load)
    return b / (1.0 - (load / n) * (1.0 - b))


def erlang_service_level(n: int, lam: float, mu: float, c_wait: float) -> ServiceLevel:
    """``P(wait <= c_wait)`` in an M/M/n queue.

    Equals ``1 - C(n, a) * exp(-(n mu - lam) c_wait)`` with ``a = lam / mu``.
    An unstable queue (``lam >= n mu``, including ``n = 0``) has no
    steady-state service level; it is reported as 0.0 with ``stable=False``.

    Raises:
        ValueError: On negative ``n``, ``lam`` or ``c_wait``, or nonpositive ``mu``.
    """
    if n < 0 or lam < 0 or c_wait < 0 or mu <= 0:
        raise ValueError(f"Invalid queue parameters n={n}, lam={lam}, mu={mu}, c_wait={c_wait}")
    if lam >= n * mu:
        return ServiceLevel(0.0, False)
    delay = erlang_c(n, lam / mu)
    value = 1.0 - delay * math.exp(-(n * mu - lam) * c_wait)
    return ServiceLevel(min(max(value, 0.0), 1.0), True)


@dataclass(frozen=True)
class SchedulingModel:
    """Shift structure, costs and the per-round arrival rates.

    Attributes:
        shift_starts: ``I_k`` per shift type, 1-based and nondecreasing.
        intervals: Number of intervals I.
        shift_length: Intervals covered by one shift (M).
        max_staff: Largest number of operators per shift type (N).
        labor_costs: ``l_k`` per shift type.
        profit: G, profit per served caller.
        miss_probability: r, probability a delayed caller is lost.
        wait_threshold: ``c_wait``.
        arrival_rates: ``lambda_ti``, one row of I rates per round.
        service_rate: ``mu``.
    """

    shift_starts: tuple[int, ...]
    intervals: int
    shift_length: int
    max_staff: int
    labor_costs: tuple[float, ...]
    profit: float
    miss_probability: float
    wait_threshold: float
    arrival_rates: tuple[tuple[float, ...], ...]
    service_rate: float

    def __post_init__(self) -> None:
        if not self.shift_starts:
            raise ValueError("At least one shift type is required")
        if any(not 1 <= s <= self.intervals for s in self.shift_starts):
            raise ValueError(f"Shift starts must lie in 1..{self.intervals}")
        if list(self.shift_starts) != sorted(self.shift_starts):
            raise ValueError("Shift starts must be nondecreasing")
        if len(self.labor_costs) != self.shifts:
            raise ValueError(f"Expected {self.shifts} labor costs, got {len(self.labor_costs)}")
        if self.shift_length < 1 or self.max_staff < 1:
            raise ValueError("Shift length and staff cap must be positive")
        if self.profit < 0 or not 0 <= self.miss_probability <= 1 or self.wait_threshold < 0:
            raise ValueError("Profit, miss probability and wait threshold are out of range")
        if self.service_rate <= 0:
            raise ValueError("Service rate must be positive")
        for t, row in enumerate(self.arrival_rates, start=1):
            if len(row) != self.intervals or any(lam < 0 for lam in row):
                raise ValueError(f"Round {t} needs {self.intervals} nonnegative arrival rates")

    @property
    def shifts(self) -> int:
        return len(self.shift_starts)

    @property
    def horizon(self) -> int:
        return len(self.arrival_rates)

    @property
    def domain(self) -> LNatDomain:
        """Shift counts ``{0, .., N}^K`` (the multimodular side)."""
        return LNatDomain.box([0] * self.shifts, [self.max_staff] * self.shifts)

    def covering(self, i: int) -> range:
        """0-based indices of the shifts staffing interval ``i`` (1-based).

        Nondecreasing starts make this a contiguous block.
        """
        first = next((k for k, s in enumerate(self.shift_starts) if s > i - self.shift_length), self.shifts)
        last = next((k for k in reversed(range(self.shifts)) if self.shift_starts[k] <= i), -1)
        return range(first, max(first, last + 1))


def staffing(model: SchedulingModel, y: Sequence[int]) -> tuple[int, ...]:
    """Operators on duty in every interval, ``h_1 .. h_I``."""
    return tuple(sum(y[k] for k in model.covering(i)) for i in range(1, model.intervals + 1))


def scheduling_cost(model: SchedulingModel, t: int, y: Sequence[int]) -> float:
    """``f'_t(y)`` evaluated from scratch (round ``t`` is 1-based)."""
    if not 1 <= t <= model.horizon:
        raise IndexError(f"Round {t} outside 1..{model.horizon}")
    rates = model.arrival_rates[t - 1]
    service = sum(
        erlang_service_level(h, lam, model.service_rate, model.wait_threshold).value
        for h, lam in zip(staffing(model, y), rates, strict=True)
    )
    labor = sum(c * v for c, v in zip(model.labor_costs, y, strict=True))
    return -model.profit * model.miss_probability * service + float(labor)


@dataclass(frozen=True)
class SchedulingCost:
    """``f'_t`` with the service levels of one round tabulated by staffing."""

    profit_rate: float
    labor_costs: tuple[float, ...]
    blocks: tuple[tuple[int, int], ...]
    service: tuple[tuple[float, ...], ...]

    def __call__(self, y: LatticePoint) -> float:
        covered = sum(table[sum(y[a:b])] for (a, b), table in zip(self.blocks, self.service, strict=True))
        labor = sum(c * v for c, v in zip(self.labor_costs, y, strict=True))
        return -self.profit_rate * covered + float(labor)


def scheduling_oracle(model: SchedulingModel, t: int, domain: LNatDomain | None = None) -> CostOracle:
    """Cost oracle of ``f'_t`` on the box of shift counts.

    M and L-hat are exact for the tabulated round: ``|f'_t| <= G r I + N sum |l|``,
    and a unit max-norm move changes ``h_i`` by at most the number of shifts
    covering ``i``.
    """
    if not 1 <= t <= model.horizon:
        raise IndexError(f"Round {t} outside 1..{model.horizon}")
    rate = model.profit * model.miss_probability
    blocks: list[tuple[int, int]] = []
    tables: list[tuple[float, ...]] = []
    slope = float(sum(abs(c) for c in model.labor_costs))
    for i, lam in enumerate(model.arrival_rates[t - 1], start=1):
        block = model.covering(i)
        reach = len(block) * model.max_staff
        table = tuple(
            erlang_service_level(n, lam, model.service_rate, model.wait_threshold).value
            for n in range(reach + 1)
        )
        if block:
            values = np.asarray(table)
            width = len(block)
            slope += rate * float(np.max(values[width:] - values[:-width]))
        blocks.append((block.start, block.stop))
        tables.append(table)
    return CostOracle(
        domain=domain or model.domain,
        evaluate=SchedulingCost(rate, model.labor_costs, tuple(blocks), tuple(tables)),
        bound=rate * model.intervals + model.max_staff * float(sum(abs(c) for c in model.labor_costs)),
        lipschitz=slope,
        name=f"scheduling[{t}]",
    )


def to_prefix_sums(y: Sequence[int]) -> LatticePoint:
    """``x_k = y_1 + .. + y_k``."""
    return tuple(int(v) for v in np.cumsum(np.asarray(y, dtype=np.int64)))


def from_prefix_sums(x: Sequence[int]) -> LatticePoint:
    """Inverse of ``to_prefix_sums``: ``y_1 = x_1``, ``y_k = x_k - x_{k-1}``."""
    return tuple(int(v) for v in np.diff(np.asarray(x, dtype=np.int64), prepend=0))


def prefix_sum_domain(box: LNatDomain) -> LNatDomain:
    """Image of a box under ``to_prefix_sums``.

    ``lo_1 <= x_1 <= hi_1`` and ``lo_k <= x_k - x_{k-1} <= hi_k``, with the
    coordinate bounds implied by those.

    Raises:
        ValueError: If ``box`` has difference bounds.
    """
    if box.finite_differences:
        raise ValueError("Prefix-sum transform expects a box domain")
    lower = [int(v) for v in np.cumsum(box.lower)]
    upper = [int(v) for v in np.cumsum(box.upper)]
    gamma: dict[tuple[int, int], int] = {}
    for k in range(1, box.dim):
        gamma[(k, k - 1)] = box.upper[k]
        gamma[(k - 1, k)] = -box.lower[k]
    return LNatDomain.create(lower, upper, gamma)


@dataclass(frozen=True)
class PrefixDifferenceCost:
    """``inner`` composed with ``from_prefix_sums``."""

    inner: PointFunction

    def __call__(self, x: LatticePoint) -> float:
        return self.inner(from_prefix_sums(x))


def multimodular_to_lnatural(h: CostOracle, domain: LNatDomain | None = None) -> CostOracle:
    """Turn a multimodular cost on a box into an L-natural convex one.

    ``f(x) = h(x_1, x_2 - x_1, .., x_K - x_{K-1})`` on the prefix-sum image of
    the box. M is unchanged; L-hat doubles since every difference moves by at
    most twice the max-norm step.

    Args:
        h: Cost on a box domain.
        domain: Precomputed ``prefix_sum_domain(h.domain)`` to share across rounds.
    """
    target = domain or prefix_sum_domain(h.domain)
    return CostOracle(
        domain=target,
        evaluate=PrefixDifferenceCost(h.evaluate),
        bound=h.bound,
        lipschitz=None if h.lipschitz is None else 2.0 * h.lipschitz,
        name=f"prefix({h.name})",
    )


def scheduling_stream(model: SchedulingModel, *, certify_cap: int = 400) -> CostSequence:
    """All rounds, transformed to L-natural convex costs on one domain.

    Heavy traffic can make a service level convex in the staffing, and the
    transformed cost then fails midpoint convexity. Each distinct row of
    arrival rates is checked when K has at most ``certify_cap`` points.

    Raises:
        GeneratorCertificationError: If a round's transformed cost is not
            midpoint convex.
    """
    box = model.domain
    domain = prefix_sum_domain(box)
    try:
        domain.enumerate_points(certify_cap)
        certify = True
    except EnumerationLimitError:
        certify = False
        logger.info("Domain exceeds %d points; skipping per-round certification", certify_cap)

    costs: list[CostOracle] = []
    checked: set[tuple[float, ...]] = set()
    for t in range(1, model.horizon + 1):
        cost = multimodular_to_lnatural(scheduling_oracle(model, t, box), domain)
        rates = model.arrival_rates[t - 1]
        if certify and rates not in checked:
            report = check_midpoint_convexity(cost, domain, cap=certify_cap)
            if not report.passed:
                raise GeneratorCertificationError(t, report)
            checked.add(rates)
        costs.append(cost)
    logger.debug("Built %d scheduling rounds over %d shift types", len(costs), model.shifts)
    return CostSequence.from_oracles(
        costs,
        meta={
            "kind": "scheduling",
            "shift_starts": list(model.shift_starts),
            "intervals": model.intervals,
            "shift_length": model.shift_length,
            "max_staff": model.max_staff,
            "labor_costs": list(model.labor_costs),
            "profit": model.profit,
            "miss_probability": model.miss_probability,
            "wait_threshold": model.wait_threshold,
            "service_rate": model.service_rate,
            "horizon": model.horizon,
            "certified": certify,
        },
    )


def random_scheduling_model(
    rng: np.random.Generator,
    *,
    shifts: int = 2,
    intervals: int = 3,
    shift_length: int = 2,
    max_staff: int = 2,
    horizon: int = 1,
    service_rate: float = 1.0,
) -> SchedulingModel:
    """Random instance with light traffic (``lambda`` in ``[0.05, 0.45] mu``).

    With ``lambda < mu / 2`` the service level is concave in the staffing
    from ``n = 0`` on, so every round is multimodular.
    """
    starts = tuple(sorted(int(s) for s in rng.integers(1, intervals + 1, size=shifts)))
    rates = rng.uniform(0.05, 0.45, size=(horizon, intervals)) * service_rate
    return SchedulingModel(
        shift_starts=starts,
        intervals=intervals,
        shift_length=shift_length,
        max_staff=max_staff,
        labor_costs=tuple(float(v) for v in rng.uniform(0.5, 1.5, shifts)),
        profit=float(rng.uniform(5.0, 20.0)),
        miss_probability=float(rng.uniform(0.1, 1.0)),
        wait_threshold=float(rng.uniform(0.0, 1.0)),
        arrival_rates=tuple(tuple(float(v) for v in row) for row in rates),
        service_rate=service_rate,
    )
