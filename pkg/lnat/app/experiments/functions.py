"""Cost sources named in configuration files.

``build_sequence`` turns an experiment config into the cost sequence of one
seed; ``build_function`` turns a function document (used by ``lnat check``)
into a single cost oracle.
"""

from __future__ import annotations

import dataclasses
import itertools
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError
from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from ..adversaries import (
    CostSequence,
    GeneratorCertificationError,
    lower_bound_adversary,
    random_lnat_stream,
)
from ..applications import (
    InventoryCost,
    InventoryModel,
    SchedulingModel,
    geometric_demands,
    inventory_stream,
    load_demand_trace,
    scheduling_stream,
    uniform_demands,
)
from ..config import (
    AdversaryKind,
    ConfigError,
    ExperimentConfig,
    InventoryAppConfig,
    LnatSettings,
    SchedulingAppConfig,
)
from ..extension import CostOracle, PointFunction, with_certified_constants
from ..lattice import EnumerationLimitError, LatticePoint, LNatDomain
from ..oracles import FunctionFamily, MaxTerm, SeparableQuadratic, SumFunction, random_function
from ..utils.logging import get_logger
from ..utils.streams import experiment_streams

logger = get_logger(__name__)


@dataclass(frozen=True)
class LinearFunction:
    """``offset + sum_i coeffs[i] * z_i``."""

    coeffs: tuple[float, ...]
    offset: float = 0.0

    def __call__(self, z: LatticePoint) -> float:
        return self.offset + float(sum(c * v for c, v in zip(self.coeffs, z, strict=True)))


@dataclass(frozen=True)
class TableFunction:
    """Explicit value per lattice point."""

    values: Mapping[LatticePoint, float]

    def __call__(self, z: LatticePoint) -> float:
        try:
            return self.values[tuple(z)]
        except KeyError:
            raise ValueError(f"No table value for {tuple(z)}") from None


class _FunctionBase(BaseModel):
    model_config = ConfigDict(extra="forbid")

    bound: float | None = Field(default=None, ge=0)
    lipschitz: float | None = Field(default=None, ge=0)


class LinearSpec(_FunctionBase):
    kind: Literal["linear"]
    coeffs: list[float]
    offset: float = 0.0


class SeparableQuadraticSpec(_FunctionBase):
    kind: Literal["separable_quadratic"]
    weights: list[float] = Field(description="Nonnegative curvature per coordinate")
    centers: list[float]


class MaxTermSpec(BaseModel):
    """One ``weight * max(base, sign * z_i + offset_i)`` term, 1-based coords."""

    model_config = ConfigDict(extra="forbid")

    weight: float = Field(ge=0)
    sign: Literal[-1, 1] = 1
    base: float
    coords: list[int] = Field(min_length=1)
    offsets: list[float]


class MaxComponentSpec(_FunctionBase):
    kind: Literal["max_component"]
    terms: list[MaxTermSpec] = Field(min_length=1)


class InventorySpec(_FunctionBase):
    kind: Literal["inventory"]
    p: float = Field(gt=0)
    c: list[float]
    demand: list[int]


class TableSpec(_FunctionBase):
    kind: Literal["table"]
    values: list[list[float]] = Field(description="Rows ``[z_1, .., z_d, value]``")


class RandomSpec(_FunctionBase):
    kind: Literal["random"]
    family: FunctionFamily = FunctionFamily.MIXED
    seed: int = 0
    params: dict[str, float] = Field(default_factory=dict)


FunctionSpec = Annotated[
    LinearSpec | SeparableQuadraticSpec | MaxComponentSpec | InventorySpec | TableSpec | RandomSpec,
    Field(discriminator="kind"),
]

_function_adapter: TypeAdapter[Any] = TypeAdapter(FunctionSpec)


def parse_function_spec(data: Mapping[str, Any]) -> FunctionSpec:
    """Validate a function document.

    Raises:
        ConfigError: If the document is invalid.
    """
    try:
        spec: FunctionSpec = _function_adapter.validate_python(dict(data))
    except ValidationError as e:
        raise ConfigError(str(e)) from e
    return spec


def load_function_spec(path: Path) -> FunctionSpec:
    """Read a function document from YAML.

    Raises:
        ConfigError: If the file is unreadable or invalid.
    """
    yaml = YAML(typ="safe")
    try:
        with path.open() as f:
            data = yaml.load(f)
    except (OSError, YAMLError) as e:
        raise ConfigError(str(e), path) from e
    if not isinstance(data, dict):
        raise ConfigError("expected a mapping at the top level", path)
    try:
        return parse_function_spec(data)
    except ConfigError as e:
        raise ConfigError(str(e), path) from e


def _check_width(name: str, values: list[Any], dim: int) -> None:
    if len(values) != dim:
        raise ConfigError(f"{name} must have {dim} entries, got {len(values)}")


def _evaluator(spec: FunctionSpec, domain: LNatDomain) -> PointFunction:
    d = domain.dim
    match spec:
        case LinearSpec():
            _check_width("coeffs", spec.coeffs, d)
            return LinearFunction(tuple(spec.coeffs), spec.offset)
        case SeparableQuadraticSpec():
            _check_width("weights", spec.weights, d)
            _check_width("centers", spec.centers, d)
            if any(w < 0 for w in spec.weights):
                raise ConfigError("separable_quadratic weights must be nonnegative")
            return SeparableQuadratic(tuple(spec.weights), tuple(spec.centers))
        case MaxComponentSpec():
            terms = []
            for term in spec.terms:
                _check_width("offsets", term.offsets, len(term.coords))
                if any(not 1 <= i <= d for i in term.coords):
                    raise ConfigError(f"max_component coords must lie in 1..{d}")
                coords = tuple(i - 1 for i in term.coords)
                terms.append(MaxTerm(term.weight, term.sign, term.base, coords, tuple(term.offsets)))
            return SumFunction(tuple(terms))
        case InventorySpec():
            _check_width("c", spec.c, d)
            _check_width("demand", spec.demand, d)
            return InventoryCost(spec.p, tuple(spec.c), tuple(spec.demand))
        case TableSpec():
            table: dict[LatticePoint, float] = {}
            for row in spec.values:
                _check_width("table row", row, d + 1)
                table[tuple(int(v) for v in row[:d])] = float(row[d])
            return TableFunction(table)
        case RandomSpec():
            rng = experiment_streams(spec.seed).adversary
            return random_function(domain, spec.family, rng, spec.params)
    raise ConfigError(f"Unknown function kind: {spec}")  # pragma: no cover


def build_function(spec: FunctionSpec, domain: LNatDomain, *, cap: int = 10_000) -> CostOracle:
    """Cost oracle for a function document.

    Undeclared constants are measured over K when ``|K| <= cap``.

    Raises:
        ConfigError: If the document does not fit the domain.
    """
    oracle = CostOracle(
        domain=domain,
        evaluate=_evaluator(spec, domain),
        bound=spec.bound,
        lipschitz=spec.lipschitz,
        name=spec.kind,
    )
    try:
        return with_certified_constants(oracle, cap)
    except EnumerationLimitError as e:
        logger.info("Constants left undeclared: %s", e)
        return oracle


def _inventory_model(app: InventoryAppConfig, horizon: int, seed: int) -> InventoryModel:
    rng = experiment_streams(seed).adversary
    demand = app.demand
    match demand.kind:
        case "uniform":
            assert demand.high is not None
            demands, cap = uniform_demands(app.d, horizon, demand.high, rng), demand.high
        case "geometric":
            assert demand.cap is not None
            demands, cap = geometric_demands(app.d, horizon, demand.success, demand.cap, rng), demand.cap
        case "trace":
            assert demand.path is not None
            rows = load_demand_trace(demand.path, app.d)
            if len(rows) < horizon:
                raise ConfigError(f"demand trace has {len(rows)} rows, T={horizon} needed", demand.path)
            demands = rows[:horizon]
            cap = max(max(y) for y in demands)
    return InventoryModel(
        penalty=app.p,
        prices=tuple(app.c),
        max_order=app.N,
        demands=demands,
        demand_cap=cap,
    )


def _scheduling_model(app: SchedulingAppConfig, horizon: int) -> SchedulingModel:
    rows = itertools.islice(itertools.cycle(app.rates), horizon)
    return SchedulingModel(
        shift_starts=tuple(app.starts),
        intervals=app.I,
        shift_length=app.M,
        max_staff=app.N,
        labor_costs=tuple(app.l),
        profit=app.G,
        miss_probability=app.r,
        wait_threshold=app.c_wait,
        arrival_rates=tuple(tuple(row) for row in rows),
        service_rate=app.mu,
    )


def build_sequence(config: ExperimentConfig, seed: int, settings: LnatSettings) -> CostSequence:
    """Cost sequence of one seed.

    Declared ``bound`` and ``lipschitz`` in the config replace the
    generator's constants.

    Raises:
        ConfigError: If the cost source cannot be built from the config.
    """
    horizon = config.horizon
    sequence: CostSequence
    try:
        if config.adversary is not None:
            adv = config.adversary
            domain = config.domain.to_domain() if config.domain is not None else None
            match adv.kind:
                case AdversaryKind.LOWER_BOUND:
                    if domain is not None:
                        d, n = adv.dim or domain.dim, adv.width or domain.width
                    else:
                        assert adv.dim is not None and adv.width is not None
                        d, n = adv.dim, adv.width
                    sequence = lower_bound_adversary(d, n, adv.lipschitz, horizon, seed)
                case AdversaryKind.RANDOM:
                    assert domain is not None
                    sequence = random_lnat_stream(
                        domain,
                        adv.family,
                        horizon,
                        seed,
                        adv.params,
                        certify_cap=settings.certify_cap,
                        constants_cap=settings.enumeration_cap,
                    )
                case AdversaryKind.FIXED:
                    assert domain is not None and adv.function is not None
                    oracle = build_function(parse_function_spec(adv.function), domain)
                    sequence = CostSequence(
                        domain=domain,
                        costs=(oracle,) * horizon,
                        bound=oracle.bound,
                        lipschitz=oracle.lipschitz,
                        meta={"kind": "fixed", "function": dict(adv.function), "horizon": horizon},
                    )
        else:
            app = config.application
            match app:
                case InventoryAppConfig():
                    sequence = inventory_stream(_inventory_model(app, horizon, seed))
                case SchedulingAppConfig():
                    try:
                        sequence = scheduling_stream(
                            _scheduling_model(app, horizon), certify_cap=settings.certify_cap
                        )
                    except GeneratorCertificationError as e:
                        raise ConfigError(f"scheduling costs are not L-natural convex: {e}") from e
                case _:  # pragma: no cover
                    raise ConfigError("no cost source configured")
    except ValueError as e:
        raise ConfigError(str(e)) from e

    if config.bound is not None or config.lipschitz is not None:
        sequence = dataclasses.replace(
            sequence,
            bound=config.bound if config.bound is not None else sequence.bound,
            lipschitz=config.lipschitz if config.lipschitz is not None else sequence.lipschitz,
        )
    return sequence
