"""Configuration management for lnat.

Process-wide defaults come from the environment (``LNAT_`` prefix); each
experiment is described by a YAML file validated into ``ExperimentConfig``.
"""

from __future__ import annotations

import os
from collections.abc import Mapping
from enum import Enum
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)
from pydantic_settings import BaseSettings, SettingsConfigDict
from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from .lattice import DEFAULT_ENUMERATION_CAP, DomainSpec, EmptyDomainError, NotFullDimensionalError
from .oracles import FunctionFamily
from .projection import ProjectionConfig
from .solvers import Algorithm
from .utils.logging import LOG_LEVELS


class ConfigError(Exception):
    """Raised when an experiment file cannot be read or validated."""

    def __init__(self, message: str, path: Path | None = None) -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class LnatSettings(BaseSettings):
    """Process-wide defaults.

    Loaded from environment variables with the ``LNAT_`` prefix.
    """

    model_config = SettingsConfigDict(
        env_prefix="LNAT_",
        env_nested_delimiter="__",
        extra="ignore",
    )

    log_level: str = "INFO"
    # Levels per package under lnat.app, overriding log_level
    log_levels: dict[str, str] = Field(default_factory=dict)
    workers: int = Field(default=1, ge=1)
    enumeration_cap: int = Field(default=DEFAULT_ENUMERATION_CAP, ge=1)
    proj_tol: float = Field(default=1e-10, gt=0)
    proj_max_sweeps: int = Field(default=100_000, ge=1)
    # Generated streams are certified midpoint convex only up to this |K|
    certify_cap: int = Field(default=400, ge=0)
    output_dir: Path = Path("results")

    @field_validator("log_levels")
    @classmethod
    def check_log_levels(cls, v: dict[str, str]) -> dict[str, str]:
        """Level names are logging levels; package keys are lower case."""
        levels = {module.lower(): level.upper() for module, level in v.items()}
        for module, level in levels.items():
            if level not in LOG_LEVELS:
                raise ValueError(f"unknown log level {level!r} for {module}")
        return levels


def load_settings() -> LnatSettings:
    """Load settings from the environment.

    A bare ``LOG_LEVEL`` is honored when ``LNAT_LOG_LEVEL`` is unset.
    """
    if "LOG_LEVEL" in os.environ and "LNAT_LOG_LEVEL" not in os.environ:
        return LnatSettings(log_level=os.environ["LOG_LEVEL"])
    return LnatSettings()


class AdversaryKind(str, Enum):
    """Built-in cost-sequence generators."""

    LOWER_BOUND = "lower_bound"
    RANDOM = "random"
    FIXED = "fixed"


class AdversaryConfig(BaseModel):
    """Cost-sequence generator.

    ``lower_bound`` plays on ``{0, .., width}^dim`` (taken from ``domain`` when
    omitted); ``random`` draws from ``family`` on ``domain``; ``fixed`` repeats
    one ``function`` document (see ``lnat check``) every round.
    """

    model_config = ConfigDict(extra="forbid")

    kind: AdversaryKind
    dim: int | None = Field(default=None, ge=1)
    width: int | None = Field(default=None, ge=1)
    lipschitz: float = Field(default=1.0, gt=0)
    family: FunctionFamily = FunctionFamily.MIXED
    params: dict[str, float] = Field(default_factory=dict)
    function: dict[str, Any] | None = None


class DemandConfig(BaseModel):
    """Inventory demand stream."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["uniform", "geometric", "trace"] = "uniform"
    high: int | None = Field(default=None, ge=0)
    success: float = Field(default=0.5, gt=0, le=1)
    cap: int | None = Field(default=None, ge=0)
    path: Path | None = None

    @model_validator(mode="after")
    def check_kind(self) -> DemandConfig:
        """Each kind needs its own parameter."""
        match self.kind:
            case "uniform" if self.high is None:
                raise ValueError("uniform demand needs `high`")
            case "geometric" if self.cap is None:
                raise ValueError("geometric demand needs `cap`")
            case "trace" if self.path is None:
                raise ValueError("trace demand needs `path`")
        return self


class InventoryAppConfig(BaseModel):
    """Spare-parts inventory application."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["inventory"]
    d: int = Field(ge=1)
    p: float = Field(gt=0)
    c: list[float]
    N: int = Field(ge=1)
    demand: DemandConfig

    @model_validator(mode="after")
    def check_prices(self) -> InventoryAppConfig:
        """One nonnegative price per part type."""
        if len(self.c) != self.d or any(v < 0 for v in self.c):
            raise ValueError(f"c must list {self.d} nonnegative prices")
        return self


class SchedulingAppConfig(BaseModel):
    """Shift-scheduling application.

    ``lambda`` holds one row of I arrival rates per round; rows repeat
    cyclically when there are fewer rows than rounds.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    kind: Literal["scheduling"]
    K: int = Field(ge=1)
    I: int = Field(ge=1)  # noqa: E741
    M: int = Field(ge=1)
    N: int = Field(ge=1)
    starts: list[int]
    l: list[float]  # noqa: E741
    G: float = Field(ge=0)
    r: float = Field(ge=0, le=1)
    c_wait: float = Field(ge=0)
    rates: list[list[float]] = Field(alias="lambda", min_length=1)
    mu: float = Field(gt=0)

    @model_validator(mode="after")
    def check_shape(self) -> SchedulingAppConfig:
        """Shift and interval counts agree with the vectors."""
        if len(self.starts) != self.K or len(self.l) != self.K:
            raise ValueError(f"starts and l must list {self.K} shift types")
        if any(len(row) != self.I for row in self.rates):
            raise ValueError(f"every lambda row needs {self.I} rates")
        return self


ApplicationConfig = Annotated[
    InventoryAppConfig | SchedulingAppConfig, Field(discriminator="kind")
]


class ExperimentConfig(BaseModel):
    """One experiment: a learner, a cost sequence and the run parameters."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    domain: DomainSpec | None = None
    algorithm: Algorithm = Algorithm.FULL
    adversary: AdversaryConfig | None = None
    application: ApplicationConfig | None = None
    horizon: int = Field(alias="T")
    seeds: list[int] | None = None
    seed: int = 0
    replications: int = Field(default=1, ge=1)
    eta: float | None = Field(default=None, gt=0)
    delta: float | None = Field(default=None, gt=0, le=1)
    bound: float | None = Field(default=None, ge=0)
    lipschitz: float | None = Field(default=None, ge=0)
    x1: list[float] | None = None
    proj_tol: float | None = Field(default=None, gt=0)
    proj_max_sweeps: int | None = Field(default=None, ge=1)
    regret_per_round: bool = False
    confidence: float = Field(default=0.95, gt=0, lt=1)
    output: Path | None = None
    workers: int | None = Field(default=None, ge=1)

    @field_validator("adversary", mode="before")
    @classmethod
    def expand_shorthand(cls, v: Any) -> Any:
        """``adversary: lower_bound`` is short for ``{kind: lower_bound}``."""
        if isinstance(v, str):
            return {"kind": v}
        return v

    @field_validator("horizon")
    @classmethod
    def check_horizon(cls, v: int) -> int:
        """At least one round."""
        if v < 1:
            raise ValueError("T must be ≥ 1")
        return v

    @field_validator("seeds")
    @classmethod
    def check_seeds(cls, v: list[int] | None) -> list[int] | None:
        """An explicit seed list must not be empty."""
        if v is not None and not v:
            raise ValueError("seeds must not be empty")
        return v

    @model_validator(mode="after")
    def check_sources(self) -> ExperimentConfig:
        """Exactly one cost source, with the domain it needs."""
        if (self.adversary is None) == (self.application is None):
            raise ValueError("exactly one of `adversary` and `application` must be given")
        if self.domain is not None:
            try:
                self.domain.to_domain()
            except (EmptyDomainError, NotFullDimensionalError) as e:
                raise ValueError(f"domain: {e}") from e
        if self.adversary is not None:
            match self.adversary.kind:
                case AdversaryKind.LOWER_BOUND:
                    if self.domain is None and (self.adversary.dim is None or self.adversary.width is None):
                        raise ValueError("lower_bound adversary needs `dim` and `width` or a `domain`")
                case AdversaryKind.RANDOM:
                    if self.domain is None:
                        raise ValueError("random adversary needs a `domain`")
                case AdversaryKind.FIXED:
                    if self.domain is None or self.adversary.function is None:
                        raise ValueError("fixed adversary needs a `domain` and a `function`")
        return self

    @property
    def seed_list(self) -> list[int]:
        """Explicit seeds, or ``replications`` consecutive seeds from ``seed``."""
        if self.seeds is not None:
            return list(self.seeds)
        return list(range(self.seed, self.seed + self.replications))

    def projection(self, settings: LnatSettings) -> ProjectionConfig:
        """Projection stopping rule (file values win over settings)."""
        return ProjectionConfig(
            tolerance=self.proj_tol if self.proj_tol is not None else settings.proj_tol,
            max_sweeps=self.proj_max_sweeps if self.proj_max_sweeps is not None else settings.proj_max_sweeps,
        )

    def output_dir(self, settings: LnatSettings) -> Path:
        return self.output if self.output is not None else settings.output_dir


def _read_yaml(path: Path) -> dict[str, Any]:
    yaml = YAML(typ="safe")
    try:
        with path.open() as f:
            data = yaml.load(f)
    except (OSError, YAMLError) as e:
        raise ConfigError(str(e), path) from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("expected a mapping at the top level", path)
    return data


def load_experiment_config(
    path: Path, overrides: Mapping[str, Any] | None = None
) -> ExperimentConfig:
    """Read and validate an experiment file.

    Args:
        path: YAML experiment file.
        overrides: Values that replace file keys (``None`` values are ignored).
            ``seed`` or ``replications`` replaces a file ``seeds`` list.

    Returns:
        The validated configuration.

    Raises:
        ConfigError: If the file is unreadable or invalid.
    """
    data = _read_yaml(path)
    updates = {k: v for k, v in (overrides or {}).items() if v is not None}
    if "seed" in updates or "replications" in updates:
        data.pop("seeds", None)
    if "horizon" in updates:
        data.pop("T", None)
        updates["T"] = updates.pop("horizon")
    data.update(updates)
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(_format_errors(e), path) from e


def _format_errors(error: ValidationError) -> str:
    lines = []
    for item in error.errors():
        where = ".".join(str(part) for part in item["loc"]) or "config"
        lines.append(f"{where}: {item['msg']}")
    return "; ".join(lines)
