"""Domain documents.

A domain file is YAML with ``dim``, ``lower``, ``upper`` and a sparse ``gamma``
list of ``[i, j, gamma_ij]`` triples (1-based, meaning ``z_i - z_j <= gamma_ij``).
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError, model_validator
from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from .domain import LNatDomain


class DomainFormatError(ValueError):
    """Raised when a domain document cannot be parsed or validated."""

    pass


class DomainSpec(BaseModel):
    """Serialized form of an LNatDomain."""

    dim: int = Field(ge=1)
    lower: list[int]
    upper: list[int]
    gamma: list[tuple[int, int, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_shape(self) -> DomainSpec:
        """Validate vector lengths and 1-based triple indices."""
        if len(self.lower) != self.dim or len(self.upper) != self.dim:
            raise ValueError(f"lower and upper must have {self.dim} entries")
        for i, j, _ in self.gamma:
            if not (1 <= i <= self.dim and 1 <= j <= self.dim) or i == j:
                raise ValueError(f"gamma triple ({i}, {j}) must use distinct indices in 1..{self.dim}")
        return self

    def to_domain(self, *, require_full_dimension: bool = True) -> LNatDomain:
        """Build the domain (construction checks apply)."""
        gamma: dict[tuple[int, int], int] = {}
        for i, j, value in self.gamma:
            key = (i - 1, j - 1)
            gamma[key] = min(value, gamma.get(key, value))
        return LNatDomain.create(
            self.lower, self.upper, gamma, require_full_dimension=require_full_dimension
        )

    @classmethod
    def from_domain(cls, domain: LNatDomain) -> DomainSpec:
        """Serialize a domain."""
        return cls(
            dim=domain.dim,
            lower=list(domain.lower),
            upper=list(domain.upper),
            gamma=[(i + 1, j + 1, g) for i, j, g in domain.finite_differences],
        )


def domain_from_dict(data: dict[str, Any]) -> LNatDomain:
    """Validate a parsed document and build the domain.

    Raises:
        DomainFormatError: If the document is malformed.
    """
    try:
        spec = DomainSpec.model_validate(data)
    except ValidationError as e:
        raise DomainFormatError(str(e)) from e
    return spec.to_domain()


def domain_to_dict(domain: LNatDomain) -> dict[str, Any]:
    """Plain-data form of a domain, triples as lists."""
    data = DomainSpec.from_domain(domain).model_dump()
    data["gamma"] = [list(t) for t in data["gamma"]]
    return data


def load_domain(path: Path) -> LNatDomain:
    """Read a domain file.

    Raises:
        DomainFormatError: If the file is unreadable or malformed.
    """
    yaml = YAML(typ="safe")
    try:
        with path.open() as f:
            data = yaml.load(f)
    except (OSError, YAMLError) as e:
        raise DomainFormatError(f"{path}: {e}") from e
    if not isinstance(data, dict):
        raise DomainFormatError(f"{path}: expected a mapping at the top level")
    return domain_from_dict(data)


def dump_domain(domain: LNatDomain, path: Path) -> None:
    """Write a domain file."""
    yaml = YAML(typ="safe")
    yaml.default_flow_style = None
    with path.open("w") as f:
        yaml.dump(domain_to_dict(domain), f)
