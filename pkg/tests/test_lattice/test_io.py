"""Tests for domain documents."""

from __future__ import annotations

from pathlib import Path

import pytest

from lnat.app.lattice import DomainFormatError, DomainSpec, LNatDomain, domain_from_dict, dump_domain, load_domain

from ..conftest import write_yaml_file


class TestDomainSpec:
    """Tests for DomainSpec validation."""

    def test_one_based_triples(self) -> None:
        """Triples are 1-based in documents and 0-based in the domain."""
        domain = domain_from_dict({"dim": 2, "lower": [0, 0], "upper": [2, 2], "gamma": [[1, 2, 1]]})

        assert domain.gamma(0, 1) == 1
        assert domain.gamma(1, 0) is None

    def test_duplicate_triples_keep_tightest(self) -> None:
        """Repeated pairs keep the smallest bound."""
        spec = DomainSpec(dim=2, lower=[0, 0], upper=[3, 3], gamma=[(1, 2, 2), (1, 2, 1)])

        assert spec.to_domain().gamma(0, 1) == 1

    def test_wrong_length(self) -> None:
        """Bounds must match ``dim``."""
        with pytest.raises(DomainFormatError):
            domain_from_dict({"dim": 3, "lower": [0, 0], "upper": [2, 2]})

    def test_bad_triple(self) -> None:
        """Indices must be distinct and in range."""
        with pytest.raises(DomainFormatError):
            domain_from_dict({"dim": 2, "lower": [0, 0], "upper": [2, 2], "gamma": [[1, 3, 1]]})
        with pytest.raises(DomainFormatError):
            domain_from_dict({"dim": 2, "lower": [0, 0], "upper": [2, 2], "gamma": [[2, 2, 0]]})

    def test_from_domain(self, band2: LNatDomain) -> None:
        """Serialization lists every finite difference bound."""
        spec = DomainSpec.from_domain(band2)

        assert spec.gamma == [(1, 2, 1), (2, 1, 1)]


class TestDomainFiles:
    """Tests for reading and writing domain files."""

    def test_dump_then_load(self, tmp_path: Path, band2: LNatDomain) -> None:
        """A written domain reads back equal."""
        path = tmp_path / "domain.yaml"

        dump_domain(band2, path)

        assert load_domain(path) == band2

    def test_missing_file(self, tmp_path: Path) -> None:
        """Unreadable files are format errors."""
        with pytest.raises(DomainFormatError):
            load_domain(tmp_path / "absent.yaml")

    def test_not_a_mapping(self, tmp_path: Path) -> None:
        """The top level must be a mapping."""
        path = write_yaml_file(tmp_path / "domain.yaml", [1, 2, 3])

        with pytest.raises(DomainFormatError):
            load_domain(path)
