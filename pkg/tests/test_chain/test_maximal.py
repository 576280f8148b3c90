"""Tests for maximal chains and threshold rounding."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lnat.app.chain import (
    ChainConstructionError,
    InvalidPermutationError,
    MaximalChain,
    OutOfDomainError,
    decompose,
    maximal_chain,
    round_by_threshold,
    threshold_index,
)
from lnat.app.chain.maximal import _chain_order
from lnat.app.lattice import LNatDomain
from lnat.app.oracles import random_domain, sample_hull_points

F = Fraction


def assert_valid_chain(domain: LNatDomain, chain: MaximalChain) -> None:
    """The four chain invariants, checked exactly."""
    assert all(mu >= 0 for mu in chain.coeffs)
    assert sum(chain.coeffs) == 1
    assert chain.reconstruct() == chain.x
    assert all(domain.contains(z) for z in chain.points)
    r = chain.fractional_parts
    ordered = [r[i] for i in chain.perm]
    assert all(a >= b for a, b in zip(ordered, ordered[1:], strict=False))


class TestMaximalChain:
    """Tests for maximal_chain."""

    def test_top_corner(self, box2: LNatDomain) -> None:
        """``x = (2, 2)`` cannot use ``floor(x)`` as its base."""
        chain = maximal_chain(box2, (2, 2))

        assert chain.base == (1, 1)
        assert chain.perm == (0, 1)
        assert chain.coeffs == (0, 0, 1)
        assert chain.points == ((1, 1), (2, 1), (2, 2))

    def test_fractional_point(self, box2: LNatDomain) -> None:
        """Fractional parts sort the coordinates."""
        chain = maximal_chain(box2, (F(3, 2), F(1, 4)))

        assert chain.base == (1, 0)
        assert chain.perm == (0, 1)
        assert chain.coeffs == (F(1, 2), F(1, 4), F(1, 4))

    def test_interior_integral_point(self, box2: LNatDomain) -> None:
        """An interior lattice point is the bottom of its chain."""
        chain = maximal_chain(box2, (1, 1))

        assert chain.base == (1, 1)
        assert chain.coeffs == (1, 0, 0)
        assert_valid_chain(box2, chain)

    def test_floats_are_exact(self, box2: LNatDomain) -> None:
        """Binary floats convert without rounding."""
        chain = maximal_chain(box2, (1.5, 0.25))

        assert chain.coeffs == (F(1, 2), F(1, 4), F(1, 4))

    def test_precedence_overrides_tie_break(self) -> None:
        """With ``y_1 <= y_2`` tight at the base, coordinate 2 must enter first."""
        domain = LNatDomain.create([0, 0], [2, 2], {(0, 1): 0})

        chain = maximal_chain(domain, (1, 1))

        assert chain.base == (1, 1)
        assert chain.perm == (1, 0)
        assert_valid_chain(domain, chain)

    def test_cyclic_precedence(self) -> None:
        """Two coordinates that must each enter first cannot be ordered."""
        with pytest.raises(ChainConstructionError, match="cyclic"):
            _chain_order((0, 0), (F(1, 2), F(1, 2)), ((0, 0), (0, 0)))

    def test_order_prefers_larger_fraction(self) -> None:
        """Without precedence, larger fractional parts enter first and ties keep index order."""
        delta = ((0, 5, 5), (5, 0, 5), (5, 5, 0))

        assert _chain_order((0, 0, 0), (F(1, 4), F(3, 4), F(1, 4)), delta) == [1, 0, 2]

    def test_band_boundary(self, band2: LNatDomain) -> None:
        """A boundary point of a banded domain."""
        chain = maximal_chain(band2, (2, F(3, 2)))

        assert_valid_chain(band2, chain)

    def test_outside(self, box2: LNatDomain, band2: LNatDomain) -> None:
        """Points outside the hull are rejected."""
        with pytest.raises(OutOfDomainError):
            maximal_chain(box2, (3, 0))
        with pytest.raises(OutOfDomainError):
            maximal_chain(band2, (2, 0))

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10_000), dim=st.integers(min_value=1, max_value=4))
    def test_random_hull_points(self, seed: int, dim: int) -> None:
        """Chains at random hull points satisfy every invariant."""
        rng = np.random.default_rng(seed)
        domain = random_domain(dim, 2, rng)

        for x in sample_hull_points(domain, 5, rng):
            assert_valid_chain(domain, maximal_chain(domain, x))

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10_000))
    def test_every_lattice_point(self, seed: int) -> None:
        """Integral points, boundary included, give valid chains."""
        domain = random_domain(3, 2, np.random.default_rng(seed))

        for z in domain.enumerate_points():
            chain = maximal_chain(domain, z)
            assert_valid_chain(domain, chain)
            assert z in chain.points


class TestDecompose:
    """Tests for decompose."""

    def test_weights(self) -> None:
        """Consecutive differences of the sorted fractional parts."""
        assert decompose((1, 0), (0, 1), (F(3, 2), F(1, 4))) == (F(1, 2), F(1, 4), F(1, 4))

    def test_bottom(self) -> None:
        """``x`` at the base puts all weight on the first point."""
        assert decompose((1, 0, 2), (2, 0, 1), (1, 0, 2)) == (1, 0, 0, 0)

    def test_top(self) -> None:
        """``x`` at ``base + 1`` puts all weight on the last point."""
        assert decompose((1, 0), (1, 0), (2, 1)) == (0, 0, 1)

    def test_wrong_order(self) -> None:
        """Fractional parts must decrease along the permutation."""
        with pytest.raises(InvalidPermutationError):
            decompose((1, 0), (1, 0), (F(3, 2), F(1, 4)))

    def test_not_a_permutation(self) -> None:
        """Repeated indices are rejected."""
        with pytest.raises(InvalidPermutationError):
            decompose((1, 0), (0, 0), (1, 0))

    def test_outside_cube(self) -> None:
        """``x`` must lie in the unit cube above the base."""
        with pytest.raises(OutOfDomainError):
            decompose((0, 0), (0, 1), (2, 0))


class TestRounding:
    """Tests for threshold rounding."""

    @pytest.mark.parametrize(
        ("tau", "expected"),
        [(F(3, 10), (2, 0)), (F(1, 10), (2, 1)), (F(9, 10), (1, 0))],
    )
    def test_threshold(self, box2: LNatDomain, tau: Fraction, expected: tuple[int, int]) -> None:
        """Coordinates whose fractional part exceeds the threshold round up."""
        x = (F(3, 2), F(1, 4))
        chain = maximal_chain(box2, x)

        assert round_by_threshold(chain, x, tau) == expected
        assert chain.point(threshold_index(chain, tau)) == expected

    def test_threshold_range(self, box2: LNatDomain) -> None:
        """Thresholds live in [0, 1]."""
        chain = maximal_chain(box2, (1, 1))

        with pytest.raises(ValueError):
            threshold_index(chain, 1.5)

    def test_chain_index_range(self, box2: LNatDomain) -> None:
        """Chain points are indexed 0..d."""
        chain = maximal_chain(box2, (1, 1))

        with pytest.raises(IndexError):
            chain.point(3)
