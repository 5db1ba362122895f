"""Shared fixtures: the three canonical sources used across the suite."""

from __future__ import annotations

import pytest

from zerotalk.gf import FiniteMatrix
from zerotalk.sources import Edge, FiniteLinearSource, HypergraphicalSource


@pytest.fixture
def shared_bit_source() -> HypergraphicalSource:
    """Three users, three uniform bits; only edge c is seen by everyone."""
    return HypergraphicalSource(
        3,
        (
            Edge.uniform("a", {1, 3}, 2),
            Edge.uniform("b", {1, 2}, 2),
            Edge.uniform("c", {1, 2, 3}, 2),
        ),
    )


@pytest.fixture
def pairwise_xor_source() -> FiniteLinearSource:
    """Three users observing x1, x2, and their XOR: pairwise independent."""
    return FiniteLinearSource(
        2,
        2,
        (
            FiniteMatrix.from_cols(2, [[1, 0]]),
            FiniteMatrix.from_cols(2, [[0, 1]]),
            FiniteMatrix.from_cols(2, [[1, 1]]),
        ),
    )


@pytest.fixture
def overlap_pair_source() -> FiniteLinearSource:
    """Two users over GF(2)^3 whose observation spans share one dimension."""
    return FiniteLinearSource(
        2,
        3,
        (
            FiniteMatrix.from_rows(2, [[1, 0, 1], [0, 1, 1], [0, 0, 0]]),
            FiniteMatrix.from_rows(2, [[0, 1], [0, 1], [1, 1]]),
        ),
    )
