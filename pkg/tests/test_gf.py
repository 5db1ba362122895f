"""Exact GF(q) linear algebra: golden cases and randomized cross-checks.

The independent rank oracle here expands determinants of all square minors
by permutation sums, sharing no code path with the Gauss-Jordan routines it
checks.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zerotalk.errors import ModelError, SubspaceNotContained
from zerotalk.gf import (
    FieldOrder,
    FiniteMatrix,
    column_space_basis,
    column_space_intersection,
    columns_subset,
    extend_basis,
    hstack,
    intersect_all,
    mat_vec,
    matmul,
    null_space,
    rank,
    reduce_to_full_column_rank,
    rref,
    solve,
)


def det_mod(rows: list[list[int]], q: int) -> int:
    """Determinant mod q by the permutation expansion (oracle only)."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term = (term * rows[i][perm[i]]) % q
        total = (total + (-term if inversions % 2 else term)) % q
    return total


def minor_rank(m: FiniteMatrix) -> int:
    """Rank as the largest k with a nonvanishing k-by-k minor (oracle only)."""
    grid = m.row_list()
    for k in range(min(m.rows, m.cols), 0, -1):
        for rs in combinations(range(m.rows), k):
            for cs in combinations(range(m.cols), k):
                sub = [[grid[i][j] for j in cs] for i in rs]
                if det_mod(sub, m.q) != 0:
                    return k
    return 0


def random_matrix(rng: random.Random, q: int, rows: int, cols: int) -> FiniteMatrix:
    return FiniteMatrix(q, rows, cols, tuple(rng.randrange(q) for _ in range(rows * cols)))


def spans_equal(a: FiniteMatrix, b: FiniteMatrix) -> bool:
    return rank(hstack(a, b)) == rank(a) == rank(b)


def contains_span(outer: FiniteMatrix, inner: FiniteMatrix) -> bool:
    return rank(hstack(outer, inner)) == rank(outer)


matrix_strategy = st.builds(
    lambda q, r, c, seed: random_matrix(random.Random(seed), q, r, c),
    q=st.sampled_from([2, 3, 5, 7]),
    r=st.integers(0, 4),
    c=st.integers(0, 4),
    seed=st.integers(0, 10**6),
)


# --- field order and matrix construction ---


def test_field_order_accepts_primes():
    assert FieldOrder(2) == 2
    assert FieldOrder(2147483629) == 2147483629  # largest prime below 2**31


@pytest.mark.parametrize("bad", [0, 1, 4, 9, 15, 2**31, -3])
def test_field_order_rejects_non_primes(bad):
    with pytest.raises(ModelError):
        FieldOrder(bad)


def test_matrix_entries_reduced_mod_q():
    m = FiniteMatrix(3, 1, 3, (-1, 4, 3))
    assert m.entries == (2, 1, 0)


def test_matrix_shape_validation():
    with pytest.raises(ModelError):
        FiniteMatrix(2, 2, 2, (1, 0, 1))


# --- rref / rank ---


def test_rref_identity_fixed_point():
    eye = FiniteMatrix.identity(2, 2)
    reduced, pivots = rref(eye)
    assert reduced == eye
    assert pivots == (0, 1)


def test_rref_dependent_third_column():
    # last column is the sum of the first two, so only two pivots
    m = FiniteMatrix.from_rows(2, [[1, 0, 1], [0, 1, 1], [0, 0, 0]])
    reduced, pivots = rref(m)
    assert pivots == (0, 1)
    assert rank(columns_subset(m, pivots)) == 2


def test_rank_zero_matrix():
    assert rank(FiniteMatrix.zeros(5, 3, 2)) == 0


def test_rank_matches_minor_oracle_gf5():
    rng = random.Random(20240)
    for _ in range(25):
        m = random_matrix(rng, 5, 4, 4)
        assert rank(m) == minor_rank(m)


def test_rank_matches_minor_oracle_gf3_rectangular():
    rng = random.Random(20241)
    for _ in range(25):
        m = random_matrix(rng, 3, 5, 3)
        assert rank(m) == minor_rank(m)


@settings(max_examples=60, deadline=None)
@given(matrix_strategy)
def test_rref_preserves_row_space(m):
    reduced, pivots = rref(m)
    stacked = FiniteMatrix.from_rows(m.q, m.row_list() + reduced.row_list(), cols=m.cols)
    assert rank(stacked) == rank(m) == len(pivots)


# --- null space ---


def test_null_space_of_two_user_block():
    # [a | b] for the 3x2 / 3x2 pair whose spans overlap in one dimension:
    # kernel is one-dimensional with matching halves (1,1 | 1,1)
    a = FiniteMatrix.from_rows(2, [[1, 0], [0, 1], [0, 0]])
    b = FiniteMatrix.from_rows(2, [[0, 1], [0, 1], [1, 1]])
    kern = null_space(hstack(a, b))
    assert (kern.rows, kern.cols) == (4, 1)
    assert kern.col(0) == (1, 1, 1, 1)


def test_null_space_identity_is_empty():
    kern = null_space(FiniteMatrix.identity(3, 3))
    assert kern.cols == 0
    assert kern.rows == 3


def test_null_space_random_basis_annihilates():
    rng = random.Random(7)
    for _ in range(20):
        m = random_matrix(rng, 7, 3, 5)
        kern = null_space(m)
        assert kern.cols == m.cols - rank(m)
        for j in range(kern.cols):
            assert mat_vec(m, kern.col(j)) == (0, 0, 0)


@settings(max_examples=60, deadline=None)
@given(matrix_strategy)
def test_rank_nullity(m):
    assert rank(m) + null_space(m).cols == m.cols


# --- column space intersection ---


def test_intersection_golden_overlap_pair():
    a = FiniteMatrix.from_rows(2, [[1, 0], [0, 1], [0, 0]])
    b = FiniteMatrix.from_rows(2, [[0, 1], [0, 1], [1, 1]])
    meet = column_space_intersection(a, b)
    assert meet.cols == 1
    assert meet.col(0) == (1, 1, 0)


def test_intersection_tolerates_redundant_columns():
    # same spaces as above but with a dependent third column on the left
    a = FiniteMatrix.from_rows(2, [[1, 0, 1], [0, 1, 1], [0, 0, 0]])
    b = FiniteMatrix.from_rows(2, [[0, 1], [0, 1], [1, 1]])
    meet = column_space_intersection(a, b)
    assert meet.cols == 1
    assert meet.col(0) == (1, 1, 0)


def test_intersection_of_identical_spaces():
    eye = FiniteMatrix.identity(3, 3)
    meet = column_space_intersection(eye, eye)
    assert contains_span(meet, eye)
    assert contains_span(eye, meet)
    assert meet == FiniteMatrix.identity(3, 3)


def test_intersection_of_disjoint_lines_is_trivial():
    a = FiniteMatrix.from_cols(2, [[1, 0]])
    b = FiniteMatrix.from_cols(2, [[0, 1]])
    meet = column_space_intersection(a, b)
    assert meet.cols == 0


def test_intersection_contained_in_both_and_symmetric():
    rng = random.Random(99)
    for _ in range(30):
        q = rng.choice([2, 3, 5])
        rows = rng.randrange(1, 5)
        a = random_matrix(rng, q, rows, rng.randrange(0, 4))
        b = random_matrix(rng, q, rows, rng.randrange(0, 4))
        meet = column_space_intersection(a, b)
        assert contains_span(a, meet)
        assert contains_span(b, meet)
        assert column_space_intersection(b, a) == meet  # canonical form is symmetric
        # shared columns of a must land inside the meet
        for j in range(a.cols):
            col = columns_subset(a, [j])
            if contains_span(b, col):
                assert contains_span(meet, col)


@settings(max_examples=80, deadline=None)
@given(
    q=st.sampled_from([2, 3, 5]),
    rows=st.integers(1, 4),
    ca=st.integers(0, 4),
    cb=st.integers(0, 4),
    seed=st.integers(0, 10**6),
)
def test_dimension_formula(q, rows, ca, cb, seed):
    rng = random.Random(seed)
    a = random_matrix(rng, q, rows, ca)
    b = random_matrix(rng, q, rows, cb)
    meet = column_space_intersection(a, b)
    assert meet.cols == rank(a) + rank(b) - rank(hstack(a, b))


def test_intersect_all_is_order_invariant():
    rng = random.Random(4242)
    for _ in range(10):
        mats = [random_matrix(rng, 3, 4, rng.randrange(1, 4)) for _ in range(3)]
        results = {intersect_all([mats[i] for i in perm]) for perm in permutations(range(3))}
        assert len(results) == 1


# --- basis selection / extension ---


def test_reduce_keeps_leading_independent_columns():
    m = FiniteMatrix.from_rows(2, [[1, 0, 1], [0, 1, 1], [0, 0, 0]])
    reduced = reduce_to_full_column_rank(m)
    assert reduced == columns_subset(m, [0, 1])


def test_reduce_full_rank_passthrough():
    m = FiniteMatrix.from_rows(3, [[1, 2], [0, 1], [1, 1]])
    assert reduce_to_full_column_rank(m) == m


def test_reduce_preserves_span():
    rng = random.Random(11)
    for _ in range(20):
        base = random_matrix(rng, 3, 4, 2)
        # duplicate + combine columns to force rank deficiency
        fat = hstack(base, base, random_matrix(rng, 3, 4, 1))
        reduced = reduce_to_full_column_rank(fat)
        assert rank(reduced) == reduced.cols == rank(fat)
        assert spans_equal(reduced, fat)


def test_extend_basis_golden():
    base = FiniteMatrix.from_cols(2, [[1, 1, 0]])
    target = FiniteMatrix.from_rows(2, [[1, 0], [0, 1], [0, 0]])
    ext = extend_basis(base, target)
    assert ext.cols == 1
    joined = hstack(base, ext)
    assert rank(joined) == 2
    assert spans_equal(joined, target)


def test_extend_basis_with_base_equal_target():
    m = FiniteMatrix.identity(5, 3)
    assert extend_basis(m, m).cols == 0


def test_extend_basis_random_nested_subspaces():
    rng = random.Random(5150)
    for _ in range(20):
        target = random_matrix(rng, 5, 4, 3)
        take = rng.randrange(0, rank(target) + 1)
        base = column_space_basis(columns_subset(reduce_to_full_column_rank(target), range(take)))
        ext = extend_basis(base, target)
        joined = hstack(base, ext)
        assert rank(joined) == joined.cols == rank(target)
        assert spans_equal(joined, target)


def test_extend_basis_rejects_outside_vectors():
    base = FiniteMatrix.from_cols(2, [[0, 0, 1]])
    target = FiniteMatrix.from_rows(2, [[1, 0], [0, 1], [0, 0]])
    with pytest.raises(SubspaceNotContained):
        extend_basis(base, target)


def test_extend_basis_requires_independent_base():
    base = FiniteMatrix.from_cols(2, [[1, 0], [1, 0]])
    with pytest.raises(ModelError):
        extend_basis(base, FiniteMatrix.identity(2, 2))


# --- solve ---


def test_solve_recovers_combination():
    rng = random.Random(303)
    for _ in range(20):
        q = rng.choice([2, 3, 7])
        a = random_matrix(rng, q, 4, 3)
        x = random_matrix(rng, q, 3, 2)
        b = matmul(a, x)
        got = solve(a, b)
        assert matmul(a, got) == b


def test_solve_rejects_outside_column():
    a = FiniteMatrix.from_cols(3, [[1, 0, 0]])
    b = FiniteMatrix.from_cols(3, [[0, 1, 0]])
    with pytest.raises(SubspaceNotContained):
        solve(a, b)


# --- canonicalization and determinism ---


def test_span_equal_inputs_share_canonical_basis():
    m = FiniteMatrix.from_rows(5, [[1, 2, 3], [0, 1, 4], [2, 0, 1]])
    shuffled = columns_subset(m, [2, 0, 1])
    scaled = FiniteMatrix.from_cols(5, [[(3 * x) % 5 for x in m.col(j)] for j in range(3)])
    assert column_space_basis(m) == column_space_basis(shuffled) == column_space_basis(scaled)


def test_operations_are_deterministic():
    rng = random.Random(808)
    a = random_matrix(rng, 3, 4, 3)
    b = random_matrix(rng, 3, 4, 2)
    assert rref(a) == rref(a)
    assert null_space(a) == null_space(a)
    assert column_space_intersection(a, b) == column_space_intersection(a, b)
