"""Exact dense linear algebra over prime fields GF(q).

Matrices are immutable, stored row-major with plain Python integers reduced
mod q, so all arithmetic is exact regardless of field size (q is capped at
2**31 only to keep single products cheap).  Subspaces are handled through
their spanning column sets; every routine that returns a basis canonicalizes
it by row-reducing the transpose, so span-equal inputs produce identical
output matrices and golden tests stay stable.

Intended for the small dimensions that arise in source models (tens, not
thousands); no attempt is made at sparse or blocked elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ModelError, SubspaceNotContained

MAX_FIELD_ORDER = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FieldOrder(int):
    """A prime field order q.  Primality is verified at construction."""

    def __new__(cls, q) -> "FieldOrder":
        if isinstance(q, FieldOrder):
            return q
        try:
            value = int(q)
        except (TypeError, ValueError):
            raise ModelError(f"field order must be an integer, got {q!r}") from None
        if value != q or not 2 <= value < MAX_FIELD_ORDER:
            raise ModelError(f"field order must be an integer in [2, 2**31), got {q!r}")
        if not _is_prime(value):
            raise ModelError(f"field order must be prime, got {value}")
        return super().__new__(cls, value)


@dataclass(frozen=True)
class FiniteMatrix:
    """Dense matrix over GF(q), row-major, entries reduced into [0, q)."""

    q: FieldOrder
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", FieldOrder(self.q))
        if self.rows < 0 or self.cols < 0:
            raise ModelError(f"matrix shape must be nonnegative, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ModelError(
                f"expected {self.rows * self.cols} entries for a "
                f"{self.rows}x{self.cols} matrix, got {len(self.entries)}"
            )
        object.__setattr__(self, "entries", tuple(int(e) % self.q for e in self.entries))

    @classmethod
    def from_rows(cls, q, rows: Sequence[Sequence[int]], cols: int | None = None) -> "FiniteMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ModelError("all matrix rows must have the same length")
        flat = tuple(x for r in rows for x in r)
        return cls(FieldOrder(q), len(rows), cols, flat)

    @classmethod
    def from_cols(cls, q, cols: Sequence[Sequence[int]], rows: int | None = None) -> "FiniteMatrix":
        cols = [list(c) for c in cols]
        if rows is None:
            rows = len(cols[0]) if cols else 0
        if any(len(c) != rows for c in cols):
            raise ModelError("all matrix columns must have the same length")
        flat = tuple(cols[j][i] for i in range(rows) for j in range(len(cols)))
        return cls(FieldOrder(q), rows, len(cols), flat)

    @classmethod
    def identity(cls, q, n: int) -> "FiniteMatrix":
        return cls(FieldOrder(q), n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, q, rows: int, cols: int) -> "FiniteMatrix":
        return cls(FieldOrder(q), rows, cols, (0,) * (rows * cols))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "FiniteMatrix":
        return FiniteMatrix.from_cols(self.q, self.row_list(), rows=self.cols)

    def __str__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"GF({int(self.q)})[{body}]"


def matmul(a: FiniteMatrix, b: FiniteMatrix) -> FiniteMatrix:
    """Matrix product over the common field."""
    if a.q != b.q:
        raise ValueError(f"field mismatch: GF({int(a.q)}) vs GF({int(b.q)})")
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    q = a.q
    out = []
    for i in range(a.rows):
        ra = a.row(i)
        for j in range(b.cols):
            out.append(sum(ra[k] * b.at(k, j) for k in range(a.cols)) % q)
    return FiniteMatrix(q, a.rows, b.cols, tuple(out))


def mat_vec(a: FiniteMatrix, x: Sequence[int]) -> tuple[int, ...]:
    """Product a @ x for a column vector given as a flat sequence."""
    if len(x) != a.cols:
        raise ValueError(f"vector length {len(x)} does not match {a.cols} columns")
    q = a.q
    return tuple(sum(a.at(i, k) * (x[k] % q) for k in range(a.cols)) % q for i in range(a.rows))


def vec_mat(x: Sequence[int], a: FiniteMatrix) -> tuple[int, ...]:
    """Product x @ a for a row vector given as a flat sequence."""
    if len(x) != a.rows:
        raise ValueError(f"vector length {len(x)} does not match {a.rows} rows")
    q = a.q
    return tuple(sum((x[k] % q) * a.at(k, j) for k in range(a.rows)) % q for j in range(a.cols))


def hstack(*mats: FiniteMatrix) -> FiniteMatrix:
    """Concatenate matrices side by side: [a | b | ...]."""
    if not mats:
        raise ValueError("hstack needs at least one matrix")
    first = mats[0]
    if any(m.rows != first.rows or m.q != first.q for m in mats):
        raise ValueError("hstack requires equal row counts and a common field")
    cols: list[tuple[int, ...]] = []
    for m in mats:
        cols.extend(m.col(j) for j in range(m.cols))
    return FiniteMatrix.from_cols(first.q, cols, rows=first.rows)


def columns_subset(m: FiniteMatrix, indices: Iterable[int]) -> FiniteMatrix:
    """New matrix made of the selected columns of m, in the given order."""
    return FiniteMatrix.from_cols(m.q, [m.col(j) for j in indices], rows=m.rows)


def rref(m: FiniteMatrix) -> tuple[FiniteMatrix, tuple[int, ...]]:
    """Reduced row echelon form via Gauss-Jordan elimination mod q.

    Returns:
        (R, pivot_cols): R is the RREF of m (same shape, row space
        preserved) and pivot_cols lists the pivot column indices in
        increasing order; their count is the rank.
    """
    q = m.q
    work = m.row_list()
    pivots: list[int] = []
    pr = 0
    for col in range(m.cols):
        sel = next((r for r in range(pr, m.rows) if work[r][col]), None)
        if sel is None:
            continue
        work[pr], work[sel] = work[sel], work[pr]
        inv = pow(work[pr][col], -1, q)
        work[pr] = [(x * inv) % q for x in work[pr]]
        for r in range(m.rows):
            if r != pr and work[r][col]:
                f = work[r][col]
                work[r] = [(a - f * b) % q for a, b in zip(work[r], work[pr])]
        pivots.append(col)
        pr += 1
        if pr == m.rows:
            break
    return FiniteMatrix.from_rows(q, work, cols=m.cols), tuple(pivots)


def rank(m: FiniteMatrix) -> int:
    """Rank of m over GF(q)."""
    return len(rref(m)[1])


def column_space_basis(m: FiniteMatrix) -> FiniteMatrix:
    """Canonical full-column-rank matrix spanning the column space of m.

    The canonical form is the RREF of the transpose read back as columns,
    so any two matrices with equal column spans map to the same output.
    """
    reduced, pivots = rref(m.transpose())
    return FiniteMatrix.from_cols(m.q, [reduced.row(i) for i in range(len(pivots))], rows=m.rows)


def null_space(m: FiniteMatrix) -> FiniteMatrix:
    """Canonical basis of the right null space {x : m @ x = 0}, as columns.

    The column count always equals cols(m) - rank(m).
    """
    q = m.q
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis: list[list[int]] = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = [0] * m.cols
        vec[free] = 1
        for r, p in enumerate(pivots):
            vec[p] = (-reduced.at(r, free)) % q
        basis.append(vec)
    return column_space_basis(FiniteMatrix.from_cols(q, basis, rows=m.cols))


def column_space_intersection(a: FiniteMatrix, b: FiniteMatrix) -> FiniteMatrix:
    """Canonical basis of the intersection of two column spaces.

    Works through the kernel of the side-by-side block [a | b]: each kernel
    basis vector splits as (u, v) with a@u = -b@v, so a@u lies in both
    spans, and those products generate the whole intersection.

    Args:
        a, b: matrices with the same row count over the same field.

    Returns:
        Full-column-rank matrix whose columns span span(a) & span(b);
        zero columns when the intersection is the trivial space.
    """
    if a.q != b.q:
        raise ValueError(f"field mismatch: GF({int(a.q)}) vs GF({int(b.q)})")
    if a.rows != b.rows:
        raise ValueError(f"row-count mismatch: {a.rows} vs {b.rows}")
    kernel = null_space(hstack(a, b))
    products = []
    for j in range(kernel.cols):
        u = kernel.col(j)[: a.cols]
        products.append(mat_vec(a, u))
    return column_space_basis(FiniteMatrix.from_cols(a.q, products, rows=a.rows))


def intersect_all(mats: Sequence[FiniteMatrix]) -> FiniteMatrix:
    """Left fold of the pairwise column-space intersection.

    The result is order-invariant up to the canonical form, which makes it
    literally order-invariant here.
    """
    if not mats:
        raise ValueError("need at least one matrix to intersect")
    acc = column_space_basis(mats[0])
    for m in mats[1:]:
        acc = column_space_intersection(acc, m)
    return acc


def reduce_to_full_column_rank(m: FiniteMatrix) -> FiniteMatrix:
    """Subset of the columns of m forming a basis of its column space.

    Keeps the leftmost maximal independent set (the pivot columns), so a
    full-rank input is returned unchanged.
    """
    _, pivots = rref(m)
    return columns_subset(m, pivots)


def extend_basis(base: FiniteMatrix, target: FiniteMatrix) -> FiniteMatrix:
    """Columns of target that extend base to a basis of span(target).

    Args:
        base: full-column-rank matrix with span(base) contained in
            span(target).
        target: matrix whose column space is to be reached.

    Returns:
        Matrix N, drawn from the columns of target, such that [base | N]
        has full column rank and spans span(target).  Empty when base
        already spans the target.

    Raises:
        SubspaceNotContained: if span(base) is not inside span(target).
        ModelError: if base does not have full column rank.
    """
    if base.q != target.q or base.rows != target.rows:
        raise ValueError("base and target must share field and row count")
    if rank(base) != base.cols:
        raise ModelError("base must have full column rank")
    target_rank = rank(target)
    if rank(hstack(target, base)) != target_rank:
        raise SubspaceNotContained("base spans vectors outside the target space")
    picked: list[int] = []
    current = base.cols
    for j in range(target.cols):
        if current == target_rank:
            break
        candidate = hstack(base, columns_subset(target, picked + [j]))
        r = rank(candidate)
        if r > current:
            picked.append(j)
            current = r
    return columns_subset(target, picked)


def solve(a: FiniteMatrix, b: FiniteMatrix) -> FiniteMatrix:
    """Some X with a @ X = b, taking free variables as zero.

    Raises:
        SubspaceNotContained: if a column of b is outside span(a).
    """
    if a.q != b.q or a.rows != b.rows:
        raise ValueError("a and b must share field and row count")
    reduced, pivots = rref(hstack(a, b))
    if any(p >= a.cols for p in pivots):
        raise SubspaceNotContained("right-hand side is not in the column space")
    out = [[0] * b.cols for _ in range(a.cols)]
    for r, p in enumerate(pivots):
        for j in range(b.cols):
            out[p][j] = reduced.at(r, a.cols + j)
    return FiniteMatrix.from_rows(a.q, out, cols=b.cols)
