"""Source models for multiterminal key agreement.

Three model families, each describing how a set of users jointly observes
correlated randomness:

* ``HypergraphicalSource`` — independent edge variables, each observed by
  the users its hyperedge touches.
* ``FiniteLinearSource`` — every user sees a linear transform x @ M_i of one
  shared uniform vector over a prime field.
* ``DiscreteSource`` — an explicit joint pmf over finite alphabets; the
  universal fallback and the substrate for brute-force checks.

Probabilities may be exact ``Fraction`` values (kept exact through
expansion) or floats; entropies are always reported as floats in bits.
Enumerating a joint support is capped by ``ZEROTALK_EXPANSION_LIMIT``
(default 10**6) so oversized models fail loudly instead of thrashing.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain, combinations, product
from typing import Union

from . import gf
from .errors import ExpansionTooLarge, InternalRankError, ModelError, NotTwoUsers

Probability = Union[Fraction, float]

DEFAULT_EXPANSION_LIMIT = 10**6
PROBABILITY_TOLERANCE = 1e-9
ENTROPY_TOLERANCE = 1e-9


def expansion_limit() -> int:
    """Joint-realization cap; ZEROTALK_EXPANSION_LIMIT overrides the default."""
    raw = os.environ.get("ZEROTALK_EXPANSION_LIMIT")
    if raw is None:
        return DEFAULT_EXPANSION_LIMIT
    try:
        value = int(raw)
    except ValueError:
        raise ModelError(f"ZEROTALK_EXPANSION_LIMIT must be an integer, got {raw!r}") from None
    if value < 1:
        raise ModelError(f"ZEROTALK_EXPANSION_LIMIT must be positive, got {value}")
    return value


def _check_pmf(probs: tuple[Probability, ...], what: str) -> None:
    if not probs:
        raise ModelError(f"{what}: empty distribution")
    for p in probs:
        if isinstance(p, Fraction):
            if p < 0:
                raise ModelError(f"{what}: negative probability {p}")
        elif isinstance(p, float):
            if not math.isfinite(p) or p < 0:
                raise ModelError(f"{what}: bad probability {p!r}")
        else:
            raise ModelError(f"{what}: probability must be Fraction or float, got {type(p).__name__}")
    if all(isinstance(p, Fraction) for p in probs):
        total = sum(probs)
        if total != 1:
            raise ModelError(f"{what}: exact probabilities sum to {total}, not 1")
    else:
        total = math.fsum(float(p) for p in probs)
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise ModelError(f"{what}: probabilities sum to {total!r}, not 1")


def shannon_bits(probs) -> float:
    """Plug-in Shannon entropy in bits; zero-mass entries are skipped."""
    total = 0.0
    for p in probs:
        x = float(p)
        if x > 0.0:
            total -= x * math.log2(x)
    return total


def _encode(values, sizes) -> int:
    """Mixed-radix index of a digit tuple, most significant digit first."""
    idx = 0
    for v, s in zip(values, sizes):
        idx = idx * s + v
    return idx


@dataclass(frozen=True)
class Edge:
    """One hyperedge: its name, the users observing it, and its value pmf."""

    name: str
    subset: frozenset[int]
    pmf: tuple[Probability, ...]

    def __post_init__(self):
        object.__setattr__(self, "subset", frozenset(self.subset))
        object.__setattr__(self, "pmf", tuple(self.pmf))
        if not self.name:
            raise ModelError("edge name must be nonempty")
        if not self.subset:
            raise ModelError(f"edge {self.name!r}: user subset must be nonempty")
        _check_pmf(self.pmf, f"edge {self.name!r}")

    @classmethod
    def uniform(cls, name: str, subset, size: int) -> "Edge":
        if size < 1:
            raise ModelError(f"edge {name!r}: alphabet size must be positive, got {size}")
        return cls(name, frozenset(subset), tuple(Fraction(1, size) for _ in range(size)))

    @property
    def alphabet_size(self) -> int:
        return len(self.pmf)

    def entropy_bits(self) -> float:
        return shannon_bits(self.pmf)


@dataclass(frozen=True)
class HypergraphicalSource:
    """Independent edge variables; user i observes every edge whose subset contains i."""

    user_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.user_count < 2:
            raise ModelError(f"need at least 2 users, got {self.user_count}")
        names = [e.name for e in self.edges]
        if len(set(names)) != len(names):
            raise ModelError("edge names must be unique")
        users = self.users()
        for e in self.edges:
            if not e.subset <= users:
                raise ModelError(f"edge {e.name!r}: subset {sorted(e.subset)} outside 1..{self.user_count}")

    def users(self) -> frozenset[int]:
        return frozenset(range(1, self.user_count + 1))

    def incident(self, user: int) -> tuple[int, ...]:
        """Indices (in edge order) of the edges observed by the given user."""
        return tuple(k for k, e in enumerate(self.edges) if user in e.subset)

    def edge_named(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise ModelError(f"no edge named {name!r}")


@dataclass(frozen=True)
class FiniteLinearSource:
    """Shared uniform vector over GF(q); user i observes x @ matrices[i]."""

    q: gf.FieldOrder
    dim: int
    matrices: tuple[gf.FiniteMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", gf.FieldOrder(self.q))
        object.__setattr__(self, "matrices", tuple(self.matrices))
        if self.dim < 1:
            raise ModelError(f"ambient dimension must be positive, got {self.dim}")
        if len(self.matrices) < 2:
            raise ModelError(f"need at least 2 users, got {len(self.matrices)}")
        for i, m in enumerate(self.matrices, start=1):
            if m.q != self.q:
                raise ModelError(f"user {i}: matrix field GF({int(m.q)}) differs from GF({int(self.q)})")
            if m.rows != self.dim:
                raise ModelError(f"user {i}: matrix has {m.rows} rows, ambient dimension is {self.dim}")

    @property
    def user_count(self) -> int:
        return len(self.matrices)

    def users(self) -> frozenset[int]:
        return frozenset(range(1, self.user_count + 1))


@dataclass(frozen=True)
class DiscreteSource:
    """Explicit joint pmf over per-user finite alphabets (0-based symbol indices)."""

    alphabet_sizes: tuple[int, ...]
    pmf: dict[tuple[int, ...], Probability]

    def __post_init__(self):
        object.__setattr__(self, "alphabet_sizes", tuple(self.alphabet_sizes))
        if len(self.alphabet_sizes) < 2:
            raise ModelError(f"need at least 2 users, got {len(self.alphabet_sizes)}")
        if any(a < 1 for a in self.alphabet_sizes):
            raise ModelError("alphabet sizes must be positive")
        m = len(self.alphabet_sizes)
        cleaned: dict[tuple[int, ...], Probability] = {}
        for key in sorted(self.pmf):
            p = self.pmf[key]
            key = tuple(key)
            if len(key) != m:
                raise ModelError(f"realization {key} has {len(key)} symbols, expected {m}")
            for i, (sym, size) in enumerate(zip(key, self.alphabet_sizes), start=1):
                if not 0 <= sym < size:
                    raise ModelError(f"realization {key}: symbol {sym} outside alphabet of user {i}")
            if p != 0:
                cleaned[key] = p
        _check_pmf(tuple(cleaned.values()), "joint pmf")
        object.__setattr__(self, "pmf", cleaned)

    @property
    def user_count(self) -> int:
        return len(self.alphabet_sizes)

    def users(self) -> frozenset[int]:
        return frozenset(range(1, self.user_count + 1))

    def support(self) -> tuple[tuple[int, ...], ...]:
        """Positive-probability realizations, lexicographically sorted."""
        return tuple(self.pmf)

    def marginal(self, subset) -> dict[tuple[int, ...], Probability]:
        """Projection of the pmf onto the given users (ascending order)."""
        coords = sorted(subset)
        out: dict[tuple[int, ...], Probability] = {}
        for key, p in self.pmf.items():
            proj = tuple(key[i - 1] for i in coords)
            out[proj] = out.get(proj, 0) + p
        return out


AnySource = Union[DiscreteSource, HypergraphicalSource, FiniteLinearSource]


class EntropyProfile:
    """All subset entropies H(Z_S) in bits, S ranging over nonempty user sets.

    Serves as a bijection-invariant fingerprint of a source: two models with
    equal profiles carry the same correlation structure even if their symbol
    labelings differ.  Monotonicity and submodularity are enforced at
    construction.
    """

    def __init__(self, user_count: int, bits: dict[frozenset[int], float]):
        self.user_count = user_count
        self.bits = {frozenset(s): float(h) for s, h in bits.items()}
        expected = 2**user_count - 1
        if len(self.bits) != expected:
            raise ModelError(f"profile needs {expected} subsets, got {len(self.bits)}")
        self._validate()

    def _validate(self, tol: float = ENTROPY_TOLERANCE) -> None:
        subsets = list(self.bits)
        get = self.of
        for s in subsets:
            for u in range(1, self.user_count + 1):
                if u not in s and get(s) > get(s | {u}) + tol:
                    raise ModelError(f"profile not monotone at {sorted(s)} + user {u}")
        for s in subsets:
            for t in subsets:
                if get(s) + get(t) < get(s | t) + get(s & t) - tol:
                    raise ModelError(f"profile not submodular at {sorted(s)}, {sorted(t)}")

    def of(self, subset) -> float:
        s = frozenset(subset)
        if not s:
            return 0.0
        return self.bits[s]

    def total(self) -> float:
        return self.of(range(1, self.user_count + 1))

    def matches(self, other: "EntropyProfile", tol: float = ENTROPY_TOLERANCE) -> bool:
        if self.user_count != other.user_count:
            return False
        return all(abs(self.bits[s] - other.bits[s]) <= tol for s in self.bits)


def _nonempty_subsets(user_count: int):
    users = range(1, user_count + 1)
    return chain.from_iterable(combinations(users, k) for k in range(1, user_count + 1))


def _resolve_limit(limit: int | None) -> int:
    return expansion_limit() if limit is None else limit


def expand_hypergraphical(h: HypergraphicalSource, limit: int | None = None) -> DiscreteSource:
    """Enumerate the joint pmf of a hypergraphical source.

    Each user's symbol encodes the values of its incident edges (in edge
    order, mixed-radix); the joint probability of an assignment is the
    product over the independent edges.

    Raises:
        ExpansionTooLarge: if the product of edge alphabet sizes exceeds
            the enumeration limit.
    """
    cap = _resolve_limit(limit)
    total = math.prod(e.alphabet_size for e in h.edges)
    if total > cap:
        raise ExpansionTooLarge(f"{total} edge assignments exceed the limit of {cap}")
    incident = [h.incident(i) for i in range(1, h.user_count + 1)]
    sizes = [e.alphabet_size for e in h.edges]
    alphabets = tuple(math.prod(sizes[k] for k in inc) for inc in incident)
    exact = all(isinstance(p, Fraction) for e in h.edges for p in e.pmf)
    pmf: dict[tuple[int, ...], Probability] = {}
    for assignment in product(*(range(s) for s in sizes)):
        p: Probability = Fraction(1) if exact else 1.0
        for e, v in zip(h.edges, assignment):
            p = p * e.pmf[v]
        if p == 0:
            continue
        key = tuple(
            _encode([assignment[k] for k in inc], [sizes[k] for k in inc]) for inc in incident
        )
        pmf[key] = pmf.get(key, 0) + p
    return DiscreteSource(alphabets, pmf)


def expand_finite_linear(f: FiniteLinearSource, limit: int | None = None) -> DiscreteSource:
    """Enumerate the joint pmf of a finite linear source.

    Walks all q**dim values of the shared vector; user i's symbol encodes
    the residue tuple x @ matrices[i] in base q.

    Raises:
        ExpansionTooLarge: if q**dim exceeds the enumeration limit.
    """
    cap = _resolve_limit(limit)
    q = int(f.q)
    total = q**f.dim
    if total > cap:
        raise ExpansionTooLarge(f"{total} vector values exceed the limit of {cap}")
    alphabets = tuple(q**m.cols for m in f.matrices)
    weight = Fraction(1, total)
    pmf: dict[tuple[int, ...], Probability] = {}
    for x in product(range(q), repeat=f.dim):
        key = tuple(_encode(gf.vec_mat(x, m), [q] * m.cols) for m in f.matrices)
        pmf[key] = pmf.get(key, 0) + weight
    return DiscreteSource(alphabets, pmf)


def to_discrete(s: AnySource, limit: int | None = None) -> DiscreteSource:
    """Expand any source model to its explicit joint pmf."""
    if isinstance(s, DiscreteSource):
        cap = _resolve_limit(limit)
        if len(s.pmf) > cap:
            raise ExpansionTooLarge(f"support of {len(s.pmf)} points exceeds the limit of {cap}")
        return s
    if isinstance(s, HypergraphicalSource):
        return expand_hypergraphical(s, limit)
    if isinstance(s, FiniteLinearSource):
        return expand_finite_linear(s, limit)
    raise ModelError(f"not a source model: {type(s).__name__}")


def entropy_profile(s: AnySource, limit: int | None = None) -> EntropyProfile:
    """Subset entropies of any source model, in bits.

    Hypergraphical and linear sources use their closed forms (edge-entropy
    sums and rank times log2 q); discrete sources marginalize the pmf.
    """
    if isinstance(s, HypergraphicalSource):
        bits = {
            frozenset(sub): math.fsum(e.entropy_bits() for e in s.edges if e.subset & frozenset(sub))
            for sub in _nonempty_subsets(s.user_count)
        }
        return EntropyProfile(s.user_count, bits)
    if isinstance(s, FiniteLinearSource):
        log_q = math.log2(int(s.q))
        bits = {
            frozenset(sub): gf.rank(gf.hstack(*(s.matrices[i - 1] for i in sub))) * log_q
            for sub in _nonempty_subsets(s.user_count)
        }
        return EntropyProfile(s.user_count, bits)
    if isinstance(s, DiscreteSource):
        to_discrete(s, limit)  # enforce the support cap
        bits = {
            frozenset(sub): shannon_bits(s.marginal(sub).values())
            for sub in _nonempty_subsets(s.user_count)
        }
        return EntropyProfile(s.user_count, bits)
    raise ModelError(f"not a source model: {type(s).__name__}")


def fls_to_hypergraphical(f: FiniteLinearSource) -> HypergraphicalSource:
    """Rewrite a two-user finite linear source as a hypergraphical one.

    Splits the two observation spans into a shared part (the intersection
    of the column spaces) and per-user remainders, each carried by one
    uniform edge.  The three bases are jointly independent, which is what
    makes the edge variables independent; that joint full rank is asserted,
    as is equality of the entropy profiles of input and output.

    Raises:
        NotTwoUsers: for sources with more or fewer than two users.
        InternalRankError: if one of the construction's guaranteed
            identities fails (a bug, not a data problem).
    """
    if f.user_count != 2:
        raise NotTwoUsers(f"conversion needs exactly 2 users, got {f.user_count}")
    first = gf.reduce_to_full_column_rank(f.matrices[0])
    second = gf.reduce_to_full_column_rank(f.matrices[1])
    shared = gf.column_space_intersection(first, second)
    own1 = gf.extend_basis(shared, first)
    own2 = gf.extend_basis(shared, second)
    combined = gf.hstack(shared, own1, own2)
    if gf.rank(combined) != combined.cols:
        raise InternalRankError("joint basis of shared and remainder parts is rank deficient")
    q = int(f.q)
    edges = [
        Edge.uniform(name, subset, q**mat.cols)
        for name, subset, mat in (("shared", {1, 2}, shared), ("own1", {1}, own1), ("own2", {2}, own2))
        if mat.cols > 0
    ]
    result = HypergraphicalSource(2, tuple(edges))
    if not entropy_profile(f).matches(entropy_profile(result)):
        raise InternalRankError("conversion changed the entropy profile")
    return result
