"""Shared test utilities: random model generators and reference algorithms."""

from __future__ import annotations

import random

from zerotalk.gf import FiniteMatrix
from zerotalk.sources import Edge, FiniteLinearSource, HypergraphicalSource


def random_hypergraphical(rng: random.Random, users: int, edge_count: int) -> HypergraphicalSource:
    names = [f"e{i}" for i in range(edge_count)]
    all_users = list(range(1, users + 1))
    edges = []
    for name in names:
        k = rng.randrange(1, users + 1)
        subset = frozenset(rng.sample(all_users, k))
        edges.append(Edge.uniform(name, subset, rng.choice([2, 2, 3])))
    return HypergraphicalSource(users, tuple(edges))


def random_fls(rng: random.Random, users: int) -> FiniteLinearSource:
    q = rng.choice([2, 3])
    dim = rng.randrange(1, 4)
    mats = tuple(
        FiniteMatrix(q, dim, cols, tuple(rng.randrange(q) for _ in range(dim * cols)))
        for cols in (rng.randrange(0, 3) for _ in range(users))
    )
    return FiniteLinearSource(q, dim, mats)


def bfs_components(support):
    """Quadratic pairwise-linkage reference: link realizations sharing any
    coordinate, return (component id per index, component count)."""
    n = len(support)
    adj = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if any(a == b for a, b in zip(support[i], support[j])):
                adj[i].append(j)
                adj[j].append(i)
    comp = [-1] * n
    count = 0
    for start in range(n):
        if comp[start] != -1:
            continue
        stack = [start]
        comp[start] = count
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if comp[v] == -1:
                    comp[v] = count
                    stack.append(v)
        count += 1
    return comp, count


def partition_of(labeling):
    blocks = {}
    for realization, label in labeling.items():
        blocks.setdefault(label, set()).add(realization)
    return {frozenset(b) for b in blocks.values()}
