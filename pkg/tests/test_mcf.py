"""Common-function engines: closed forms versus the support-graph oracle."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest

from zerotalk.errors import ExpansionTooLarge
from zerotalk.gf import FiniteMatrix, intersect_all
from zerotalk.mcf import (
    common_function,
    evaluate_witness,
    gk_finite_linear,
    gk_hypergraphical,
    gk_oracle,
    jgk,
)
from zerotalk.sources import (
    DiscreteSource,
    Edge,
    FiniteLinearSource,
    HypergraphicalSource,
    to_discrete,
)


from helpers import bfs_components, partition_of, random_fls, random_hypergraphical


# --- goldens ---


def test_shared_bit_witness(shared_bit_source):
    w = gk_hypergraphical(shared_bit_source)
    assert w.kind == "edge-subset"
    assert w.payload == ("c",)
    assert w.entropy_bits == pytest.approx(1.0, abs=1e-12)
    assert jgk(shared_bit_source) == pytest.approx(1.0, abs=1e-12)


def test_pairwise_xor_is_trivial(pairwise_xor_source):
    w = gk_finite_linear(pairwise_xor_source)
    assert w.kind == "subspace-basis"
    assert w.payload.cols == 0
    assert w.entropy_bits == 0.0


def test_overlap_pair_witness(overlap_pair_source):
    w = gk_finite_linear(overlap_pair_source)
    assert w.payload.cols == 1
    assert w.payload.col(0) == (1, 1, 0)
    assert w.entropy_bits == pytest.approx(1.0, abs=1e-12)


def test_oracle_on_shared_bit(shared_bit_source):
    w = gk_oracle(shared_bit_source)
    assert w.kind == "support-labeling"
    assert len(set(w.payload.values())) == 2
    assert w.entropy_bits == pytest.approx(1.0, abs=1e-12)


def test_oracle_on_pairwise_xor(pairwise_xor_source):
    w = gk_oracle(pairwise_xor_source)
    assert len(set(w.payload.values())) == 1
    assert w.entropy_bits == 0.0


def test_oracle_fully_disconnected():
    # one global edge: each realization is its own component
    h = HypergraphicalSource(2, (Edge.uniform("e", {1, 2}, 4),))
    w = gk_oracle(h)
    assert len(set(w.payload.values())) == 4
    assert w.entropy_bits == pytest.approx(2.0, abs=1e-12)


def test_oracle_labels_are_canonical():
    h = HypergraphicalSource(2, (Edge.uniform("e", {1, 2}, 3),))
    w = gk_oracle(h)
    # lexicographically smallest realization gets label 0, next gets 1, ...
    ordered = sorted(w.payload)
    assert [w.payload[r] for r in ordered] == [0, 1, 2]


def test_oracle_respects_limit(shared_bit_source):
    with pytest.raises(ExpansionTooLarge):
        gk_oracle(shared_bit_source, limit=3)


# --- oracle vs independent reference ---


@pytest.mark.parametrize("seed", range(12))
def test_oracle_matches_quadratic_reference(seed):
    rng = random.Random(seed)
    users = rng.randrange(2, 4)
    source = random_hypergraphical(rng, users, rng.randrange(1, 4))
    d = to_discrete(source)
    w = gk_oracle(d)
    support = d.support()
    comp, count = bfs_components(support)
    assert len(set(w.payload.values())) == count
    reference = {}
    for idx, realization in enumerate(support):
        reference[realization] = comp[idx]
    assert partition_of(w.payload) == partition_of(reference)


def test_oracle_labeling_is_computable_by_every_user():
    rng = random.Random(7)
    for _ in range(8):
        d = to_discrete(random_hypergraphical(rng, 3, 2))
        w = gk_oracle(d)
        m = len(d.alphabet_sizes)
        for coord in range(m):
            seen = {}
            for realization, label in w.payload.items():
                v = realization[coord]
                assert seen.setdefault(v, label) == label, (
                    "coordinate value maps to two different labels"
                )


# --- closed form vs oracle ---


@pytest.mark.parametrize("seed", range(20))
def test_hypergraphical_closed_form_matches_oracle(seed):
    rng = random.Random(1000 + seed)
    h = random_hypergraphical(rng, rng.randrange(2, 4), rng.randrange(0, 4))
    closed = gk_hypergraphical(h)
    oracle = gk_oracle(h)
    assert closed.entropy_bits == pytest.approx(oracle.entropy_bits, abs=1e-9)


@pytest.mark.parametrize("seed", range(20))
def test_finite_linear_closed_form_matches_oracle(seed):
    rng = random.Random(2000 + seed)
    f = random_fls(rng, rng.randrange(2, 4))
    closed = gk_finite_linear(f)
    oracle = gk_oracle(f)
    assert closed.entropy_bits == pytest.approx(oracle.entropy_bits, abs=1e-9)


def test_witness_entropy_survives_brute_force(shared_bit_source, overlap_pair_source):
    for s in (shared_bit_source, overlap_pair_source):
        w = common_function(s)
        assert evaluate_witness(s, w) == pytest.approx(w.entropy_bits, abs=1e-9)


def test_dispatcher_matches_engines(shared_bit_source, pairwise_xor_source):
    assert common_function(shared_bit_source).kind == "edge-subset"
    assert common_function(pairwise_xor_source).kind == "subspace-basis"
    d = to_discrete(shared_bit_source)
    assert common_function(d).kind == "support-labeling"
    assert jgk(d) == pytest.approx(jgk(shared_bit_source), abs=1e-9)


# --- structural properties ---


def test_dropping_a_user_never_decreases_common_information():
    rng = random.Random(333)
    for _ in range(10):
        f = random_fls(rng, 3)
        full = gk_finite_linear(f).entropy_bits
        for pair in itertools.combinations(range(3), 2):
            sub = FiniteLinearSource(f.q, f.dim, tuple(f.matrices[i] for i in pair))
            assert gk_finite_linear(sub).entropy_bits >= full - 1e-12


def test_intersection_fold_is_order_invariant():
    rng = random.Random(55)
    for _ in range(10):
        f = random_fls(rng, 3)
        mats = list(f.matrices)
        base = intersect_all(mats)
        for perm in itertools.permutations(mats):
            assert intersect_all(list(perm)).entries == base.entries


def test_common_information_bounded_by_min_marginal():
    rng = random.Random(77)
    for _ in range(10):
        h = random_hypergraphical(rng, 3, 3)
        d = to_discrete(h)
        w = gk_oracle(d)
        from zerotalk.sources import entropy_profile

        prof = entropy_profile(d)
        least = min(prof.of({i}) for i in range(1, 4))
        assert w.entropy_bits <= least + 1e-9


def test_oracle_exact_masses_give_exact_dyadic_entropy():
    # 4 equiprobable components -> exactly 2 bits with Fraction masses
    h = HypergraphicalSource(2, (Edge.uniform("e", {1, 2}, 4),))
    assert gk_oracle(h).entropy_bits == 2.0
