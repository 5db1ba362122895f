"""Zero-discussion agreement simulator.

Draws i.i.d. realizations of a source, has every user apply a deterministic
decoder (derived from a common-function witness) to its own observation only,
and checks that all users produce the identical key stream with no messages
exchanged.  The empirical key rate is compared against the witness entropy
with a concentration-style tolerance.
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import ModelError, SubspaceNotContained, WitnessInvalid
from .gf import FiniteMatrix, solve, vec_mat
from .mcf import CommonFunctionWitness, Source, common_function
from .sources import (
    DiscreteSource,
    FiniteLinearSource,
    HypergraphicalSource,
    shannon_bits,
    to_discrete,
)

Decoder = Callable[[tuple], object]


@dataclass(frozen=True)
class KeyExtractor:
    """Per-user deterministic key maps realizing a common-function witness.

    source is the model the decoders read observations of (a discrete view of
    the original model when the witness is a support labeling).  decoders[i]
    maps user (i+1)'s observation to the key label.  surprise_var is the
    variance of the label's surprisal in bits^2, used for the empirical-rate
    tolerance; label_count the number of possible labels.
    """

    source: Source
    witness: CommonFunctionWitness
    decoders: tuple
    expected_bits: float
    surprise_var: float
    label_count: int


def _surprise_stats(probs) -> tuple:
    """(entropy, variance of -log2 p) for a probability vector."""
    ps = [float(p) for p in probs if p > 0]
    surprises = [-math.log2(p) for p in ps]
    mean = math.fsum(p * s for p, s in zip(ps, surprises))
    var = math.fsum(p * (s - mean) ** 2 for p, s in zip(ps, surprises))
    return mean, var


def _edge_subset_extractor(
    s: HypergraphicalSource, w: CommonFunctionWitness
) -> KeyExtractor:
    everyone = s.users()
    names = {e.name for e in s.edges}
    chosen = []
    for name in w.payload:
        if name not in names:
            raise WitnessInvalid(f"witness names unknown edge {name!r}")
        e = s.edge_named(name)
        if e.subset != everyone:
            raise WitnessInvalid(
                f"edge {name!r} is not observed by every user; "
                "some user cannot compute the key"
            )
        chosen.append(e)
    chosen_indices = [k for k, e in enumerate(s.edges) if e.name in set(w.payload)]
    decoders = []
    for user in range(1, s.user_count + 1):
        incident = s.incident(user)
        positions = tuple(incident.index(k) for k in chosen_indices)

        def decode(obs, positions=positions):
            return tuple(obs[p] for p in positions)

        decoders.append(decode)
    var = math.fsum(_surprise_stats(e.pmf)[1] for e in chosen)
    count = 1
    for e in chosen:
        count *= e.alphabet_size
    return KeyExtractor(s, w, tuple(decoders), w.entropy_bits, var, count)


def _subspace_extractor(
    s: FiniteLinearSource, w: CommonFunctionWitness
) -> KeyExtractor:
    basis: FiniteMatrix = w.payload
    if basis.q != s.q or basis.rows != s.dim:
        raise WitnessInvalid("witness basis has the wrong field or dimension")
    decoders = []
    for mat in s.matrices:
        try:
            coeffs = solve(mat, basis)
        except (SubspaceNotContained, ModelError) as exc:
            raise WitnessInvalid(
                "witness subspace is not computable from every observation"
            ) from exc

        def decode(obs, coeffs=coeffs):
            return tuple(vec_mat(list(obs), coeffs))

        decoders.append(decode)
    # the key is uniform over the image: surprisal is constant, variance zero
    count = int(s.q) ** basis.cols
    return KeyExtractor(s, w, tuple(decoders), w.entropy_bits, 0.0, count)


def _labeling_extractor(s: Source, w: CommonFunctionWitness) -> KeyExtractor:
    d = to_discrete(s)
    support = set(d.support())
    if not support <= set(w.payload):
        raise WitnessInvalid("labeling does not cover the support")
    m = len(d.alphabet_sizes)
    decoders = []
    for coord in range(m):
        fiber: dict = {}
        for realization in d.support():
            v = realization[coord]
            label = w.payload[realization]
            if fiber.setdefault(v, label) != label:
                raise WitnessInvalid(
                    f"user {coord + 1} cannot compute the labeling: "
                    f"symbol {v} belongs to two different labels"
                )

        def decode(obs, fiber=fiber):
            return fiber[obs]

        decoders.append(decode)
    masses: dict = {}
    for realization, p in d.pmf.items():
        label = w.payload[realization]
        masses[label] = masses.get(label, 0) + p
    _, var = _surprise_stats(masses.values())
    return KeyExtractor(d, w, tuple(decoders), w.entropy_bits, var, len(masses))


def build_extractor(
    s: Source, witness: Optional[CommonFunctionWitness] = None
) -> KeyExtractor:
    w = witness if witness is not None else common_function(s)
    if w.kind == "edge-subset":
        if not isinstance(s, HypergraphicalSource):
            raise WitnessInvalid("edge-subset witness needs a hypergraphical source")
        return _edge_subset_extractor(s, w)
    if w.kind == "subspace-basis":
        if not isinstance(s, FiniteLinearSource):
            raise WitnessInvalid("subspace-basis witness needs a finite linear source")
        return _subspace_extractor(s, w)
    if w.kind == "support-labeling":
        return _labeling_extractor(s, w)
    raise WitnessInvalid(f"unknown witness kind: {w.kind!r}")


def _observation_sampler(s: Source) -> Callable[[random.Random], tuple]:
    """Returns rng -> (obs_1, ..., obs_m), one observation per user."""
    if isinstance(s, HypergraphicalSource):
        cdfs = []
        for e in s.edges:
            acc, cum = 0.0, []
            for p in e.pmf:
                acc += float(p)
                cum.append(acc)
            cum[-1] = 1.0
            cdfs.append(cum)
        incident = [s.incident(u) for u in range(1, s.user_count + 1)]

        def draw(rng: random.Random) -> tuple:
            values = [bisect.bisect_right(cum, rng.random()) for cum in cdfs]
            return tuple(
                tuple(values[k] for k in inc) for inc in incident
            )

        return draw
    if isinstance(s, FiniteLinearSource):
        q = int(s.q)

        def draw(rng: random.Random) -> tuple:
            x = [rng.randrange(q) for _ in range(s.dim)]
            return tuple(tuple(vec_mat(x, mat)) for mat in s.matrices)

        return draw
    if isinstance(s, DiscreteSource):
        support = s.support()
        acc, cum = 0.0, []
        for realization in support:
            acc += float(s.pmf[realization])
            cum.append(acc)
        cum[-1] = 1.0

        def draw(rng: random.Random) -> tuple:
            realization = support[bisect.bisect_right(cum, rng.random())]
            return tuple(realization)

        return draw
    raise ModelError(f"unrecognized source type: {type(s).__name__}")


@dataclass(frozen=True)
class SimulationRun:
    """Outcome of n zero-discussion key-extraction rounds."""

    n: int
    seed: int
    per_user_keys: tuple  # one label sequence per user
    agreement: bool
    empirical_rate_bits: float
    expected_rate_bits: float
    rate_ok: bool
    discussion_bits: int = 0


def rate_tolerance(surprise_var: float, label_count: int, n: int) -> float:
    """Allowed |empirical - expected| gap: three standard errors of the mean
    surprisal plus a plug-in bias allowance of order label_count/n."""
    return 3.0 * math.sqrt(surprise_var / n) + 3.0 * label_count / n


def run(
    s: Source,
    n: int,
    seed: int,
    witness: Optional[CommonFunctionWitness] = None,
) -> SimulationRun:
    if n < 1:
        raise ModelError("need at least one round")
    ext = build_extractor(s, witness)
    draw = _observation_sampler(ext.source)
    rng = random.Random(seed)
    keys: list = [[] for _ in ext.decoders]
    for _ in range(n):
        world = draw(rng)
        for i, decode in enumerate(ext.decoders):
            keys[i].append(decode(world[i]))
    first = keys[0]
    agreement = all(stream == first for stream in keys[1:])
    counts: dict = {}
    for label in first:
        counts[label] = counts.get(label, 0) + 1
    empirical = shannon_bits(c / n for c in counts.values())
    gap = abs(empirical - ext.expected_bits)
    ok = gap <= rate_tolerance(ext.surprise_var, ext.label_count, n)
    return SimulationRun(
        n=n,
        seed=seed,
        per_user_keys=tuple(tuple(stream) for stream in keys),
        agreement=agreement,
        empirical_rate_bits=empirical,
        expected_rate_bits=ext.expected_bits,
        rate_ok=ok,
    )
