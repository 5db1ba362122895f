"""Command-line front end.

Subcommands:

* jgk       compute the common-function entropy and its witness
* bound     evaluate the partition bound at a discussion rate
* oracle    brute-force the common function on the expanded support
* convert   rewrite a two-user linear model as an equivalent edge model
* verify    cross-check closed forms, chain bound, and brute force
* simulate  run the zero-discussion key agreement simulator

Model files are JSON documents with a "model" discriminator:

  {"model": "hypergraphical", "users": 3,
   "edges": [{"name": "c", "subset": [1, 2, 3], "uniform": 2},
             {"name": "a", "subset": [1, 3], "pmf": ["1/2", "1/2"]}]}

  {"model": "finite_linear", "q": 2, "dim": 3,
   "matrices": {"1": [[1, 0], [1, 1], [0, 0]], "2": [[0], [1], [1]]}}

  {"model": "discrete", "alphabets": [2, 2],
   "pmf": [{"symbols": [0, 0], "p": "1/2"}, {"symbols": [1, 1], "p": "1/2"}]}

Probabilities are JSON numbers or exact fraction strings "a/b".  User ids are
1-based; discrete symbols 0-based.  Exit codes: 0 success, 1 verification
mismatch, 2 malformed input file, 3 invalid model, 4 unsupported model for
the operation, 5 resource limit hit (see ZEROTALK_EXPANSION_LIMIT).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import random
import sys
from fractions import Fraction
from typing import Optional

from . import __version__
from .bounds import (
    Partition,
    best_partition,
    chain_bound,
    lamination_bound,
    singleton_partition,
)
from .errors import (
    ExpansionTooLarge,
    ModelError,
    ParseError,
    TooManyUsers,
    UnsupportedModel,
    ZerotalkError,
)
from .gf import FiniteMatrix
from .mcf import common_function, evaluate_witness, gk_oracle, jgk
from .sim import run as run_simulation
from .sources import (
    DiscreteSource,
    Edge,
    FiniteLinearSource,
    HypergraphicalSource,
    entropy_profile,
    fls_to_hypergraphical,
    to_discrete,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_MODEL = 3
EXIT_UNSUPPORTED = 4
EXIT_RESOURCE = 5

TOLERANCE = 1e-9


# --- model file parsing ---


def _require(doc: dict, key: str, kind, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"{where}: missing key {key!r}")
    value = doc[key]
    if kind is int and isinstance(value, bool):
        raise ParseError(f"{where}: {key!r} must be an integer")
    if not isinstance(value, kind):
        raise ParseError(f"{where}: {key!r} has the wrong type")
    return value


def _parse_probability(value, where: str):
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError)  as exc:
            raise ParseError(f"{where}: bad fraction string {value!r}") from exc
    if isinstance(value, bool):
        raise ParseError(f"{where}: probability must be a number or 'a/b' string")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    raise ParseError(f"{where}: probability must be a number or 'a/b' string")


def _parse_hypergraphical(doc: dict) -> HypergraphicalSource:
    users = _require(doc, "users", int, "hypergraphical model")
    raw_edges = _require(doc, "edges", list, "hypergraphical model")
    edges = []
    for i, item in enumerate(raw_edges):
        where = f"edge #{i}"
        name = _require(item, "name", str, where)
        subset = _require(item, "subset", list, where)
        if not all(isinstance(u, int) and not isinstance(u, bool) for u in subset):
            raise ParseError(f"{where}: subset must be a list of integers")
        if "uniform" in item and "pmf" in item:
            raise ParseError(f"{where}: give either 'uniform' or 'pmf', not both")
        if "uniform" in item:
            size = _require(item, "uniform", int, where)
            if size < 1:
                raise ParseError(f"{where}: uniform alphabet size must be positive")
            edges.append(Edge.uniform(name, subset, size))
        elif "pmf" in item:
            pmf = _require(item, "pmf", list, where)
            edges.append(
                Edge(name, frozenset(subset),
                     tuple(_parse_probability(p, where) for p in pmf))
            )
        else:
            raise ParseError(f"{where}: needs 'uniform' or 'pmf'")
    return HypergraphicalSource(users, tuple(edges))


def _parse_finite_linear(doc: dict) -> FiniteLinearSource:
    q = _require(doc, "q", int, "finite_linear model")
    dim = _require(doc, "dim", int, "finite_linear model")
    raw = _require(doc, "matrices", dict, "finite_linear model")
    try:
        ids = sorted(int(k) for k in raw)
    except ValueError as exc:
        raise ParseError("finite_linear model: matrix keys must be user ids") from exc
    if ids != list(range(1, len(ids) + 1)):
        raise ParseError(
            f"finite_linear model: user ids must be 1..{len(ids)}, got {ids}"
        )
    matrices = []
    for uid in ids:
        rows = raw[str(uid)]
        where = f"matrix for user {uid}"
        if not isinstance(rows, list):
            raise ParseError(f"{where}: must be a list of rows")
        for row in rows:
            if not isinstance(row, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in row
            ):
                raise ParseError(f"{where}: rows must be lists of integers")
        widths = {len(row) for row in rows}
        if len(widths) > 1:
            raise ParseError(f"{where}: ragged rows")
        cols = widths.pop() if widths else 0
        try:
            matrices.append(FiniteMatrix.from_rows(q, rows, cols=cols))
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}") from exc
    return FiniteLinearSource(q, dim, tuple(matrices))


def _parse_discrete(doc: dict) -> DiscreteSource:
    alphabets = _require(doc, "alphabets", list, "discrete model")
    if not all(isinstance(a, int) and not isinstance(a, bool) for a in alphabets):
        raise ParseError("discrete model: alphabets must be a list of integers")
    raw = _require(doc, "pmf", list, "discrete model")
    pmf = {}
    for i, item in enumerate(raw):
        where = f"pmf entry #{i}"
        symbols = _require(item, "symbols", list, where)
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in symbols):
            raise ParseError(f"{where}: symbols must be integers")
        if len(symbols) != len(alphabets):
            raise ParseError(
                f"{where}: {len(symbols)} symbols for {len(alphabets)} users"
            )
        key = tuple(symbols)
        if key in pmf:
            raise ParseError(f"{where}: duplicate realization {key}")
        if "p" not in item:
            raise ParseError(f"{where}: missing key 'p'")
        pmf[key] = _parse_probability(item["p"], where)
    return DiscreteSource(tuple(alphabets), pmf)


_PARSERS = {
    "hypergraphical": _parse_hypergraphical,
    "finite_linear": _parse_finite_linear,
    "discrete": _parse_discrete,
}


def parse_model(doc) -> object:
    if not isinstance(doc, dict):
        raise ParseError("model file must be a JSON object")
    kind = _require(doc, "model", str, "model file")
    if kind not in _PARSERS:
        raise ParseError(
            f"unknown model {kind!r}; expected one of {sorted(_PARSERS)}"
        )
    return _PARSERS[kind](doc)


def load_model(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    return parse_model(doc)


def model_kind(s) -> str:
    if isinstance(s, HypergraphicalSource):
        return "hypergraphical"
    if isinstance(s, FiniteLinearSource):
        return "finite_linear"
    return "discrete"


def user_count(s) -> int:
    if isinstance(s, DiscreteSource):
        return len(s.alphabet_sizes)
    return s.user_count


# --- model file writing (convert) ---


def render_hypergraphical(h: HypergraphicalSource) -> dict:
    edges = []
    for e in h.edges:
        item: dict = {"name": e.name, "subset": sorted(e.subset)}
        uniform = Fraction(1, e.alphabet_size)
        if all(p == uniform for p in e.pmf):
            item["uniform"] = e.alphabet_size
        else:
            item["pmf"] = [
                f"{p.numerator}/{p.denominator}" if isinstance(p, Fraction) else p
                for p in e.pmf
            ]
        edges.append(item)
    return {"model": "hypergraphical", "users": h.user_count, "edges": edges}


# --- reporting helpers ---


def _round6(x: float) -> float:
    r = round(float(x), 6)
    return 0.0 if r == 0 else r


def _jsonable(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return _round6(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(report: dict, lines, as_json: bool) -> None:
    if as_json:
        print(json.dumps(_jsonable(report), indent=2))
    else:
        for line in lines:
            print(line)


def _bits(x: float) -> str:
    return f"{x:.6f}"


def _witness_summary(w) -> dict:
    if w.kind == "edge-subset":
        return {"kind": w.kind, "edges": list(w.payload)}
    if w.kind == "subspace-basis":
        basis: FiniteMatrix = w.payload
        return {
            "kind": w.kind,
            "q": int(basis.q),
            "basis_columns": [list(basis.col(j)) for j in range(basis.cols)],
        }
    return {"kind": w.kind, "labels": len(set(w.payload.values()))}


def _witness_lines(w) -> list:
    if w.kind == "edge-subset":
        inner = ", ".join(w.payload) if w.payload else ""
        return [f"witness edges: {{{inner}}}"]
    if w.kind == "subspace-basis":
        basis: FiniteMatrix = w.payload
        cols = [list(basis.col(j)) for j in range(basis.cols)]
        return [f"witness subspace basis columns (GF({int(basis.q)})): {cols}"]
    return [f"witness labels: {len(set(w.payload.values()))} support components"]


# --- subcommands ---


def cmd_jgk(args) -> int:
    s = load_model(args.model)
    w = common_function(s)
    report = {
        "command": "jgk",
        "model": model_kind(s),
        "users": user_count(s),
        "jgk_bits": w.entropy_bits,
        "witness": _witness_summary(w),
    }
    lines = [
        f"model: {model_kind(s)} ({user_count(s)} users)",
        f"J_GK = {_bits(w.entropy_bits)} bits",
        *_witness_lines(w),
    ]
    _emit(report, lines, args.json)
    return EXIT_OK


def parse_partition_text(text: str, users: int) -> Partition:
    if text == "singletons":
        return singleton_partition(users)
    blocks = []
    for chunk in text.split("/"):
        members = []
        for token in chunk.split(","):
            token = token.strip()
            if not token:
                raise ParseError(f"bad partition syntax: {text!r}")
            try:
                members.append(int(token))
            except ValueError as exc:
                raise ParseError(f"bad partition syntax: {text!r}") from exc
        blocks.append(members)
    return Partition(users, blocks)


def cmd_bound(args) -> int:
    s = load_model(args.model)
    converted = False
    if isinstance(s, FiniteLinearSource):
        s = fls_to_hypergraphical(s)  # NotTwoUsers -> exit 4
        converted = True
    if not isinstance(s, HypergraphicalSource):
        raise UnsupportedModel(
            "the partition bound needs edge structure; "
            "give a hypergraphical model or a two-user finite_linear model"
        )
    if args.search:
        b = best_partition(s)
    else:
        b = lamination_bound(s, parse_partition_text(args.partition, s.user_count))
    value = b.bound_at(args.rate)
    report = {
        "command": "bound",
        "model": "hypergraphical",
        "converted_from_finite_linear": converted,
        "partition": [list(block) for block in b.partition.blocks],
        "coefficient": b.coefficient,
        "vacuous": b.vacuous,
        "intercept_bits": b.intercept_bits,
        "rate_bits": float(args.rate),
        "bound_bits": None if b.vacuous else value,
    }
    lines = [
        f"partition: {'/'.join(','.join(map(str, blk)) for blk in b.partition.blocks)}",
        f"spread coefficient: {b.coefficient}",
    ]
    if b.vacuous:
        lines.append("bound: vacuous (coefficient is 1)")
    else:
        lines.append(
            f"bound at rate {_bits(args.rate)}: {_bits(value)} bits "
            f"(intercept {_bits(b.intercept_bits)})"
        )
    _emit(report, lines, args.json)
    return EXIT_OK


def cmd_oracle(args) -> int:
    s = load_model(args.model)
    d = to_discrete(s)
    w = gk_oracle(d)
    labels = len(set(w.payload.values()))
    report = {
        "command": "oracle",
        "model": model_kind(s),
        "users": user_count(s),
        "support": len(d.support()),
        "components": labels,
        "jgk_bits": w.entropy_bits,
    }
    lines = [
        f"model: {model_kind(s)} ({user_count(s)} users)",
        f"support size: {len(d.support())}",
        f"connected components: {labels}",
        f"J_GK = {_bits(w.entropy_bits)} bits",
    ]
    _emit(report, lines, args.json)
    return EXIT_OK


def cmd_convert(args) -> int:
    s = load_model(args.model)
    if not isinstance(s, FiniteLinearSource):
        raise UnsupportedModel("convert expects a finite_linear model")
    h = fls_to_hypergraphical(s)  # NotTwoUsers -> exit 4
    doc = json.dumps(render_hypergraphical(h), indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc + "\n")
        if not args.json:
            print(f"wrote {args.out}")
    else:
        print(doc)
    return EXIT_OK


def _random_model(rng: random.Random):
    if rng.random() < 0.5:
        users = rng.randrange(2, 5)
        edges = []
        for i in range(rng.randrange(0, 5)):
            k = rng.randrange(1, users + 1)
            subset = frozenset(rng.sample(range(1, users + 1), k))
            edges.append(Edge.uniform(f"e{i}", subset, rng.choice([2, 2, 3])))
        return HypergraphicalSource(users, tuple(edges))
    users = rng.randrange(2, 4)
    q = rng.choice([2, 3, 5])
    dim = rng.randrange(1, 4)
    mats = tuple(
        FiniteMatrix(
            q, dim, cols, tuple(rng.randrange(q) for _ in range(dim * cols))
        )
        for cols in (rng.randrange(0, 3) for _ in range(users))
    )
    return FiniteLinearSource(q, dim, mats)


def _verify_one(s) -> list:
    """Cross-checks for one model; returns (name, ok, detail) triples."""
    checks = []
    kind = model_kind(s)
    w = common_function(s)
    closed = w.entropy_bits

    oracle_bits = gk_oracle(s).entropy_bits
    checks.append(
        (
            "closed_form_vs_oracle",
            abs(closed - oracle_bits) <= TOLERANCE,
            f"{_bits(closed)} vs {_bits(oracle_bits)}",
        )
    )

    brute = evaluate_witness(s, w)
    checks.append(
        (
            "witness_entropy_brute_force",
            abs(closed - brute) <= TOLERANCE,
            f"{_bits(closed)} vs {_bits(brute)}",
        )
    )

    profile_ok = entropy_profile(s).matches(entropy_profile(to_discrete(s)))
    checks.append(
        (
            "expansion_preserves_profile",
            profile_ok,
            "all subset entropies within tolerance" if profile_ok else "profile drift",
        )
    )

    if kind in ("hypergraphical", "finite_linear"):
        chain = chain_bound(s)
        checks.append(
            (
                "chain_vs_closed_form",
                abs(chain - closed) <= TOLERANCE,
                f"{_bits(chain)} vs {_bits(closed)}",
            )
        )
        m = user_count(s)
        if m <= 4:
            import itertools

            values = {
                round(chain_bound(s, order), 12)
                for order in itertools.permutations(range(1, m + 1))
            }
            checks.append(
                (
                    "chain_ordering_invariance",
                    len(values) == 1,
                    f"{len(values)} distinct value(s) over {math.factorial(m)} orderings",
                )
            )

    lam_target: Optional[HypergraphicalSource] = None
    if isinstance(s, HypergraphicalSource):
        lam_target = s
    elif isinstance(s, FiniteLinearSource) and s.user_count == 2:
        lam_target = fls_to_hypergraphical(s)
        conv_ok = entropy_profile(s).matches(entropy_profile(lam_target))
        checks.append(
            (
                "conversion_preserves_profile",
                conv_ok,
                "converted model matches" if conv_ok else "profile drift",
            )
        )
    if lam_target is not None:
        b = best_partition(lam_target)
        if b.vacuous:
            checks.append(
                ("lamination_at_zero", True, "best partition vacuous; nothing to check")
            )
        else:
            at_zero = b.bound_at(0.0)
            target_bits = jgk(lam_target)
            checks.append(
                (
                    "lamination_at_zero",
                    abs(at_zero - target_bits) <= TOLERANCE,
                    f"{_bits(at_zero)} vs {_bits(target_bits)}",
                )
            )
    return checks


def cmd_verify(args) -> int:
    if args.random is not None:
        if args.model is not None:
            raise ParseError("give a model file or --random, not both")
        rng = random.Random(args.seed)
        models = [_random_model(rng) for _ in range(args.random)]
        scope = f"{args.random} random models (seed {args.seed})"
    else:
        if args.model is None:
            raise ParseError("give a model file or --random N")
        models = [load_model(args.model)]
        scope = args.model

    all_checks = []
    for idx, s in enumerate(models):
        for name, ok, detail in _verify_one(s):
            all_checks.append(
                {
                    "model_index": idx,
                    "name": name,
                    "status": "ok" if ok else "mismatch",
                    "detail": detail,
                }
            )
    ok_count = sum(1 for c in all_checks if c["status"] == "ok")
    all_ok = ok_count == len(all_checks)
    report = {
        "command": "verify",
        "scope": scope,
        "checks": all_checks,
        "passed": ok_count,
        "total": len(all_checks),
        "all_ok": all_ok,
    }
    lines = []
    for c in all_checks:
        prefix = f"[{c['model_index']}] " if len(models) > 1 else ""
        lines.append(f"{prefix}{c['name']}: {c['status']} ({c['detail']})")
    lines.append(f"{ok_count}/{len(all_checks)} checks passed")
    _emit(report, lines, args.json)
    return EXIT_OK if all_ok else EXIT_MISMATCH


def cmd_simulate(args) -> int:
    s = load_model(args.model)
    result = run_simulation(s, n=args.n, seed=args.seed)
    digests = [
        hashlib.sha256(",".join(repr(label) for label in stream).encode()).hexdigest()
        for stream in result.per_user_keys
    ]
    preview = [repr(label) for label in result.per_user_keys[0][:16]]
    report = {
        "command": "simulate",
        "model": model_kind(s),
        "users": user_count(s),
        "n": result.n,
        "seed": result.seed,
        "agreement": result.agreement,
        "discussion_bits": result.discussion_bits,
        "empirical_rate_bits": result.empirical_rate_bits,
        "expected_rate_bits": result.expected_rate_bits,
        "rate_ok": result.rate_ok,
        "key_digests": digests,
        "first_labels": preview,
    }
    lines = [
        f"model: {model_kind(s)} ({user_count(s)} users)",
        f"rounds: {result.n}, seed: {result.seed}",
        f"agreement: {'yes' if result.agreement else 'NO'}",
        f"discussion bits: {result.discussion_bits}",
        (
            f"key rate: empirical {_bits(result.empirical_rate_bits)}, "
            f"expected {_bits(result.expected_rate_bits)} bits/round "
            f"({'ok' if result.rate_ok else 'OUT OF TOLERANCE'})"
        ),
    ]
    if result.agreement:
        lines.append(f"key digest: {digests[0]}")
    else:
        for i, digest in enumerate(digests, start=1):
            lines.append(f"user {i} key digest: {digest}")
    lines.append(f"first labels: {' '.join(preview) if preview else '(none)'}")
    _emit(report, lines, args.json)
    return EXIT_OK


# --- entry point ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerotalk",
        description="Secrecy capacity at zero discussion rate for "
        "multiterminal source models.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("jgk", help="common-function entropy and witness")
    p.add_argument("model", help="model file (JSON)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_jgk)

    p = sub.add_parser("bound", help="partition bound at a discussion rate")
    p.add_argument("model", help="model file (JSON)")
    group = p.add_mutually_exclusive_group()
    group.add_argument(
        "--partition",
        default="singletons",
        help="blocks as '1,2/3' or 'singletons' (default)",
    )
    group.add_argument(
        "--search", action="store_true", help="exhaustive best-partition search"
    )
    p.add_argument("--rate", type=float, default=0.0, help="discussion rate in bits")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("oracle", help="brute-force common function")
    p.add_argument("model", help="model file (JSON)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("convert", help="two-user linear model to edge model")
    p.add_argument("model", help="model file (JSON)")
    p.add_argument(
        "--to",
        choices=["hypergraphical"],
        required=True,
        help="target model family",
    )
    p.add_argument("--out", help="write the converted model here instead of stdout")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("verify", help="cross-check engines against brute force")
    p.add_argument("model", nargs="?", help="model file (JSON)")
    p.add_argument("--random", type=int, help="verify N random models instead")
    p.add_argument("--seed", type=int, default=0, help="seed for --random")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="zero-discussion key agreement run")
    p.add_argument("model", help="model file (JSON)")
    p.add_argument("--n", type=int, default=1000, help="number of rounds")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ExpansionTooLarge, TooManyUsers) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except UnsupportedModel as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ZerotalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
