"""``hyperdet`` command-line interface.

Every subcommand prints exactly one JSON record per input on stdout (ring
values as strings) and diagnostics on stderr.  Exit codes: 0 success,
2 input error, 3 budget exceeded, 4 hypothesis or precondition not met.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import time
from typing import Sequence

from . import capset, determinant, formats, order, ranks
from .errors import (
    BudgetExceeded,
    DisconnectedPoset,
    HypothesisNotMet,
    NotEchelon,
    OddOrder,
    ParseError,
    UnsupportedRing,
)
from .ranks import Justification, RankCertificate, RankKind
from .ring import parse_ring
from .rng import Stream, random_tensor

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_HYPOTHESIS = 0, 2, 3, 4


def _emit(record: dict):
    sys.stdout.write(json.dumps(record, separators=(",", ":")) + "\n")


def _budget(args) -> int | None:
    b = getattr(args, "budget", None)
    if b is not None:
        return b
    env = os.environ.get("HYPERDET_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"HYPERDET_BUDGET must be an integer, got {env!r}") from None
    return None


def _dp_budget(args) -> int:
    b = _budget(args)
    return determinant.DP_BUDGET if b is None else b


def _covers(P) -> list[list[int]]:
    return [[a, b] for a, b in P.covers]


# -- subcommands ----------------------------------------------------------------------


def cmd_det(args) -> int:
    T = formats.load_tensor(args.tensor)
    D = determinant.hyperdet(T, engine=args.engine, budget=_budget(args))
    _emit({"det": str(D)})
    return EXIT_OK


def cmd_knull(args) -> int:
    T = formats.load_tensor(args.tensor)
    b = _budget(args)
    res = determinant.is_k_null(T, args.k, determinant.MINOR_BUDGET if b is None else b)
    rec = {"k": args.k, "null": res.null, "witness": None, "det": None}
    if res.witness is not None:
        rec["witness"] = [list(s) for s in res.witness.index_sets]
        rec["det"] = str(res.det)
    _emit(rec)
    return EXIT_OK


def _trivial(T, kind: RankKind) -> RankCertificate:
    try:
        one = ranks.is_simple(T, kind)
    except UnsupportedRing:
        one = None
    terms = [one] if one is not None else ranks.upper_witness(T, kind)
    lower = 0 if T.is_zero() else 1
    return RankCertificate(kind, lower, Justification.TRIVIAL, len(terms), tuple(terms))


def rank_bound(T, kind: RankKind, budget: int) -> RankCertificate:
    """Best certificate available for ``kind`` without exhaustive search."""
    if T.d < 2 or T.n == 0:
        return _trivial(T, kind)
    if kind is RankKind.PARTITION:
        if T.spec.characteristic > 0:
            cert = ranks.certify_prank_bound(T, budget)
            if cert is not None:
                return cert
        return _trivial(T, kind)
    full = ranks.certify_via_echelon(T) or ranks.certify_oprank_full(T, budget)
    if full is None:
        return _trivial(T, kind)
    if kind is RankKind.ODD_PARTITION:
        return full
    for c in full.implied:
        if c.kind is kind:
            if kind is RankKind.TENSOR:
                terms = ranks.upper_witness(T, kind)
                return RankCertificate(kind, c.lower, c.justification, len(terms), tuple(terms), det=c.det)
            return c
    return _trivial(T, kind)


def cmd_rank_bound(args) -> int:
    T = formats.load_tensor(args.tensor)
    cert = rank_bound(T, RankKind.parse(args.kind), _dp_budget(args))
    _emit(cert.to_record())
    return EXIT_OK


def cmd_rank_exact(args) -> int:
    T = formats.load_tensor(args.tensor)
    kind = RankKind.parse(args.kind)
    b = _budget(args)
    res = ranks.brute_force_rank(T, kind, args.rmax, ranks.SIMPLE_BUDGET if b is None else b)
    if res is None:
        _emit({"kind": kind.value, "rank": None, "rmax": args.rmax, "terms": []})
    else:
        _emit({"kind": kind.value, "rank": res.rank, "rmax": args.rmax,
               "terms": [t.to_record() for t in res.terms]})
    return EXIT_OK


def cmd_echelon(args) -> int:
    T = formats.load_tensor(args.tensor)
    if args.poset:
        P = formats.load_poset(args.poset)
        check = order.is_echelon_form(T, P)
        if check:
            _emit({"echelon": True, "det": str(order.echelon_det(T, P))})
        else:
            _emit({"echelon": False, "violation": list(check.violation)})
        return EXIT_OK
    P = order.find_echelon_poset(T)
    _emit({"poset": None if P is None else _covers(P)})
    return EXIT_OK


def cmd_capset_verify(args) -> int:
    F = formats.load_family(args.family)
    P = formats.load_poset(args.poset) if args.poset else None
    cert = capset.certify_family(F, P, _dp_budget(args))
    if not cert.check:
        _emit({"ok": False, "counterexample": list(cert.check.counterexample), "reason": cert.check.reason})
        return EXIT_OK
    _emit({
        "ok": cert.ok,
        "poset": _covers(cert.check.poset),
        "det": str(cert.det),
        "prank_lower": cert.prank.lower,
        "N": F.N,
        "bound": cert.exact_bound,
    })
    return EXIT_OK


def cmd_capset_bound(args) -> int:
    ch = capset.gamma_bound(args.p, args.d)
    sb = capset.size_bound(args.p, args.n, args.d)
    if args.plain:
        sys.stdout.write(f"c={sb.c} gamma={ch.gamma:.12g} bound={sb.exact}\n")
    else:
        _emit({"c": sb.c, "gamma": f"{ch.gamma:.12g}", "bound": sb.exact, "gamma_bound": sb.bound})
    return EXIT_OK


def cmd_capset_search(args) -> int:
    b = _budget(args)
    F = capset.search_sum_ordered(args.p, args.n, args.d, args.size,
                                  capset.SEARCH_BUDGET if b is None else b)
    if F is None:
        _emit({"found": False})
        return EXIT_OK
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(formats.format_family(F))
    _emit({"found": True, "vectors": F.vectors.tolist()})
    return EXIT_OK


def _shape(text: str) -> tuple[int, int]:
    try:
        d, n = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"shape must look like DxN, got {text!r}") from None
    return d, n


def bench_rows(shapes, engines, spec, reps: int, seed: int, budget: int | None):
    """``(engine, d, n, ring, median seconds or None, status)`` per cell."""
    root = Stream(seed)
    rows = []
    for d, n in shapes:
        T = random_tensor(root.child(f"bench-{d}x{n}"), d, n, spec)
        for engine in engines:
            times, status = [], "ok"
            try:
                determinant.hyperdet(T, engine=engine, budget=budget)  # warm caches
                for _ in range(reps):
                    t0 = time.perf_counter()
                    determinant.hyperdet(T, engine=engine, budget=budget)
                    times.append(time.perf_counter() - t0)
            except BudgetExceeded:
                status = "budget"
            except OddOrder:
                status = "odd-order"
            rows.append((engine, d, n, str(spec), statistics.median(times) if times else None, status))
    return rows


def cmd_bench(args) -> int:
    spec = parse_ring(args.ring)
    rows = bench_rows(args.shapes, args.engines.split(","), spec, args.reps, args.seed, _budget(args))
    out = ["engine,d,n,ring,median_s,status"]
    for engine, d, n, ring, med, status in rows:
        out.append(f"{engine},{d},{n},{ring},{'' if med is None else f'{med:.6g}'},{status}")
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help="work budget (overrides HYPERDET_BUDGET)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="accepted for compatibility; evaluation is single-threaded")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for generated data")

    parser = argparse.ArgumentParser(prog="hyperdet", parents=[common],
                                     description="Exact Cayley hyperdeterminants and rank certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("det", parents=[common], help="hyperdeterminant of a tensor file")
    p.add_argument("tensor")
    p.add_argument("--engine", choices=["naive", "dp", "laplace"], default="dp")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("knull", parents=[common], help="test whether every k-minor vanishes")
    p.add_argument("tensor")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_knull)

    kinds = [k.value for k in RankKind]
    p = sub.add_parser("rank-bound", parents=[common], help="certified rank lower bound")
    p.add_argument("tensor")
    p.add_argument("--kind", choices=kinds, default="oprank")
    p.set_defaults(func=cmd_rank_bound)

    p = sub.add_parser("rank-exact", parents=[common], help="exact rank over a small prime field")
    p.add_argument("tensor")
    p.add_argument("--kind", choices=kinds, required=True)
    p.add_argument("--rmax", type=int, required=True)
    p.set_defaults(func=cmd_rank_exact)

    p = sub.add_parser("echelon", parents=[common], help="P-echelon detection")
    p.add_argument("tensor")
    p.add_argument("--poset")
    p.set_defaults(func=cmd_echelon)

    cp = sub.add_parser("capset", help="colored sum-ordered sets")
    csub = cp.add_subparsers(dest="capset_command", required=True)
    p = csub.add_parser("verify", parents=[common])
    p.add_argument("family")
    p.add_argument("--poset")
    p.set_defaults(func=cmd_capset_verify)
    p = csub.add_parser("bound", parents=[common])
    for flag in ("--p", "--n", "--d"):
        p.add_argument(flag, type=int, required=True)
    p.add_argument("--plain", action="store_true", help="print 'c=.. gamma=.. bound=..' instead of JSON")
    p.set_defaults(func=cmd_capset_bound)
    p = csub.add_parser("search", parents=[common])
    for flag in ("--p", "--n", "--d", "--size"):
        p.add_argument(flag, type=int, required=True)
    p.add_argument("--out", help="also write the family in csf format")
    p.set_defaults(func=cmd_capset_search)

    p = sub.add_parser("bench", parents=[common], help="engine timings as CSV")
    p.add_argument("--shapes", type=lambda s: [_shape(x) for x in s.split(",")], default=[(4, 4), (3, 7)])
    p.add_argument("--engines", default="naive,dp")
    p.add_argument("--ring", default="Fp:7")
    p.add_argument("--reps", type=int, default=5)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "seed"):
        args.seed = 0
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"hyperdet: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (HypothesisNotMet, OddOrder, DisconnectedPoset, NotEchelon) as exc:
        print(f"hyperdet: precondition not met: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (OSError, ValueError, IndexError) as exc:
        print(f"hyperdet: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
