"""Command-line front end.

Exit codes: 0 success or ok verdict, 1 not found or violation, 2 unmet
precondition, 3 parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import bounds, montecarlo
from .errors import ConstructionError, ContextError, ParseError, PreconditionError
from .groups import parse_group
from .multiset import parse_elements, parse_multiset
from .realize import brute_force_realize, delta, realize_multiset, verify_realization
from .sequencing import (
    DEFAULT_BUDGET,
    DEFAULT_MAX_ATTEMPTS,
    brute_force_sequence,
    partial_sums,
    sequence_multiset,
    verify_t_weak,
)

EXIT_OK, EXIT_NOT_FOUND, EXIT_PRECONDITION, EXIT_PARSE = 0, 1, 2, 3
SEED_ENV = "WEAKSEQ_SEED"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _default_seed():
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return _seed(env)
    except argparse.ArgumentTypeError as exc:
        raise ParseError(f"{SEED_ENV}: {exc}") from None


def _int_list(text):
    """``3``, ``1,2,5`` or an inclusive range ``1:20``."""
    out = []
    for part in text.split(","):
        lo, _, hi = part.partition(":")
        try:
            lo_i = int(lo)
            hi_i = int(hi) if hi else lo_i
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
        out.extend(range(lo_i, hi_i + 1))
    return out


def _emit(out, fmt, payload, plain=None, rows=None):
    if fmt == "json":
        out.write(json.dumps(payload) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for r in rows or [list(payload), list(payload.values())]:
            w.writerow(r)
        out.write(buf.getvalue())
    else:
        out.write((plain if plain is not None else " ".join(f"{k}={v}" for k, v in payload.items())) + "\n")


def _elems(G, xs):
    return [G.to_json(x) for x in xs]


def cmd_verify_seq(a, out):
    G = parse_group(a.group)
    ordering = parse_elements(G, a.ordering)
    v = verify_t_weak(G, ordering, a.t)
    payload = {
        "group": G.spec,
        "t": a.t,
        "ordering": _elems(G, ordering),
        "partial_sums": _elems(G, partial_sums(G, ordering)),
        "verified": v.ok,
        "stage": None,
        "violation": list(v.where) if v.where else None,
    }
    _emit(out, a.format, payload, plain="ok" if v.ok else f"violation {v.where}")
    return EXIT_OK if v.ok else EXIT_NOT_FOUND


def cmd_sequence(a, out):
    G = parse_group(a.group)
    M = parse_multiset(G, a.multiset)
    payload = {"group": G.spec, "t": a.t, "seed": a.seed}
    try:
        res = sequence_multiset(M, a.t, seed=a.seed, ell=a.ell, max_attempts=a.max_attempts, budget=a.budget)
    except ConstructionError as exc:
        payload.update(ordering=[], partial_sums=[], verified=False, stage=exc.stage, error=str(exc))
        _emit(out, a.format, payload, plain=f"failed at {exc.stage}: {exc}")
        return EXIT_NOT_FOUND
    ok = verify_t_weak(G, res.ordering, a.t).ok
    payload.update(
        ordering=_elems(G, res.ordering),
        partial_sums=_elems(G, partial_sums(G, res.ordering)),
        verified=ok,
        stage=res.stage,
    )
    plain = ",".join(G.format_element(x) for x in res.ordering) + f"  (seed {a.seed})"
    _emit(out, a.format, payload, plain=plain)
    return EXIT_OK if ok else EXIT_NOT_FOUND


def cmd_verify_real(a, out):
    G = parse_group(a.group)
    walk = parse_elements(G, a.walk)
    M = parse_multiset(G, a.multiset)
    v = verify_realization(G, walk, M, a.t)
    payload = {
        "group": G.spec,
        "t": a.t,
        "walk": _elems(G, walk),
        "delta": _elems(G, delta(G, walk)),
        "verified": v.ok,
        "route": None,
        "condition": v.condition,
        "where": list(v.where) if v.where else None,
    }
    _emit(out, a.format, payload, plain="ok" if v.ok else f"fails {v.condition} {v.where or ''}".rstrip())
    return EXIT_OK if v.ok else EXIT_NOT_FOUND


def cmd_realize(a, out):
    G = parse_group(a.group)
    M = parse_multiset(G, a.multiset)
    payload = {"group": G.spec, "t": a.t, "seed": a.seed}
    try:
        res = realize_multiset(M, a.t, seed=a.seed, max_attempts=a.max_attempts, budget=a.budget)
    except ConstructionError as exc:
        payload.update(walk=[], delta=[], verified=False, route=None, error=str(exc))
        _emit(out, a.format, payload, plain=f"failed: {exc}")
        return EXIT_NOT_FOUND
    ok = verify_realization(G, res.walk, M, a.t).ok
    payload.update(walk=_elems(G, res.walk), delta=_elems(G, delta(G, res.walk)), verified=ok, route=res.route)
    plain = ",".join(G.format_element(x) for x in res.walk) + f"  ({res.route}, seed {a.seed})"
    _emit(out, a.format, payload, plain=plain)
    return EXIT_OK if ok else EXIT_NOT_FOUND


def cmd_bound(a, out):
    ells = a.ell
    rows = []
    for t in a.t:
        for ell in ells if ells is not None else [bounds.min_ell(t)]:
            r = bounds.expectation_bound(t, ell)
            rows.append([t, ell, r.bound_rational, repr(r.bound_float), "", "", ""])
    if a.format == "json":
        payload = [dict(zip(montecarlo.CSV_COLUMNS[:4], [*r[:3], float(Fraction(r[2]))])) for r in rows]
        out.write(json.dumps(payload if len(payload) > 1 else payload[0]) + "\n")
    elif a.format == "csv":
        _emit(out, "csv", {}, rows=[list(montecarlo.CSV_COLUMNS)] + rows)
    else:
        if len(rows) == 1:
            out.write(rows[0][2] + "\n")
        else:
            for r in rows:
                out.write(f"t={r[0]} ell={r[1]} bound={r[2]}\n")
    return EXIT_OK


def cmd_min_ell(a, out):
    rows = [(t, bounds.min_ell(t)) for t in a.t]
    if a.format == "json":
        payload = [{"t": t, "min_ell": m} for t, m in rows]
        out.write(json.dumps(payload if len(payload) > 1 else payload[0]) + "\n")
    elif a.format == "csv":
        _emit(out, "csv", {}, rows=[["t", "min_ell"]] + [list(r) for r in rows])
    else:
        out.write("\n".join(str(m) if len(rows) == 1 else f"t={t} min_ell={m}" for t, m in rows) + "\n")
    return EXIT_OK


def cmd_montecarlo(a, out):
    G = parse_group(a.group)
    ell = a.ell[0] if a.ell else bounds.min_ell(a.t)
    sc = montecarlo.build_scenario(G, a.t, ell, seed=a.seed)
    r = montecarlo.run_scenario(sc, a.trials, seed=a.seed, workers=a.workers)
    if a.format == "csv":
        _emit(out, "csv", {}, rows=[list(montecarlo.CSV_COLUMNS), r.csv_row()])
    else:
        payload = {"group": G.spec, "seed": a.seed, **r.to_json(), "within_bound": r.within_bound()}
        _emit(out, a.format, payload)
    return EXIT_OK


def cmd_search(a, out):
    G = parse_group(a.group)
    M = parse_multiset(G, a.multiset)
    if a.mode == "seq":
        res = brute_force_sequence(M, a.t, budget=a.budget)
        key, value = "ordering", res.value
    else:
        res = brute_force_realize(M, a.t, budget=a.budget)
        key, value = "walk", res.value
    payload = {
        "group": G.spec,
        "t": a.t,
        "mode": a.mode,
        "status": res.status,
        key: _elems(G, value) if value is not None else None,
        "nodes": res.nodes,
    }
    plain = res.status if value is None else ",".join(G.format_element(x) for x in value)
    _emit(out, a.format, payload, plain=plain)
    return EXIT_OK if value is not None else EXIT_NOT_FOUND


def build_parser():
    p = _Parser(prog="weakseq", description="t-weak sequencings and walk realizations in finite groups")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, fmt="json", help=None):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=("json", "csv", "plain"), default=fmt)
        return sp

    def group_t(sp, t_list=False):
        if not t_list:
            sp.add_argument("--group", required=True, help="Z<v>, Z<a>xZ<b>... or cayley:<path>")
        sp.add_argument("--t", type=_int_list if t_list else int, required=True)

    def randomized(sp):
        sp.add_argument("--seed", type=_seed, default=None)
        sp.add_argument("--max-attempts", type=int, default=DEFAULT_MAX_ATTEMPTS)
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    sp = add("verify-seq", cmd_verify_seq, help="check an ordering for t-weakness")
    group_t(sp)
    sp.add_argument("--ordering", required=True)

    sp = add("sequence", cmd_sequence, help="find a t-weak sequencing of a multiset")
    group_t(sp)
    sp.add_argument("--multiset", required=True)
    sp.add_argument("--ell", type=int, default=None)
    randomized(sp)

    sp = add("verify-real", cmd_verify_real, help="check a walk realization")
    group_t(sp)
    sp.add_argument("--walk", required=True)
    sp.add_argument("--multiset", required=True)

    sp = add("realize", cmd_realize, help="find a weak walk realization of a multiset")
    group_t(sp)
    sp.add_argument("--multiset", required=True)
    randomized(sp)

    sp = add("bound", cmd_bound, fmt="plain", help="evaluate the collision expectation bound")
    group_t(sp, t_list=True)
    sp.add_argument("--ell", type=_int_list, default=None, help="ell, list or range a:b (default min ell)")

    sp = add("min-ell", cmd_min_ell, fmt="plain", help="smallest ell with bound below 1")
    group_t(sp, t_list=True)

    sp = add("montecarlo", cmd_montecarlo, help="simulate the random-tail experiment")
    group_t(sp)
    sp.add_argument("--ell", type=_int_list, default=None)
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--seed", type=_seed, default=None)

    sp = add("search", cmd_search, help="brute-force sequencing or realization search")
    group_t(sp)
    sp.add_argument("--multiset", required=True)
    sp.add_argument("--mode", choices=("seq", "real"), default="seq")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if hasattr(args, "seed"):
            if args.seed is None:
                args.seed = _default_seed()
            print(f"seed: {args.seed}", file=err)
        return args.func(args, out)
    except (ParseError, ContextError) as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"precondition unmet: {exc}", file=err)
        return EXIT_PRECONDITION
    except ConstructionError as exc:
        print(f"not found ({exc.stage}): {exc}", file=err)
        return EXIT_NOT_FOUND


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
