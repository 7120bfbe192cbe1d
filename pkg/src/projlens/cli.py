"""Command-line front end.

Exit codes: 0 success, 1 usage or validation error, 2 unresolved verdict,
3 a check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import classify, tables
from .diagram import DiagramError, make_diagram, parse_family
from .fingeo import GeometryError, exhaustive_oracle_check, make_geometry, oracle_check
from .gf import check_field
from .levi import LeviError, standard_flag, unipotent_transitivity_check
from .roots import opposition, polar_type

OK, USAGE, UNRESOLVED, FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _types(text: str) -> list[int]:
    try:
        out = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad type list {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty type list")
    return out


def _fmt(J) -> str:
    return "{" + ",".join(str(j) for j in sorted(J)) + "}"


def _emit(obj, as_json: bool, text: str) -> None:
    print(json.dumps(obj, sort_keys=True) if as_json else text)


def _diagram(args):
    fam, rank = parse_family(args.family, args.rank)
    return make_diagram(fam, rank)


# -- verbs -------------------------------------------------------------------


def cmd_diagram(args) -> int:
    d = _diagram(args)
    op = opposition(d)
    pt = polar_type(d)
    obj = {
        "family": d.family_hint[0],
        "rank": d.rank,
        "nodes": list(d.nodes),
        "edges": [list(e) for e in sorted(d.edges)],
        "opposition": {str(k): v for k, v in sorted(op.items())},
        "polar_type": sorted(pt),
    }
    lines = [
        f"diagram\t{d}",
        "edges\t" + " ".join(f"{i}-{j}" for i, j in sorted(d.edges)),
        "opposition\t" + " ".join(f"{k}->{v}" for k, v in sorted(op.items())),
        f"polar_type\t{_fmt(pt)}",
    ]
    _emit(obj, args.json, "\n".join(lines))
    return OK


def cmd_classify(args) -> int:
    d = _diagram(args)
    v = classify.n_of(d, args.types)
    if args.json:
        print(v.to_json())
    else:
        delta = "-" if v.delta is None else " ".join(f"{k}->{x}" for k, x in sorted(v.delta.items()))
        print(f"{d}\t{_fmt(args.types)}\tn={v.n}\t{v.decided_by}\tdelta={delta}")
    return OK if v.resolved else UNRESOLVED


def cmd_enumerate(args) -> int:
    d = _diagram(args)
    count, found = classify.enumerate_types(d, args.filter)
    obj = {"family": str(d), "filter": args.filter, "count": count, "types": [sorted(J) for J in found]}
    text = "\n".join([f"count\t{count}"] + [_fmt(J) for J in found])
    _emit(obj, args.json, text)
    return OK


def cmd_table(args) -> int:
    fam, rank = parse_family(args.family, args.rank)
    sys.stdout.write(tables.render_table(fam, rank))
    return OK


def _mcor_diagrams(args):
    if args.family and any(ch.isdigit() for ch in args.family):
        fam, rank = parse_family(args.family)
        yield make_diagram(fam, rank)
        return
    fams = [args.family.upper()] if args.family else ["A", "D", "E"]
    for fam in fams:
        lo = {"A": 1, "D": 4, "E": 6}[fam]
        hi = min(args.max_rank, 8) if fam == "E" else args.max_rank
        for r in range(lo, hi + 1):
            yield make_diagram(fam, r)


def cmd_mcor(args) -> int:
    rows, ok = [], True
    for d in _mcor_diagrams(args):
        J, unique = classify.smallest_opposition_kernel(d, args.mode)
        pt = polar_type(d)
        good = unique and J == pt
        ok &= good
        rows.append({"diagram": str(d), "kernel": sorted(J), "unique": unique,
                     "polar_type": sorted(pt), "match": good})
    text = "\n".join(
        f"{r['diagram']}\t{_fmt(r['kernel'])}\tunique={r['unique']}\tpolar={_fmt(r['polar_type'])}\t"
        + ("ok" if r["match"] else "MISMATCH")
        for r in rows
    )
    _emit(rows, args.json, text)
    return OK if ok else FAILED


def cmd_brute(args) -> int:
    from .projgrp import generate_projectivity_groups, induced_stabiliser_group, residue_domain

    geom = make_geometry(args.geometry, args.q)
    nodes = set(geom.diagram.nodes)
    if (args.cotype is None) == (args.types is None):
        raise UsageError("give exactly one of --cotype and --types")
    J = set(args.types) if args.types is not None else nodes - set(args.cotype)
    if not J or not J <= nodes:
        raise UsageError(f"flag type {_fmt(J)} is not a nonempty subset of {_fmt(nodes)}")
    rng = np.random.default_rng(args.seed)
    F = geom.random_flag(J, rng)
    dom = residue_domain(geom, F)
    res = generate_projectivity_groups(geom, F, budget=args.budget, seed=args.seed, dom=dom)
    rep = res.report()
    if args.stabiliser:
        S = induced_stabiliser_group(geom, F, dom)
        rep["stabiliser_order"] = S.order()
        rep["stabiliser_equals_pi_plus"] = S.equals(res.pi_plus)
    print(json.dumps(rep, sort_keys=True))
    if args.stabiliser and not rep["stabiliser_equals_pi_plus"]:
        return FAILED
    return OK if rep["index"] in (1, 2) else FAILED


def cmd_levi(args) -> int:
    geom = make_geometry(f"A{args.dim}", args.q)
    F = standard_flag(args.dim, args.flag, geom.q)
    rep = unipotent_transitivity_check(geom, geom.q, F)
    print(json.dumps(rep.to_dict(), sort_keys=True))
    return OK if rep.ok else FAILED


def cmd_oracle_check(args) -> int:
    geom = make_geometry(args.geometry, args.q)
    rep = exhaustive_oracle_check(geom) if args.exhaustive else oracle_check(geom, args.samples, args.seed)
    print(json.dumps(rep.to_dict(), sort_keys=True))
    return OK if rep.mismatches == 0 else FAILED


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="projlens", description="Projectivity groups of simply laced spherical buildings.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def fam(sp, rank=True):
        sp.add_argument("--family", required=True, help="E7, or E together with --rank")
        if rank:
            sp.add_argument("--rank", type=int)
        sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("diagram", help="diagram, opposition and polar type")
    fam(sp)
    sp.set_defaults(func=cmd_diagram)

    sp = sub.add_parser("classify", help="n(J) with the filter that decides it")
    fam(sp)
    sp.add_argument("--types", type=_types, required=True)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("enumerate", help="list types passing a filter")
    fam(sp)
    sp.add_argument("--filter", choices=classify.FILTERS, default="all-proper-nonempty")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("table", help="projectivity group table as TSV")
    sp.add_argument("--family", required=True)
    sp.add_argument("--rank", type=int)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("mcor", help="smallest opposition kernel against the polar type")
    sp.add_argument("--family")
    sp.add_argument("--max-rank", type=int, default=9)
    sp.add_argument("--mode", choices=("cotype", "overline"), default="cotype")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_mcor)

    sp = sub.add_parser("brute", help="generate projectivity groups in a finite building")
    sp.add_argument("--geometry", required=True, choices=("A2", "A3", "D4", "D5"))
    sp.add_argument("--q", type=int, required=True, choices=(2, 3))
    sp.add_argument("--cotype", type=_types, help="types of the residue (the flag type is the rest)")
    sp.add_argument("--types", type=_types, help="type of the flag")
    sp.add_argument("--budget", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--stabiliser", action="store_true", help="also compare with the flag stabiliser (type A)")
    sp.set_defaults(func=cmd_brute)

    sp = sub.add_parser("levi", help="Levi decomposition checks in PG(d, q)")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--flag", type=_types, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.set_defaults(func=cmd_levi)

    sp = sub.add_parser("oracle-check", help="perspectivities against the gallery oracle")
    sp.add_argument("--geometry", required=True, choices=("A2", "A3", "D4", "D5"))
    sp.add_argument("--q", type=int, required=True, choices=(2, 3))
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--exhaustive", action="store_true")
    sp.set_defaults(func=cmd_oracle_check)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "q", None) is not None:
            check_field(args.q)
        if getattr(args, "budget", 1) < 1:
            raise UsageError("--budget must be positive")
        if getattr(args, "samples", 1) < 1:
            raise UsageError("--samples must be positive")
        return args.func(args)
    except (UsageError, DiagramError, GeometryError, LeviError, ValueError) as e:
        print(f"projlens: error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
