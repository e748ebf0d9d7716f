"""Command-line entry points.

Exit codes: 0 on success, 1 when a verification found violations,
2 on usage or input errors.  Generator words on the command line are
comma-separated 1-based indices ("1,2,1"); "e" is the identity.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys

from . import harness
from .bruhat import build_interval, bruhat_leq
from .coxeter import CoxeterError, CoxeterSystem, build_system, parse_word
from .isosearch import find_isomorphisms, fingerprint
from .klpoly import parabolic_p_poly, parabolic_r_poly


def _load_system(spec: str) -> CoxeterSystem:
    if spec.endswith(".json"):
        with open(spec) as fh:
            return build_system(json.load(fh))
    return build_system(spec)


def _element(sys: CoxeterSystem, text: str):
    if text in ("e", ""):
        return sys.identity()
    return sys.from_word(parse_word(text))


def _subset(sys: CoxeterSystem, text: str | None) -> frozenset[int]:
    if not text:
        return frozenset()
    return sys.check_subset(int(p) - 1 for p in text.split(","))


def _poly_line(name: str, p) -> str:
    return f"{name} = {p}   coeffs (lowest first): {list(p.coeffs)}"


def cmd_system(args) -> int:
    sys = _load_system(args.spec)
    desc = sys.description()
    print(f"type: {desc['type']}  rank: {sys.rank}")
    print(f"finite: {sys.is_finite}" + ("" if sys.is_finite else f"  length cap: {sys.length_cap}"))
    print("coxeter matrix (0 = infinity):")
    for row in sys.coxeter_matrix:
        print("  " + " ".join(f"{m:>2}" for m in row))
    if sys.is_finite:
        elements = sys.elements()
        w0 = sys.longest_element()
        print(f"order: {len(elements)}  longest element: {w0.word_str()} (length {w0.length})")
    print(f"checksum: {sys.checksum()}")
    return 0


def cmd_interval(args) -> int:
    sys = _load_system(args.spec)
    u, v = _element(sys, args.u), _element(sys, args.v)
    if not bruhat_leq(u, v):
        print(f"{args.u} is not below {args.v} in Bruhat order")
        return 1
    interval = build_interval(u, v, with_bruhat_graph=args.graph)
    fp = fingerprint(interval, include_graph=args.graph)
    print(f"[{u.word_str() or 'e'}, {v.word_str() or 'e'}]  size {interval.size}  height {interval.height}")
    print(f"rank vector: {list(fp.rank_vector)}")
    for y in interval.elements:
        print(f"  rank {interval.rank_of(y)}: {y.word_str() or 'e'}")
    print(f"covers: {len(interval.covers)}")
    if args.graph:
        gaps = sorted(y2.length - y1.length for y1, y2, _ in interval.bruhat_edges)
        print(f"bruhat-graph edges: {len(gaps)}  length gaps: {gaps}")
    return 0


def cmd_poly(args) -> int:
    sys = _load_system(args.spec)
    u, v = _element(sys, args.u), _element(sys, args.v)
    J = _subset(sys, args.J)
    fn = parabolic_r_poly if args.kind == "r" else parabolic_p_poly
    p = fn(u, v, J, args.x)
    label = "R" if args.kind == "r" else "P"
    print(_poly_line(f"{label}^(J, x={args.x})_({args.u}, {args.v})", p))
    return 0


def cmd_verify(args) -> int:
    if args.campaign:
        with open(args.campaign) as fh:
            spec = harness.CampaignSpec.from_dict(json.load(fh))
    else:
        spec = harness.default_campaign_spec(parallelism=args.jobs)
    if args.jobs != 1:
        spec = harness.CampaignSpec.from_dict({**spec.to_dict(), "parallelism": args.jobs})
    if args.output:
        spec = harness.CampaignSpec.from_dict({**spec.to_dict(), "output_path": args.output})
    report = harness.run_campaign(spec)
    print(harness.report_to_text(report), end="")
    if report["conjecture_violations"]:
        return 1
    return 0 if report["total_violations"] == 0 else 1


def cmd_remark(args) -> int:
    try:
        record = harness.reproduce_remark()
    except harness.HarnessError as exc:
        print(f"example reproduction FAILED: {exc}")
        return 1
    print(json.dumps(record, indent=2, sort_keys=True))
    return 0


def cmd_dump(args) -> int:
    sys = _load_system(args.spec)
    J = _subset(sys, args.J)
    table = harness.table_dump(sys, J, args.x, args.kind.upper(), args.output)
    print(f"wrote {len(table.entries)} entries to {args.output}")
    return 0


def cmd_iso(args) -> int:
    sys = _load_system(args.spec)
    i1 = build_interval(_element(sys, args.u1), _element(sys, args.v1))
    i2 = build_interval(_element(sys, args.u2), _element(sys, args.v2))
    constraint = None
    if args.constraint:
        J1, J2 = _subset(sys, args.J1), _subset(sys, args.J2)
        constraint = (args.constraint, J1, J2)
    found = find_isomorphisms(i1, i2, constraint, limit=args.limit)
    if not found:
        print("no isomorphism")
        return 1
    for k, w in enumerate(found):
        print(f"witness {k + 1}: atoms={w.respects_atoms} quotient={w.respects_quotient}")
        for a, b in w.as_pairs():
            print(f"  {a or 'e'} -> {b or 'e'}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bruhatlab",
        description="Exact Bruhat-order and Kazhdan-Lusztig polynomial workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("system", help="inspect a Coxeter system")
    ssub = p.add_subparsers(dest="action", required=True)
    pv = ssub.add_parser("validate", help="validate and summarize a system")
    pv.add_argument("spec", help="builtin name (A3, B4, D5, H3, ...) or a JSON file")
    pv.set_defaults(func=cmd_system)

    p = sub.add_parser("interval", help="materialize a Bruhat interval")
    isub = p.add_subparsers(dest="action", required=True)
    pi = isub.add_parser("show", help="print the elements and shape of [u, v]")
    pi.add_argument("spec")
    pi.add_argument("u", help="word as comma-separated 1-based generator indices, or 'e'")
    pi.add_argument("v")
    pi.add_argument("--graph", action="store_true", help="also build the Bruhat graph")
    pi.set_defaults(func=cmd_interval)

    p = sub.add_parser("poly", help="compute an R- or P-polynomial")
    p.add_argument("kind", choices=["r", "p"])
    p.add_argument("spec")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--J", default="", help="parabolic subset, 1-based indices (default empty)")
    p.add_argument("--x", default="q", choices=["-1", "q"])
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("verify", help="run a verification campaign")
    p.add_argument("campaign", nargs="?", help="campaign JSON file (default: stock campaign)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", help="write the machine-readable report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("remark", help="reproduce the S4 atom-invariance counterexample")
    p.set_defaults(func=cmd_remark)

    p = sub.add_parser("dump", help="dump a polynomial table to JSON")
    p.add_argument("kind", choices=["r", "p"])
    p.add_argument("spec")
    p.add_argument("output")
    p.add_argument("--J", default="")
    p.add_argument("--x", default="q", choices=["-1", "q"])
    p.set_defaults(func=cmd_dump)

    p = sub.add_parser("iso", help="search for interval isomorphisms")
    p.add_argument("spec")
    p.add_argument("u1")
    p.add_argument("v1")
    p.add_argument("u2")
    p.add_argument("v2")
    p.add_argument("--constraint", choices=["atoms", "quotient"])
    p.add_argument("--J1", default="")
    p.add_argument("--J2", default="")
    p.add_argument("--limit", type=int, default=1)
    p.set_defaults(func=cmd_iso)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (CoxeterError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2


if __name__ == "__main__":
    _sys.exit(main())
