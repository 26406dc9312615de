"""Command-line front end.

Exit codes: 0 success, 1 a mathematical violation was found, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence, TextIO

from .branches import branches_from_dict, build_cluster, cluster_to_graph
from .calculus import (
    analysis_dict,
    check_axioms,
    edge_decorations,
    format_rational,
    lct,
    numerical_data_linear,
)
from .errors import ParseError, ResgraphError
from .fuzz import FuzzConfig, run_fuzz
from .graph import PlumbingGraph, export_dot, graph_from_dict, validate
from .theorems import check_all, check_cmn, check_main_theorem

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2

SCHEMAS = """\
input files
  Graph JSON (vertex order fixes the intersection matrix order):
    {"vertices":[{"id":"E1","euler":-3},...],
     "edges":[["E1","E3"],...],
     "arrows":[{"vertex":"E5","multiplicity":1},...]}
  Branch JSON (branch indices are 0-based; omitted pairs share 1 point):
    {"branches":[{"m":4,"beta":[6,7],"factor":1}],
     "contacts":[{"i":0,"j":1,"shared_points":2}]}
  Every command taking FILE accepts either kind; branch files are resolved
  first. Use - for standard input.

output
  analyze --format json:
    {"decorations":[{"vertex":"E5","toward":"E3","value":13},...],
     "data":[{"id":"E5","N":26,"nu":11,"delta":2},...],
     "arrows":[{"vertex":"E5","N":1,"nu":1}],
     "lct":"5/12"}
  check:
    {"ok":true,"reports":[{"check":"main_theorem","I":["E4"],"d":13,
     "hypothesis":true,"holds":true,"witness":"E5",
     "lhs":"11/26","rhs":"79/182","slack":"..."},...]}
    "holds" is null when the hypothesis is not met.
  fuzz:
    {"config":{...},"failures":[{"check":...,"index":...,
     "instance":<branch JSON>,"report":{...}}],"instances_run":1000,
     "ok":true,"stats":{"applicable":{...},"sharp":{...}}}
  Rationals are always strings "p/q" (integers as "p").

exit codes
  0 success, 1 mathematical violation found, 2 input error
"""


class InputError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _decode(path: str):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_graph(path: str) -> PlumbingGraph:
    """Read a graph or branch file and return a validated graph."""
    data = _decode(path)
    try:
        if isinstance(data, dict) and "branches" in data:
            branches, contact = branches_from_dict(data)
            g = cluster_to_graph(build_cluster(branches, contact))
        else:
            g = graph_from_dict(data)
    except ResgraphError as exc:
        raise InputError(f"{path}: {type(exc).__name__}: {exc}") from exc
    report = validate(g)
    if not report.ok:
        detail = "; ".join(f"{rule}: {text}" for rule, text, _ in report.violations)
        raise InputError(f"{path}: invalid resolution graph: {detail}")
    return g


def _text_report(g: PlumbingGraph, d, nd) -> str:
    rows = [("vertex", "euler", "N", "nu", "delta", "nu/N", "decorations")]
    for v in g.vertices:
        decs = " ".join(f"{w}:{d.toward(v.id, w)}" for w in g.adjacency[v.id])
        rows.append(
            (
                v.id,
                str(v.euler),
                str(nd.N[v.id]),
                str(nd.nu[v.id]),
                str(g.valency(v.id)),
                format_rational(nd.ratio(v.id)),
                decs,
            )
        )
    widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]) - 1)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)) + "  " + r[-1] for r in rows]
    for k, a in enumerate(g.arrows):
        lines.append(f"arrow{k} at {a.vertex}: N={nd.arrow_N[k]} nu={nd.arrow_nu[k]}")
    lines.append(f"lct {format_rational(lct(nd))}")
    return "\n".join(line.rstrip() for line in lines)


def _dot(g: PlumbingGraph, plain: bool = False) -> str:
    if plain:
        return export_dot(g)
    d = edge_decorations(g, check=False)
    nd = numerical_data_linear(g)
    exceptional = {k: v for k, v in d.decorations.items() if isinstance(k[1], str)}
    return export_dot(
        g,
        exceptional,
        {v: (nd.N[v], nd.nu[v]) for v in g.ids},
        list(zip(nd.arrow_N, nd.arrow_nu)),
    )


def cmd_analyze(args, out: TextIO) -> int:
    g = load_graph(args.file)
    if args.format == "dot":
        out.write(_dot(g) + "\n")
        return EXIT_OK
    d = edge_decorations(g, check=False)
    axioms = check_axioms(d)
    nd = numerical_data_linear(g)
    if args.format == "json":
        out.write(_dumps(analysis_dict(d, nd)) + "\n")
    else:
        out.write(_text_report(g, d, nd) + "\n")
    if not axioms.ok:
        print(_dumps(axioms.to_dict()), file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_resolve(args, out: TextIO) -> int:
    data = _decode(args.file)
    try:
        branches, contact = branches_from_dict(data)
        g = cluster_to_graph(build_cluster(branches, contact))
    except ResgraphError as exc:
        raise InputError(f"{args.file}: {type(exc).__name__}: {exc}") from exc
    text = g.to_json() + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc.strerror}") from exc
    else:
        out.write(text)
    return EXIT_OK


def _parse_set(g: PlumbingGraph, raw: str) -> List[str]:
    ids = [x.strip() for x in raw.split(",") if x.strip()]
    if not 1 <= len(ids) <= 2:
        raise InputError("--set takes one or two vertex ids")
    for v in ids:
        if v not in g.index:
            raise InputError(f"--set: unknown vertex {v!r}")
    if len(ids) == 2 and not g.is_adjacent(*ids):
        raise InputError(f"--set: {ids[0]} and {ids[1]} are not adjacent")
    return ids


def cmd_check(args, out: TextIO) -> int:
    g = load_graph(args.file)
    d = edge_decorations(g, check=False)
    nd = numerical_data_linear(g)
    if args.d is not None and args.d < 2:
        raise InputError("--d must be at least 2")
    if args.all_d is not None and args.all_d < 2:
        raise InputError("--all-d must be at least 2")
    if args.set:
        sites = _parse_set(g, args.set)
        ds = [args.d] if args.d is not None else list(range(2, args.all_d + 1))
        reports = []
        for dd in ds:
            reports.append(check_main_theorem(d, nd, sites, dd))
            reports.append(check_cmn(d, nd, sites, dd))
        reports = [r for r in reports if r.failed] + [r for r in reports if not r.failed]
    elif args.d is not None:
        reports = [r for r in check_all(d, nd, args.d) if r.d in (None, args.d)]
    else:
        reports = check_all(d, nd, args.all_d)
    axioms = check_axioms(d)
    ok = axioms.ok and not any(r.failed for r in reports)
    payload = {"ok": ok, "reports": [r.to_dict() for r in reports]}
    if not axioms.ok:
        payload["axioms"] = axioms.to_dict()
    out.write(_dumps(payload) + "\n")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_fuzz(args, out: TextIO) -> int:
    cfg = FuzzConfig(
        seed=args.seed,
        count=args.count,
        max_branches=args.max_branches,
        max_g=args.max_g,
        max_exponent=args.max_exponent,
        max_factor=args.max_factor,
        dd_max=args.dd_max,
        include_corpus=args.include_corpus,
    )
    try:
        cfg.check()
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.jobs < 1:
        raise InputError("--jobs must be at least 1")
    outcome = run_fuzz(cfg, jobs=args.jobs)
    out.write(json.dumps(outcome.to_dict(cfg), sort_keys=True, separators=(",", ":")) + "\n")
    return EXIT_OK if outcome.ok else EXIT_VIOLATION


def cmd_export_dot(args, out: TextIO) -> int:
    g = load_graph(args.file)
    out.write(_dot(g, plain=args.plain) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resgraph",
        description="Exact invariants of embedded resolution graphs of plane curve germs.",
        epilog=SCHEMAS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text, func):
        p = sub.add_parser(name, help=help_text, description=help_text, epilog=SCHEMAS,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(func=func)
        return p

    p = add("analyze", "decorations, numerical data (N, nu), valencies and the lct", cmd_analyze)
    p.add_argument("file", metavar="FILE")
    p.add_argument("--format", choices=("json", "text", "dot"), default="json")

    p = add("resolve", "minimal embedded resolution graph of branch data", cmd_resolve)
    p.add_argument("file", metavar="FILE")
    p.add_argument("--out", metavar="PATH", help="write the graph JSON here instead of stdout")

    p = add("check", "run the inequality checks; exit 1 if any applicable conclusion fails", cmd_check)
    p.add_argument("file", metavar="FILE")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--d", type=int, metavar="D", help="a single value of d")
    group.add_argument("--all-d", type=int, metavar="MAX", help="every d in 2..MAX")
    p.add_argument("--set", metavar="ID[,ID]", help="restrict to the main theorem and the lct bound at I")

    defaults = FuzzConfig()
    p = add("fuzz", "check every invariant on seeded random branch data", cmd_fuzz)
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--count", type=int, default=defaults.count)
    p.add_argument("--max-branches", type=int, default=defaults.max_branches)
    p.add_argument("--max-g", type=int, default=defaults.max_g)
    p.add_argument("--max-exponent", type=int, default=defaults.max_exponent)
    p.add_argument("--max-factor", type=int, default=defaults.max_factor)
    p.add_argument("--dd-max", type=int, default=defaults.dd_max)
    p.add_argument("--include-corpus", action="store_true", help="prepend the fixed corpus")
    p.add_argument("--jobs", type=int, default=1, help="worker processes; output does not depend on it")

    p = add("export-dot", "Graphviz DOT with decorations and (N, nu) labels", cmd_export_dot)
    p.add_argument("file", metavar="FILE")
    p.add_argument("--plain", action="store_true", help="bare ids, no annotations")
    return parser


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    out = out if out is not None else sys.stdout
    try:
        return args.func(args, out)
    except (InputError, ParseError) as exc:
        print(f"resgraph: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResgraphError as exc:
        print(f"resgraph: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
