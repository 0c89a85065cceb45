"""Command line front end.

    netdecomp generate random 100 300 42 > g.txt
    netdecomp decompose --gen random 256 1024 7 --out colors.txt
    netdecomp hitting-set --input inst.txt --coverage
    netdecomp spanner --gen tree 64 --k 3
    netdecomp oracle --input g.txt --sources 0,5,9 --k 2 --queries < pairs.txt

Reports go to stdout (or --report) as JSON.  The exit status is 1 when a
check fails and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import harness
from .delays import DEFAULT_CK, FAST_CK, DelayConstants
from .densify import DecompositionConfig
from .generators import GeneratorSpecError, generate
from .graph import CapExceededError, GraphFormatError, GraphValidationError, dump_graph, load_graph
from .hitting import InstanceError, parse_instance
from .spanner import DEFAULT_GAMMA


def _graph(args):
    if args.gen:
        return generate(args.gen)
    if args.input:
        return load_graph(Path(args.input).read_text())
    raise GeneratorSpecError("give --input FILE or --gen SPEC")


def _graph_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="edge-list file")
    src.add_argument("--gen", nargs="+", metavar="SPEC", help="generator spec, e.g. random 256 1024 7")
    p.add_argument("--report", help="write the JSON report here instead of stdout")


def _constants(args) -> DelayConstants:
    if args.ck is not None:
        return DelayConstants(args.ck)
    return DelayConstants(DEFAULT_CK if args.profile == "strict" else FAST_CK)


def _write(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="netdecomp", description="Deterministic network decomposition toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated graph")
    g.add_argument("spec", nargs="+")
    g.add_argument("--out")

    for name, hlp in [("cluster", "low-degree clustering"), ("isolate", "low-degree clustering then subsampling")]:
        p = sub.add_parser(name, help=hlp)
        _graph_args(p)
        p.add_argument("--s", type=int, default=2)
        p.add_argument("--profile", choices=["desk", "strict"], default="desk")
        p.add_argument("--ck", type=float, help="degree constant c in k = c log log n")
        if name == "cluster":
            p.add_argument("--trace", help="write the per-iteration potential trace here")

    d = sub.add_parser("decompose", help="full network decomposition")
    _graph_args(d)
    d.add_argument("--x", type=int)
    d.add_argument("--profile", choices=["desk", "strict"], default="desk")
    d.add_argument("--ck", type=float)
    d.add_argument("--out", help="write 'node color cluster center' lines here")

    h = sub.add_parser("hitting-set", help="solve a hitting-set instance file")
    h.add_argument("--input", required=True)
    h.add_argument("--ordered", action="store_true", help="instance lists ordered sets without weights")
    h.add_argument("--coverage", action="store_true", help="also force every large set to be hit")
    h.add_argument("--out", help="write the selected elements (1-based) here")
    h.add_argument("--report")

    s = sub.add_parser("spanner", help="(2k-1)-spanner")
    _graph_args(s)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--gamma", type=int, default=DEFAULT_GAMMA)
    s.add_argument("--c", type=float, default=8, help="size constant")
    s.add_argument("--out", help="write the spanner as an edge list here")

    o = sub.add_parser("oracle", help="source-restricted distance oracle")
    _graph_args(o)
    o.add_argument("--k", type=int, default=2)
    o.add_argument("--gamma", type=int, default=DEFAULT_GAMMA)
    grp = o.add_mutually_exclusive_group(required=True)
    grp.add_argument("--sources", help="comma-separated source ids")
    grp.add_argument("--num-sources", type=int, help="use ids 0, n/s, 2n/s, ...")
    o.add_argument("--out", help="write the oracle as JSON here")
    o.add_argument("--queries", action="store_true", help="answer 'u v' lines from stdin with 'u v q'")

    v = sub.add_parser("verify", help="check an existing artifact")
    _graph_args(v)
    art = v.add_mutually_exclusive_group(required=True)
    art.add_argument("--decomposition", help="file of 'node color cluster center' lines")
    art.add_argument("--spanner", help="spanner edge-list file")
    v.add_argument("--k", type=int, default=2, help="stretch parameter for --spanner")
    v.add_argument("--diameter-bound", type=float)
    return ap


def run(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cmd = args.command
    if cmd == "generate":
        _write(args.out, dump_graph(generate(args.spec)))
        return 0

    if cmd == "hitting-set":
        inst = parse_instance(Path(args.input).read_text(), ordered=args.ordered)
        report, H = harness.run_hitting(inst, args.coverage)
        if args.out:
            Path(args.out).write_text(" ".join(str(e + 1) for e in H) + "\n")
        _write(args.report, harness.dumps(report))
        return 0 if report["ok"] else 1

    g = _graph(args)
    if cmd == "cluster":
        report, res = harness.run_cluster(g, args.s, _constants(args))
        if args.trace:
            Path(args.trace).write_text("".join(line + "\n" for line in res.delays.trace_lines()))
    elif cmd == "isolate":
        report, _ = harness.run_isolate(g, args.s, _constants(args))
    elif cmd == "decompose":
        cfg = DecompositionConfig(x=args.x, profile=args.profile, constants=_constants(args))
        report, d = harness.run_decompose(g, cfg)
        if args.out:
            Path(args.out).write_text("".join(line + "\n" for line in d.lines()))
    elif cmd == "spanner":
        report, r = harness.run_spanner(g, args.k, args.gamma, args.c)
        if args.out:
            Path(args.out).write_text(dump_graph(r.graph()))
    elif cmd == "oracle":
        if args.sources:
            sources = [int(x) for x in args.sources.split(",") if x.strip()]
        else:
            count = max(1, min(args.num_sources, g.node_count))
            sources = sorted({i * g.node_count // count for i in range(count)})
        report, o = harness.run_oracle(g, sources, args.k, args.gamma)
        if args.out:
            Path(args.out).write_text(o.to_json() + "\n")
        if args.queries:
            from .oracle import query
            for line in sys.stdin:
                if line.strip():
                    u, v = map(int, line.split())
                    q = query(o, u, v).estimate
                    sys.stdout.write(f"{u} {v} {q}\n")
            if not args.report:
                return 0 if report["ok"] else 1
    else:
        if args.decomposition:
            report = harness.verify_decomposition_lines(g, Path(args.decomposition).read_text().splitlines(),
                                                        args.diameter_bound)
        else:
            report = harness.verify_spanner_file(g, load_graph(Path(args.spanner).read_text()), args.k)
    _write(args.report, harness.dumps(report))
    return 0 if report["ok"] else 1


def main(argv: Optional[List[str]] = None) -> int:
    try:
        return run(argv)
    except (GraphFormatError, GraphValidationError, GeneratorSpecError, InstanceError,
            CapExceededError, OSError, ValueError) as exc:
        print(f"netdecomp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
