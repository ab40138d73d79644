"""Command-line entry point.

Exit codes: 0 success, 1 precondition error, 2 parse error (including a
missing input file), 3 internal assertion failure or failed verification,
64 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__, kernels
from .errors import GraphParseError, K4bbError, PreconditionError
from .graph import Bipartition, ColoredGraph, Graph, TriPartition, degree_coloring, parse_graph_text, write_graph

EXIT_OK, EXIT_PRECONDITION, EXIT_PARSE, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2, 3, 64

DENSITY_CONVENTION = (
    "ordered independent picks by vertex weight; two picks of one base vertex are "
    "non-adjacent copies of the same colour; [[f]] sums over ordered root tuples"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def rational(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator, "decimal": f"{float(x):.12g}"}


def jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (str, float)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return rational(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, Bipartition):
        return {"side_a": list(x.side_a), "side_b": list(x.side_b)}
    if isinstance(x, Graph):
        return {"n": x.n, "edges": [list(e) for e in x.edges()]}
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {f.name: jsonable(getattr(x, f.name)) for f in dataclasses.fields(x)}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    return str(x)


def show(x) -> str:
    if isinstance(x, Fraction):
        return f"{x} ({float(x):.6g})"
    return str(x)


@dataclasses.dataclass
class RunReport:
    command: list[str]
    input_digest: str | None = None
    results: dict = dataclasses.field(default_factory=dict)
    timing: dict = dataclasses.field(default_factory=dict)
    version: str = __version__
    lines: list[str] = dataclasses.field(default_factory=list)
    args: Any = dataclasses.field(default=None, repr=False)

    def to_json(self) -> str:
        body = {
            "command": self.command,
            "input_digest": self.input_digest,
            "results": jsonable(self.results),
            "timing": self.timing,
            "version": self.version,
            "backend": kernels.USE_NUMBA and "numba" or "numpy",
        }
        return json.dumps(body, sort_keys=True, indent=2) + "\n"

    def text(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")

    def say(self, *parts) -> None:
        self.lines.append(" ".join(str(p) for p in parts))


# --------------------------------------------------------------------------
# helpers


def load(path: str, report: RunReport) -> Graph | ColoredGraph:
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise GraphParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    report.input_digest = "sha256:" + hashlib.sha256(data).hexdigest()
    return parse_graph_text(data.decode())


def plain(g) -> Graph:
    return g.graph if isinstance(g, ColoredGraph) else g


def colored(g) -> ColoredGraph:
    return g if isinstance(g, ColoredGraph) else degree_coloring(g)


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def parse_eps(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--eps expects a rational like 1/10000 or 1e-4, got {text!r}") from exc
    if value <= 0:
        raise UsageError("--eps must be positive")
    return value


def cert_result(cert) -> dict:
    return {
        "method": cert.method,
        "achieved": cert.achieved,
        "claimed_bound": cert.claimed_bound,
        "partition": cert.partition,
        "details": cert.details,
    }


def say_cert(report: RunReport, cert) -> None:
    report.say(f"method: {cert.method}")
    report.say(f"achieved: {cert.achieved}")
    report.say(f"bound: {show(cert.claimed_bound)}")
    report.say(f"side A: {' '.join(map(str, cert.partition.side_a))}")
    report.say(f"side B: {' '.join(map(str, cert.partition.side_b))}")


# --------------------------------------------------------------------------
# commands


def cmd_oracle(args, report: RunReport) -> int:
    from . import oracle

    cap = args.cap
    if args.what == "sweep":
        n = int(args.target)
        res = oracle.check_bb_bound(n)
        report.results = res
        report.say(f"n={n}: {res['graphs']} K4-free graphs, max bb {res['max_bb']}, "
                   f"bound {res['bound']}, violations {res['violations']}")
        return EXIT_OK if res["violations"] == 0 else EXIT_INTERNAL
    g = plain(load(args.target, report))
    if args.what == "bb":
        res = oracle.bb_exact(g, cap or oracle.BB_CAP)
        report.results = {"optimum": res.optimum, "witness": res.witness, "bound": Fraction(g.n * g.n, 9)}
        report.say(f"optimum: {res.optimum}")
        report.say(f"witness A: {' '.join(map(str, res.witness.side_a))}")
        report.say(f"n^2/9: {show(Fraction(g.n * g.n, 9))}")
    else:
        mis = oracle.max_independent_set(g, cap or oracle.MIS_CAP)
        report.results = {"size": len(mis), "set": mis}
        report.say(f"independence number: {len(mis)}")
        report.say(f"set: {' '.join(map(str, mis))}")
    return EXIT_OK


def cmd_partition(args, report: RunReport) -> int:
    from . import partition as pt

    g = plain(load(args.file, report))
    if args.method == "auto":
        cert, tried = pt.partition_auto(g, args.eps)
        report.results = {"certificate": cert_result(cert), "tried": tried}
        say_cert(report, cert)
        for t in tried:
            report.say("tried:", t)
        return EXIT_OK
    if args.method == "tripartite":
        if args.parts:
            tp = TriPartition.of(*[int_list(p) for p in args.parts.split("|")])
        else:
            tp = pt.three_coloring(g)
            if tp is None:
                raise PreconditionError("no proper 3-colouring found; pass --parts")
        cert = pt.tripartite_partition(g, tp)
    elif args.method == "two-ind":
        if args.i1 is not None and args.i2 is not None:
            i1, i2 = int_list(args.i1), int_list(args.i2)
        else:
            i1, i2 = pt.independent_pair(g, args.cap or 30)
        cert = pt.two_ind_partition(g, i1, i2)
    elif args.method == "nice":
        from .nice import nice_partition

        cert = nice_partition(g, args.eps)
    else:
        start = Bipartition.of(range(g.n // 2), range(g.n // 2, g.n))
        q = pt.local_search_improve(g, start)
        cert = pt.PartitionCertificate.make(g, q, pt.class_edges(g, start), "local-search")
    report.results = {"certificate": cert_result(cert)}
    say_cert(report, cert)
    return EXIT_OK


def cmd_nice(args, report: RunReport) -> int:
    from . import nice

    g = plain(load(args.file, report))
    eps = args.eps
    if args.action == "check":
        r = nice.niceness_report(g, eps)
        report.results = {"report": r, "holds": list(r.holds), "verdict": r.verdict}
        for name in ("lhs1", "lhs2", "lhs3"):
            report.say(f"{name}: {show(getattr(r, name))}")
        report.say(f"min degree: {r.min_degree} (need 9*delta >= 4n-1: {r.min_degree_ok})")
        report.say(f"{eps}-nice: {r.verdict}")
    elif args.action == "partition":
        cert = nice.nice_partition(g, eps)
        report.results = {"certificate": cert_result(cert)}
        say_cert(report, cert)
    else:
        sp = nice.spotty_from_witness(g, eps)
        audit = nice.lemma_audit(g, eps, sp, seed=args.seed)
        report.results = {"spotty": sp, "audit": audit, "passed": audit.passed}
        report.say(f"spotty classes: {[len(p) for p in sp.parts]}, unmet size hypotheses: {list(sp.failed_hypotheses)}")
        report.say(f"missing-edges: {audit.missing_edges_checked} edges, {len(audit.missing_edges_violations)} violations")
        report.say(f"dense-pairs: threshold {audit.dense_pairs_threshold}, {audit.dense_pairs_checked} probes "
                   f"({'exhaustive' if audit.dense_pairs_exhaustive else 'sampled'}), "
                   f"{len(audit.dense_pairs_violations)} violations")
        report.say(f"audit passed: {audit.passed}")
    return EXIT_OK


def cmd_flags(args, report: RunReport) -> int:
    from . import flags

    if args.action == "manifest":
        text = flags.format_manifest()
        report.results = {"manifest": text}
        report.lines.extend(text.rstrip("\n").splitlines())
        return EXIT_OK
    if args.file is None:
        raise UsageError(f"flags {args.action} needs a graph file")
    g = load(args.file, report)
    cg = colored(g)
    if args.action == "eval":
        val = flags.eval_cut_expression(flags.step_graphon(cg), args.expr)
        report.results = {"expression": val.id, "value": val.value, "parts": dict(val.parts),
                          "colors": cg.colors, "convention": DENSITY_CONVENTION}
        for label, v in val.parts:
            report.say(f"{label}: {show(v)}")
        report.say(f"{val.id}: {show(val.value)}")
        return EXIT_OK
    base = cg.graph
    if args.root_vertex is not None:
        jobs = [("vertex", (args.root_vertex,))]
    elif args.root_edge is not None:
        rt = tuple(int_list(args.root_edge))
        jobs = [("edge1", rt), ("edge2", rt)]
    elif args.root_cherry is not None:
        jobs = [("cherry", tuple(int_list(args.root_cherry)))]
    else:
        raise UsageError("flags cut needs --root-vertex, --root-edge or --root-cherry")
    out = []
    bb = None
    from .oracle import BB_CAP, bb_exact

    if base.n <= (args.cap or BB_CAP):
        bb = bb_exact(base, args.cap or BB_CAP).optimum
    for kind, rt in jobs:
        left, right = flags.cut_sets(base, kind, rt)
        limit, exact = flags.finite_cut_expectation(base, left, right)
        root_colors = "".join(cg.colors[x] for x in rt)
        item = {"kind": kind, "roots": list(rt), "root_colors": root_colors, "L": list(left), "R": list(right),
                "limit_form": limit, "hypergeometric_form": exact}
        if bb is not None:
            item["bb_exact"] = bb
            item["dominated"] = bb <= exact
        out.append(item)
        report.say(f"{kind} at {rt} (colours {root_colors}): |L|={len(left)} |R|={len(right)}")
        report.say(f"  limit form: {show(limit)}")
        report.say(f"  hypergeometric form: {show(exact)}")
        if bb is not None:
            report.say(f"  bb_exact: {bb} <= hypergeometric: {bb <= exact}")
    report.results = {"cuts": out}
    return EXIT_OK


def cmd_gen(args, report: RunReport) -> int:
    from .generators import GeneratorSpec, generate

    base = None
    sizes = args.params
    if args.family == "blowup-of":
        if args.base is None:
            raise UsageError("blowup-of needs --base <graph file>")
        base = plain(load(args.base, report))
    try:
        sizes = tuple(int(s) for s in sizes)
    except ValueError as exc:
        raise UsageError(f"size parameters must be integers, got {args.params}") from exc
    spec = GeneratorSpec(args.family, sizes, p=Fraction(args.p), seed=args.seed, base=base)
    g = generate(spec)
    report.results = {"family": spec.family, "sizes": list(spec.sizes), "p": spec.p, "seed": spec.seed,
                      "n": g.n, "edges": g.edge_count}
    if args.output:
        write_graph(args.output, g)
        report.say(f"wrote {args.output}: n={g.n} m={g.edge_count}")
        args.output = None  # the graph file is the output
    else:
        from .graph import format_graph

        report.lines.extend(format_graph(g).rstrip("\n").splitlines())
    return EXIT_OK


def cmd_verify(args, report: RunReport) -> int:
    from .verify import SUITES, verify

    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; known: {', '.join(SUITES)}")
    results = verify(args.suite)
    report.results = {"criteria": [dataclasses.asdict(r) for r in results],
                      "passed": all(r.passed for r in results)}
    for r in results:
        report.say(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_INTERNAL


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--eps", type=parse_eps, default=Fraction(1, 10000))
    common.add_argument("--json", action="store_true", help="emit the JSON run report")
    common.add_argument("--cap", type=int, default=None, help="oracle size cap")
    common.add_argument("-o", "--output", default=None)

    p = _Parser(prog="k4bb", description="Balanced bipartitions of K4-free graphs.")
    p.add_argument("--version", action="version", version=f"k4bb {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    o = sub.add_parser("oracle", parents=[common], help="brute-force ground truth")
    o.add_argument("what", choices=("bb", "mis", "sweep"))
    o.add_argument("target", help="graph file, or n for sweep")
    o.set_defaults(func=cmd_oracle)

    q = sub.add_parser("partition", parents=[common], help="constructive balanced partitions")
    q.add_argument("method", choices=("auto", "tripartite", "two-ind", "nice", "local"))
    q.add_argument("file")
    q.add_argument("--parts", help="three classes for tripartite, e.g. 0,1|2,3|4,5")
    q.add_argument("--i1")
    q.add_argument("--i2")
    q.set_defaults(func=cmd_partition)

    nc = sub.add_parser("nice", parents=[common], help="niceness diagnostics")
    nc.add_argument("action", choices=("check", "partition", "audit"))
    nc.add_argument("file")
    nc.set_defaults(func=cmd_nice)

    f = sub.add_parser("flags", parents=[common], help="flag expressions and finite cuts")
    f.add_argument("action", choices=("eval", "cut", "manifest"))
    f.add_argument("file", nargs="?")
    f.add_argument("--expr", default="must-be-nice")
    f.add_argument("--root-vertex", type=int)
    f.add_argument("--root-edge")
    f.add_argument("--root-cherry")
    f.set_defaults(func=cmd_flags)

    from .generators import FAMILIES

    gsub = sub.add_parser("gen", parents=[common], help="generate a graph")
    gsub.add_argument("family", choices=FAMILIES)
    gsub.add_argument("params", nargs="*", help="size parameters")
    gsub.add_argument("--p", default="1/2", help="edge probability as a rational")
    gsub.add_argument("--base", help="base graph file for blowup-of")
    gsub.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", parents=[common], help="run acceptance suites")
    v.add_argument("suite", nargs="?", default="all")
    v.set_defaults(func=cmd_verify)
    return p


def run(argv: list[str]) -> tuple[int, RunReport]:
    report = RunReport(command=list(argv))
    start = time.perf_counter()
    try:
        args = report.args = build_parser().parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError(build_parser().format_usage() + "k4bb: error: a command is required")
        code = args.func(args, report)
    except UsageError as exc:
        report.results = {"error": str(exc), "kind": "usage"}
        report.lines = [str(exc)]
        return EXIT_USAGE, report
    except GraphParseError as exc:
        code = EXIT_PARSE
        report.results = {"error": str(exc), "kind": "parse"}
        report.lines = [f"parse error: {exc}"]
    except (PreconditionError, ValueError) as exc:
        code = EXIT_PRECONDITION
        report.results = {"error": str(exc), "kind": "precondition"}
        report.lines = [f"precondition error: {exc}"]
    except AssertionError as exc:
        code = EXIT_INTERNAL
        report.results = {"error": str(exc), "kind": "internal"}
        report.lines = [f"internal error: {exc}"]
    except K4bbError as exc:
        code = EXIT_PRECONDITION
        report.results = {"error": str(exc), "kind": type(exc).__name__}
        report.lines = [f"error: {exc}"]
    report.timing = {"seconds": round(time.perf_counter() - start, 6)}
    return code, report


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, report = run(argv)
    if code == EXIT_USAGE:
        sys.stderr.write(report.text())
        return code
    args = report.args
    text = report.to_json() if getattr(args, "json", False) else report.text()
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text)
    else:
        stream = sys.stdout if code == EXIT_OK or code == EXIT_INTERNAL else sys.stderr
        stream.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
