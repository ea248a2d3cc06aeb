"""Command-line interface.

Exit codes: 0 success, 1 input or usage error, 2 unbounded LP, 3 internal
error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from . import datasets
from .evaluation import (EvaluationError, bench, evaluate_table, label_pair, read_strengths,
                         render_timings, write_strengths)
from .graph import (EdgeListError, StructureError, analyze, contract, load_edge_list,
                    read_edge_list, strip_clique_components)
from .inference import (METHODS, SOLVERS, IncompatibleSolver, UnboundedProblem, build_model, infer,
                        resolve_solver)
from .lp import FormulationError, Params, write_lp, write_lp_sidecar
from .simplex import Status, edge_strength_range, optimal_face, solve
from .twovar import lp1_network, lp2sym_network, write_dimacs

log = logging.getLogger("tiestrength")

EXIT_OK, EXIT_INPUT, EXIT_UNBOUNDED, EXIT_INTERNAL = 0, 1, 2, 3
FORMULATIONS = ("lp1", "lp2", "lp2sym", "lp3", "lp4")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _load(path: str, weighted: bool = False):
    if path.startswith(datasets.PREFIX):
        try:
            el = datasets.load(path[len(datasets.PREFIX):], weighted)
        except KeyError as e:
            raise UsageError(e.args[0]) from None
    elif path == "-":
        el = load_edge_list(sys.stdin, weighted)
    else:
        el = read_edge_list(path, weighted)
    return el


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            yield f


def _params(args) -> Params:
    return Params(args.d, args.C)


def cmd_analyze(args) -> int:
    g = _load(args.input).graph
    with _output(args.output) as out:
        json.dump(analyze(g), out, indent=1)
        out.write("\n")
    return EXIT_OK


def cmd_infer(args) -> int:
    solver = resolve_solver(args.method, args.solver)
    if args.dump_cut_graph and solver != "hn":
        raise UsageError("--dump-cut-graph needs the hn solver")
    g = _load(args.input).graph
    p = _params(args)
    if args.dump_cut_graph:
        core, _ = strip_clique_components(g)
        net = lp1_network(core) if args.method == "lp1" else lp2sym_network(contract(core), p)
        with open(args.dump_cut_graph, "w", encoding="utf-8", newline="\n") as f:
            write_dimacs(net, f)
    a = infer(g, args.method, solver=solver or "auto", p=p, greedy_rule=args.greedy_rule)
    with _output(args.output) as out:
        write_strengths(a, out, header=not args.no_header)
    return EXIT_OK


def cmd_export_lp(args) -> int:
    g = _load(args.input).graph
    core, comps = strip_clique_components(g)
    if comps:
        log.warning("%d clique component(s) left out of the model", len(comps))
    lp = build_model(core, args.formulation, _params(args))
    with _output(args.output) as out:
        write_lp(lp, out)
    sidecar = args.sidecar
    if sidecar is None and args.output not in (None, "-"):
        sidecar = args.output + ".json"
    if sidecar:
        with open(sidecar, "w", encoding="utf-8", newline="\n") as f:
            write_lp_sidecar(lp, f, core)
    return EXIT_OK


def cmd_range(args) -> int:
    g = _load(args.input).graph
    core, _ = strip_clique_components(g)
    p = _params(args)
    lp = build_model(core, args.formulation, p)
    res = solve(lp)
    if res.status is Status.UNBOUNDED:
        raise UnboundedProblem(args.formulation, lp.params, res.ray_origin, lp.advisories)
    face = optimal_face(lp, res)
    rows = []
    if args.formulation == "lp2sym":
        cg = contract(core)
        for i, j in core.edges:
            a, b = cg.back_map[i], cg.back_map[j]
            tag = ("clique", a) if a == b else ("superedge",) + (min(a, b), max(a, b))
            rows.append(((i, j), lp.index(tag), ""))
    else:
        for k, var in enumerate(lp.variables):
            rows.append(((var.tag[1], var.tag[2]), k, "~" if var.tag[0] == "absent" else ""))
    cache = {}
    with _output(args.output) as out:
        out.write("u\tv\tmin\tmax\n")
        for (i, j), k, prefix in rows:
            if k not in cache:
                cache[k] = edge_strength_range(face, k)
            lo, hi = cache[k]
            out.write(f"{prefix}{g.label(i)}\t{g.label(j)}\t{lo.numerator}/{lo.denominator}\t"
                      f"{hi.numerator}/{hi.denominator}\n")
    return EXIT_OK


def cmd_eval(args) -> int:
    with open(args.strengths, encoding="utf-8") as f:
        table = read_strengths(f)
    el = _load(args.ground_truth, weighted=True)
    g, gt = el.graph, el.ground_truth
    weights = {label_pair(g.label(i), g.label(j)): w for (i, j), w in gt.weights.items()}
    report = evaluate_table(table, weights)
    with _output(args.output) as out:
        out.write(report.render(args.format))
    return EXIT_OK


BENCH_METHODS = ("greedy", "lp1-hn", "lp2sym-hn", "lp1-simplex", "lp2-simplex", "lp2sym-simplex")


def _bench_method(name: str, p: Params):
    from .binary import build_wedge_graph, greedy_binary
    from .twovar import solve_lp1_hn, solve_lp2sym_hn
    if name == "greedy":
        return (lambda g: (g, build_wedge_graph(g)), lambda m: greedy_binary(m[0], m[1]))
    if name == "lp1-hn":
        return (lambda g: strip_clique_components(g)[0], solve_lp1_hn)
    if name == "lp2sym-hn":
        return (lambda g: contract(strip_clique_components(g)[0]), lambda cg: solve_lp2sym_hn(cg, p))
    method = name.split("-")[0]
    return (lambda g: build_model(strip_clique_components(g)[0], method, p), solve)


def cmd_bench(args) -> int:
    names = [m for m in args.methods.split(",") if m]
    for m in names:
        if m not in BENCH_METHODS:
            raise UsageError(f"unknown bench method {m!r}; choose from {', '.join(BENCH_METHODS)}")
    p = _params(args)
    graphs = {Path(path).name if not path.startswith(datasets.PREFIX) else path[len(datasets.PREFIX):]:
              _load(path).graph for path in args.inputs}
    rows = bench(graphs, {m: _bench_method(m, p) for m in names}, args.repetitions)
    with _output(args.output) as out:
        out.write(render_timings(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tiestrength", description="Infer tie strengths from graph structure.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formulation=False):
        sp.add_argument("--d", type=_rational, default=Fraction(1), help="triangle slope (default 1)")
        sp.add_argument("--C", type=_rational, default=Fraction(1), help="wedge penalty (default 1)")
        sp.add_argument("-o", "--output", help="output file (default stdout)")
        if formulation:
            sp.add_argument("--formulation", choices=FORMULATIONS, default="lp1")

    sp = sub.add_parser("analyze", help="structural summary as JSON")
    sp.add_argument("input", help="edge list path, '-' for stdin, or builtin:toy / builtin:lesmis")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("infer", help="edge strengths as TSV")
    sp.add_argument("input")
    sp.add_argument("--method", choices=METHODS, default="lp2sym")
    sp.add_argument("--solver", choices=SOLVERS, default="auto")
    sp.add_argument("--greedy-rule", choices=("best", "degree", "matching"), default="best")
    sp.add_argument("--dump-cut-graph", metavar="PATH", help="write the flow network (DIMACS)")
    sp.add_argument("--no-header", action="store_true", help="omit the leading comment line")
    common(sp)
    sp.set_defaults(func=cmd_infer)

    sp = sub.add_parser("export-lp", help="write the LP model in text LP format")
    sp.add_argument("input")
    sp.add_argument("--sidecar", help="exact JSON companion (default OUTPUT.json)")
    common(sp, formulation=True)
    sp.set_defaults(func=cmd_export_lp)

    sp = sub.add_parser("range", help="per-edge strength range over the optimal face")
    sp.add_argument("input")
    common(sp, formulation=True)
    sp.set_defaults(func=cmd_range)

    sp = sub.add_parser("eval", help="level counts and mean ground-truth weights")
    sp.add_argument("--strengths", required=True)
    sp.add_argument("--ground-truth", required=True, help="weighted edge list")
    sp.add_argument("--format", choices=("table", "json", "csv"), default="table")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("bench", help="median running times")
    sp.add_argument("inputs", nargs="+")
    sp.add_argument("--methods", default="greedy,lp1-hn,lp2sym-hn")
    sp.add_argument("--repetitions", type=int, default=3)
    common(sp)
    sp.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UnboundedProblem as e:
        print(f"unbounded: {e}", file=sys.stderr)
        for msg in e.advisories:
            print(f"advisory: {msg}", file=sys.stderr)
        if e.params is not None and e.formulation in ("lp3", "lp4"):
            print(f"advisory: increase C (now {e.params.C}); small penalties let strengths grow "
                  "without limit", file=sys.stderr)
        return EXIT_UNBOUNDED
    except (UsageError, IncompatibleSolver, FormulationError, EdgeListError, EvaluationError,
            OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (RuntimeError, StructureError, AssertionError) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
