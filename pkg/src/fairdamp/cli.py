"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 parse/format or I/O error,
4 convergence failure, 5 degenerate structure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import export
from .damping import reports_from_scalars, solve_all
from .errors import ConvergenceError, DegenerateStructureError, GraphFormatError
from .graph import TransitionOperator, load_graph
from .pagerank import DEFAULT_TERMS, DEFAULT_TOL, escc_mass_curve, pagerank
from .perturbation import class_stationary, limit_pagerank
from .spectral import lambda_sequence
from .structure import census, decompose

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CONVERGENCE = 4
EXIT_DEGENERATE = 5


class UsageError(Exception):
    pass


def parse_grid(spec):
    """``lo:hi:step`` -> inclusive grid of damping factors in [0, 1]."""
    try:
        lo, hi, step = (float(p) for p in spec.split(":"))
    except ValueError:
        raise UsageError(f"grid must be lo:hi:step, got {spec!r}") from None
    if not (0.0 <= lo <= hi <= 1.0) or step <= 0.0:
        raise UsageError(f"grid endpoints must satisfy 0 <= lo <= hi <= 1 and step > 0: {spec!r}")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 12) for k in range(count)]


def parse_scalars(spec):
    try:
        alpha, p1, lambda1 = (float(p) for p in spec.split(","))
    except ValueError:
        raise UsageError(f"--from-scalars expects alpha,p1,lambda1, got {spec!r}") from None
    if not (0.0 < alpha <= 1.0 and 0.0 < p1 <= 1.0 and 0.0 < lambda1 <= 1.0):
        raise UsageError("alpha, p1 and lambda1 must lie in (0, 1]")
    return alpha, p1, lambda1


def _emit(text, out):
    if out:
        export.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _check_c(c):
    if not 0.0 <= c < 1.0:
        raise UsageError(f"--c must lie in [0, 1), got {c}")


def _check_tol(args):
    if args.tol <= 0.0:
        raise UsageError("--tol must be positive")
    if args.max_iter is not None and args.max_iter <= 0:
        raise UsageError("--max-iter must be positive")


def cmd_census(args):
    graph = load_graph(args.input)
    cen = census(graph)
    if args.histogram:
        export.write_atomic(args.histogram, export.histogram_csv(cen.pure_out_histogram))
    if args.decomposition:
        export.write_atomic(args.decomposition, export.decomposition_csv(cen.decomposition))
    _emit(export.census_csv(cen), args.out)
    return EXIT_OK


def cmd_pagerank(args):
    _check_c(args.c)
    _check_tol(args)
    graph = load_graph(args.input)
    pr = pagerank(TransitionOperator(graph, args.c), args.tol, args.max_iter)
    print(f"# c={args.c} iterations={pr.iterations} residual={pr.residual:.3e}", file=sys.stderr)
    _emit(export.pagerank_csv(pr), args.out)
    return EXIT_OK


def _curve_and_summary(graph, args):
    dec = decompose(graph)
    if dec.pure_out.size == 0 or not dec.leaky:
        raise DegenerateStructureError("ESCC mass is identically alpha; c* is undefined")
    curve = escc_mass_curve(graph, dec, K=args.K)
    return dec, curve, lambda_sequence(curve)


def cmd_masscurve(args):
    grid = parse_grid(args.grid)
    if args.K <= 0:
        raise UsageError("--K must be positive")
    graph = load_graph(args.input)
    _, curve, summary = _curve_and_summary(graph, args)
    if args.coefficients:
        export.write_atomic(args.coefficients, export.coefficients_csv(curve, summary))
    _emit(export.mass_curve_csv(curve, summary, grid), args.out)
    return EXIT_OK


def cmd_limit(args):
    graph = load_graph(args.input)
    dec = decompose(graph)
    lim = limit_pagerank(graph, dec)
    mus = [class_stationary(graph, dec, i) for i in range(dec.m)]
    if args.vector:
        export.write_atomic(args.vector, export.to_csv(
            ["node_id", "limit"], enumerate(lim.values.tolist())))
    _emit(export.class_csv(graph, dec, lim, mus), args.out)
    return EXIT_OK


def cmd_cstar(args):
    if args.from_scalars:
        alpha, p1, lambda1 = parse_scalars(args.from_scalars)
        reports = reports_from_scalars(alpha, p1, lambda1)
    else:
        if not args.input:
            raise UsageError("cstar needs an input graph or --from-scalars")
        if args.K <= 0:
            raise UsageError("--K must be positive")
        graph = load_graph(args.input)
        _, curve, summary = _curve_and_summary(graph, args)
        alpha, p1, lambda1 = curve.alpha, summary.p1, summary.lambda1
        reports = solve_all(summary, curve)
    sys.stdout.write(export.damping_table(reports, alpha, p1, lambda1))
    if args.out:
        export.write_atomic(args.out, export.damping_csv(reports))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fairdamp",
        description="Ergodic structure, ESCC PageRank mass and fair damping factors of web graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph_required=True):
        if graph_required:
            p.add_argument("input", help="edge-list file")
        p.add_argument("--out", help="write the main CSV here instead of stdout")

    p = sub.add_parser("census", help="component sizes of the bow-tie and ESCC/Pure OUT")
    common(p)
    p.add_argument("--histogram", help="CSV of SCC sizes inside Pure OUT")
    p.add_argument("--decomposition", help="CSV of node_id,block_label")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("pagerank", help="PageRank vector by power iteration")
    common(p)
    p.add_argument("--c", type=float, default=0.85)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=None)
    p.set_defaults(func=cmd_pagerank)

    p = sub.add_parser("masscurve", help="ESCC PageRank mass and its bounds over a grid of c")
    common(p)
    p.add_argument("--grid", default="0:1:0.01", help="lo:hi:step (inclusive)")
    p.add_argument("--K", type=int, default=DEFAULT_TERMS, help="maximum series terms")
    p.add_argument("--coefficients", help="CSV of k,a_k,lambda1_k")
    p.set_defaults(func=cmd_masscurve)

    p = sub.add_parser("limit", help="PageRank limit as c -> 1, per ergodic class")
    common(p)
    p.add_argument("--vector", help="CSV of the full limit vector")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("cstar", help="fair damping factors and their bounds")
    p.add_argument("input", nargs="?", help="edge-list file")
    p.add_argument("--out", help="CSV of v,bound,value")
    p.add_argument("--K", type=int, default=DEFAULT_TERMS)
    p.add_argument("--from-scalars", metavar="ALPHA,P1,LAMBDA1",
                   help="skip the graph and evaluate the bound formulas only")
    p.set_defaults(func=cmd_cstar)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"fairdamp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, OSError, UnicodeDecodeError) as exc:
        print(f"fairdamp: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConvergenceError as exc:
        print(f"fairdamp: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except DegenerateStructureError as exc:
        print(f"fairdamp: degenerate structure: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
