"""Command-line interface: ``relkmeans {cluster,check,spread}``.

Exit codes: 0 success, 1 ``check`` found a non-Euclidean matrix, 2 usage
error, 3 input or parse error, 4 solver error. Failures print one line
starting with ``error:`` to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from . import formats
from .errors import InputError, SolverError
from .matrix import from_points
from .solver import SolverConfig, solve
from .spectral import EIGEN_TOLERANCE, apply_beta_spread, beta_star, gower_center, min_restricted_eigenvalue

EXIT_USAGE, EXIT_INPUT, EXIT_SOLVER = 2, 3, 4

INIT_CHOICES = {"random": "random_partition", "plusplus": "plusplus"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_input(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", metavar="PATH", help="squared dissimilarity matrix (CSV/TSV)")
    src.add_argument("--points", metavar="PATH", help="point coordinates, one point per row")
    p.add_argument("--square-input", action="store_true",
                   help="matrix holds plain distances; square them on load")
    p.add_argument("--header", action="store_true", help="first row holds point names / column labels")
    p.add_argument("--row-names", action="store_true", help="first column holds point names")
    p.add_argument("--delimiter", help="field delimiter (default: tab for .tsv, comma otherwise)")
    p.add_argument("--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relkmeans", description="k-means clustering from a squared dissimilarity matrix")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("cluster", help="cluster the input")
    _add_input(c)
    c.add_argument("--clusters", type=int, required=True, metavar="N")
    c.add_argument("--init", choices=sorted(INIT_CHOICES), default="plusplus")
    c.add_argument("--beta-mode", choices=["off", "eager", "lazy"], default="eager")
    c.add_argument("--max-iter", type=int, default=300)
    c.add_argument("--tol", type=float, default=1e-8, help="relative objective stall tolerance")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--restarts", type=int, default=1)
    c.add_argument("--labels-out", metavar="PATH")
    c.add_argument("--report-out", metavar="PATH")

    k = sub.add_parser("check", help="test whether the matrix is Euclidean")
    _add_input(k)

    s = sub.add_parser("spread", help="apply the beta-spread correction and write the matrix")
    _add_input(s)
    s.add_argument("--beta", type=float, help="spread to apply (default: minimal sufficient)")
    s.add_argument("--out", required=True, metavar="PATH")
    return parser


def _load(args):
    """Return ``(matrix, names, provenance)`` for the selected input."""
    opts = dict(delimiter=args.delimiter, header=args.header, row_names=args.row_names)
    if args.matrix is not None:
        m, names = formats.read_matrix(args.matrix, square_input=args.square_input, **opts)
        prov = {"matrix": args.matrix, "square_input": args.square_input}
        return m, names, prov
    pts, names = formats.read_points(args.points, **opts)
    return from_points(pts), names, {"points": args.points}


def _g(x: float) -> str:
    return format(x, ".10g")


def cmd_cluster(args) -> int:
    if args.clusters < 1:
        raise UsageError("--clusters must be at least 1")
    try:
        config = SolverConfig(
            num_clusters=args.clusters,
            max_iterations=args.max_iter,
            objective_tolerance=args.tol,
            seed=args.seed,
            init_method=INIT_CHOICES[args.init],
            beta_mode=args.beta_mode,
            restarts=args.restarts,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    m, names, prov = _load(args)
    start = time.perf_counter()
    report = solve(m, config)
    elapsed = time.perf_counter() - start
    if args.labels_out:
        formats.write_labels(args.labels_out, report.labels, names)
    if args.report_out:
        formats.write_report(args.report_out, report, config, m.n, prov,
                             labels_file=args.labels_out, wall_time=elapsed)
    if not args.quiet:
        print(f"n={m.n} N={config.num_clusters} objective={report.final_objective:g} "
              f"beta={report.beta_final:g} iters={report.iterations} "
              f"converged={str(report.converged).lower()}")
    return 0


def cmd_check(args) -> int:
    m, _, _ = _load(args)
    lam = min_restricted_eigenvalue(gower_center(m.entries))
    euclidean = lam >= -EIGEN_TOLERANCE * m.scale
    bstar = beta_star(m)
    if not args.quiet:
        print(f"min_eigenvalue={_g(lam)}")
    print(f"euclidean={str(euclidean).lower()} beta_star={_g(bstar)}")
    return 0 if euclidean else 1


def cmd_spread(args) -> int:
    m, names, _ = _load(args)
    beta = beta_star(m) if args.beta is None else args.beta
    if beta < 0:
        raise UsageError("--beta must be nonnegative")
    formats.write_matrix(args.out, apply_beta_spread(m, beta).entries, names)
    if not args.quiet:
        print(f"beta={_g(beta)}")
    return 0


COMMANDS = {"cluster": cmd_cluster, "check": cmd_check, "spread": cmd_spread}


def _fail(code: int, message: str) -> int:
    print(f"error: {' '.join(str(message).split())}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, exc)
    except (InputError, OSError) as exc:
        return _fail(EXIT_INPUT, exc)
    except SolverError as exc:
        return _fail(EXIT_SOLVER, exc)


if __name__ == "__main__":
    sys.exit(main())
