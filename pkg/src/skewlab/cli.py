"""Command-line front end.

Exit codes: 0 success (everything held), 1 a violation or counterexample was
found, 2 usage or input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import search
from .errors import ConvergenceError, NumericalError, SkewlabError
from .inequalities import DEFAULT_TOL
from .io import csv_text, dumps, load_matrix, write_text
from .skew import Region, SkewParams, report
from .states import Observable, validate_density

log = logging.getLogger("skewlab")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

VERIFY_TRIALS = 10_000
HUNT_TRIALS = 100_000


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("dimensions must be positive integers")
    return values


def _float_list(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _target(text: str) -> str:
    try:
        return search.normalize_target(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="skewlab",
        description="Skew information quantities and numerical checks of their uncertainty relations.",
        epilog="exit codes: 0 all held, 1 violation found, 2 usage/input error, 3 numerical failure",
    )
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p, trials_default):
        p.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
        p.add_argument("--trials", type=int, default=trials_default, help=f"trial budget (default {trials_default})")
        p.add_argument("--floor", type=float, default=search.DEFAULT_FLOOR,
                       help=f"eigenvalue floor of sampled states (default {search.DEFAULT_FLOOR:g})")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help=f"relative tolerance (default {DEFAULT_TOL:g})")
        p.add_argument("--output", "-o", default=None, help="output file (default standard output)")

    p = sub.add_parser("compute", help="print the quantity report for a state and an observable")
    p.add_argument("--state", required=True, help="density matrix JSON file")
    p.add_argument("--obs", required=True, help="observable JSON file")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--floor", type=float, default=1e-8, help="invertibility floor (default 1e-8)")
    p.add_argument("--eig", choices=("lapack", "jacobi"), default="lapack", help="eigensolver (default lapack)")
    p.add_argument("--max-sweeps", type=int, default=100, help="Jacobi sweep cap (default 100)")
    p.add_argument("--output", "-o", default=None)

    targets = ", ".join(t.replace("_", "-") for t in search.TARGETS)
    p = sub.add_parser("verify", help="run random trials of one inequality")
    p.add_argument("--ineq", type=_target, required=True, help=f"one of: {targets}")
    p.add_argument("--dims", type=_int_list, default=[2, 3, 4], help="comma-separated dimensions (default 2,3,4)")
    p.add_argument("--region", choices=search.REGIONS, default="asserted",
                   help="exponent region for thm31 (default asserted)")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    common(p, VERIFY_TRIALS)

    p = sub.add_parser("hunt", help="search for a counterexample")
    p.add_argument("--target", type=_target, required=True, help=f"one of: {targets}")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--region", choices=search.REGIONS, default="asserted")
    p.add_argument("--no-refine", action="store_true", help="skip local refinement of witnesses")
    common(p, HUNT_TRIALS)

    p = sub.add_parser("sweep", help="write the (alpha, beta) slack table as CSV")
    p.add_argument("--alphas", type=_float_list, default=None, help="alpha grid (default: --grid points on [0, 2])")
    p.add_argument("--betas", type=_float_list, default=None, help="beta grid (default: same as alphas)")
    p.add_argument("--grid", type=int, default=9, help="points per axis when no grid is given (default 9)")
    p.add_argument("--dims", type=_int_list, default=[2, 3])
    p.add_argument("--include-fixture", action="store_true",
                   help="add the qubit state diag(3/4, 1/4) with sigma_x, sigma_y to every cell")
    p.add_argument("--workers", type=int, default=1)
    common(p, 100)

    p = sub.add_parser("scalar", help="grid checks of the scalar inequalities")
    p.add_argument("--points", type=int, default=200, help="t grid size (default 200)")
    p.add_argument("--samples", type=int, default=400, help="exponent pairs (default 400)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--output", "-o", default=None)
    return ap


def _compute(args) -> int:
    rho = validate_density(load_matrix(args.state), floor=args.floor, method=args.eig, max_sweeps=args.max_sweeps)
    h = Observable(load_matrix(args.obs))
    rep = report(rho, h, SkewParams(args.alpha, args.beta))
    write_text(dumps(rep.to_dict()) + "\n", args.output)
    return EXIT_OK


def _verify(args) -> int:
    log.info("verify %s dims=%s trials=%d seed=%d", args.ineq, args.dims, args.trials, args.seed)
    agg = search.run_trials(args.ineq, args.dims, args.trials, args.seed, args.region,
                            args.floor, args.tol, args.workers)
    write_text(dumps(agg.to_dict()) + "\n", args.output)
    return EXIT_VIOLATION if agg.violations else EXIT_OK


def _hunt(args) -> int:
    rec = search.hunt(args.target, args.dim, args.trials, args.seed, args.region,
                      args.floor, args.tol, refine=not args.no_refine)
    if rec is None:
        write_text("none\n", args.output)
        return EXIT_OK
    write_text(dumps(rec.to_dict()) + "\n", args.output)
    return EXIT_VIOLATION


def _sweep(args) -> int:
    alphas = args.alphas if args.alphas is not None else list(np.linspace(0.0, 2.0, args.grid))
    betas = args.betas if args.betas is not None else alphas
    rows = search.sweep(alphas, betas, args.dims, args.trials, args.seed, args.floor, args.tol,
                        args.include_fixture, args.workers)
    write_text(csv_text(search.SWEEP_HEADER, rows), args.output)
    # gap-region cells are exploratory
    bad = [r for r in rows if r["violations"] and r["region"] != Region.GAP.value]
    return EXIT_VIOLATION if bad else EXIT_OK


def _scalar(args) -> int:
    rows = search.scalar_suite(args.points, args.samples, args.seed, args.tol)
    write_text(dumps({"checks": rows}) + "\n", args.output)
    return EXIT_VIOLATION if any(r["violations"] for r in rows) else EXIT_OK


COMMANDS = {"compute": _compute, "verify": _verify, "hunt": _hunt, "sweep": _sweep, "scalar": _scalar}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConvergenceError, NumericalError) as exc:
        print(f"skewlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (SkewlabError, ValueError, OSError) as exc:
        print(f"skewlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())
