"""Command line front end: ``gfweno {solve,converge,perturb,list-cases,list-schemes}``."""

from __future__ import annotations

import argparse
import logging
import math
import sys
from collections.abc import Sequence

from gfweno.benchmark import (
    convergence_csv,
    convergence_study,
    perturbation_csv,
    perturbation_study,
    run_case,
    state_csv,
)
from gfweno.cases import CASES, Scheme, get_case, list_schemes
from gfweno.errors import GFWenoError, UsageError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3

logger = logging.getLogger("gfweno")


def _n_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers: {text!r}") from None
    if not values or any(v < 2 for v in values):
        raise argparse.ArgumentTypeError(f"mesh sizes must be integers >= 2: {text!r}")
    return values


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer: {text!r}") from None
    if value < 2:
        raise argparse.ArgumentTypeError(f"mesh size must be >= 2: {value}")
    return value


def _cfl(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"CFL number must lie in (0, 1): {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gfweno", description="Global-flux WENO schemes for 1D balance laws."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one case with one scheme")
    p.add_argument("--case", required=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--t-end", type=float)
    mode.add_argument("--steady", action="store_true")
    p.add_argument("--cfl", type=_cfl)
    p.add_argument("--out")

    p = sub.add_parser("converge", help="mesh convergence table")
    p.add_argument("--case", required=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--n-list", type=_n_list)
    p.add_argument("--cfl", type=_cfl)
    p.add_argument("--workers", type=int, default=1, help="parallel runs over the mesh ladder")
    p.add_argument("--out")

    p = sub.add_parser("perturb", help="evolve a perturbed stationary state")
    p.add_argument("--case", required=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--t-end", type=float)
    p.add_argument("--amplitude", type=float)
    p.add_argument("--no-reference", action="store_true", help="skip the fine-grid reference run")
    p.add_argument("--out")

    sub.add_parser("list-cases", help="print the case ids")
    sub.add_parser("list-schemes", help="print the scheme ids")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _overrides(args: argparse.Namespace) -> dict:
    return {} if getattr(args, "cfl", None) is None else {"cfl": args.cfl}


def _solve(args: argparse.Namespace) -> None:
    case = get_case(args.case)
    Scheme.parse(args.scheme)
    steady = True if args.steady else (False if args.t_end is not None else None)
    run = run_case(case.id, args.scheme, args.n, t_end=args.t_end, steady=steady, **_overrides(args))
    x = run.setup.grid.nodes()
    _emit(state_csv(x, run.state, run.setup.reference), args.out)
    msg = f"{case.id} {args.scheme} N={args.n}: t={run.result.t:.6g} steps={run.result.steps}"
    if run.errors is not None:
        msg += " L1=" + ",".join(f"{e:.6e}" for e in run.errors)
    if not run.result.converged:
        msg += " (steady tolerance not reached)"
    print(msg, file=sys.stderr)


def _converge(args: argparse.Namespace) -> None:
    get_case(args.case)
    Scheme.parse(args.scheme)
    table = convergence_study(
        args.case, args.scheme, args.n_list, workers=max(1, args.workers), **_overrides(args)
    )
    _emit(convergence_csv(table), args.out)
    for row in table.rows:
        order = "-" if math.isnan(row.orders[0]) else f"{row.orders[0]:.2f}"
        print(f"N={row.n:5d} L1={row.errors[0]:.4e} order={order}", file=sys.stderr)


def _perturb(args: argparse.Namespace) -> None:
    case = get_case(args.case)
    Scheme.parse(args.scheme)
    if case.perturbation is None:
        raise UsageError(f"case {case.id} has no perturbation")
    result = perturbation_study(
        case.id,
        args.scheme,
        args.n,
        t_end=args.t_end,
        amplitude=args.amplitude,
        reference=not args.no_reference,
    )
    _emit(perturbation_csv(result), args.out)
    msg = f"{case.id} {args.scheme}: max |dh| = {result.envelope():.4e}"
    if result.reference is not None:
        msg += f", reference {result.reference_envelope():.4e}"
    print(msg, file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    try:
        if args.command == "list-cases":
            for cid, case in CASES.items():
                print(f"{cid}\t{case.description}")
        elif args.command == "list-schemes":
            print("\n".join(list_schemes()))
        elif args.command == "solve":
            _solve(args)
        elif args.command == "converge":
            _converge(args)
        elif args.command == "perturb":
            _perturb(args)
    except UsageError as exc:
        print(f"gfweno: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GFWenoError as exc:
        print(f"gfweno: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
