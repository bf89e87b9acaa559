"""Command-line interface.

Exit codes: 0 success, 2 precision exhausted, 3 budget/depth exhausted,
64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .errors import BetaminError, PrecisionExhausted, UsageError
from .numeric import Beta, NAMED_BASES, named_beta
from .words import DigitWord, format_compact, format_pointed, parse_pointed
from .expansion import expansion_of_unity, greedy_expand
from .representation import BetaRepresentation
from .reduction import build_disallowed_table, reduce_to_expansion
from .bounds import evaluate_bounds
from .coverage import (DEFAULT_TOLERANCE, coverage_upper_bound, sweep_point)
from .switched import empirical_rate_probe

EXIT_OK = 0
EXIT_PRECISION = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64

SPECIAL_POINTS = ("rho", "phi", "mu3")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_beta_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("base selection (pick one)")
    g.add_argument("--beta", type=float, help="base as a float literal")
    g.add_argument("--beta-poly",
                   help="integer polynomial coefficients, ascending degree, "
                        "comma separated (needs --bracket)")
    g.add_argument("--bracket", help="lo,hi isolating bracket for --beta-poly")
    g.add_argument("--beta-named", choices=NAMED_BASES,
                   help="a catalogued base")


def _resolve_beta(args) -> Beta:
    picks = [args.beta is not None, args.beta_poly is not None,
             args.beta_named is not None]
    if sum(picks) != 1:
        raise UsageError("exactly one of --beta, --beta-poly, --beta-named "
                         "is required")
    if args.beta is not None:
        if not args.beta > 1:
            raise UsageError("--beta must exceed 1")
        return Beta.from_float(args.beta)
    if args.beta_named is not None:
        return named_beta(args.beta_named)
    if args.bracket is None:
        raise UsageError("--beta-poly requires --bracket lo,hi")
    coeffs = [int(c) for c in args.beta_poly.split(",")]
    lo, hi = (float(x) for x in args.bracket.split(","))
    return Beta.from_polynomial(coeffs, lo, hi)


def _write_csv(path: Optional[str], header: List[str],
               rows: List[List]) -> None:
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        w = csv.writer(out)
        w.writerow(header)
        w.writerows(rows)
    finally:
        if path:
            out.close()


def _fmt(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, Fraction):
        return repr(float(x))
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_json(path: Optional[str], payload: dict) -> None:
    text = json.dumps(payload, indent=2, default=str)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- subcommands ---------------------------------------------------------------


def cmd_expand(args) -> int:
    beta = _resolve_beta(args)
    ge = greedy_expand(beta, args.value, args.digits, style=args.style,
                       precision=args.precision)
    print(format_pointed(ge.word))
    if args.verbose:
        print(f"finite={ge.finite} margin={ge.margin:.3e} "
              f"residual_bound={ge.residual_bound:.3e} "
              f"precision={ge.precision}", file=sys.stderr)
    return EXIT_OK


def cmd_unity(args) -> int:
    beta = _resolve_beta(args)
    u = expansion_of_unity(beta, args.digits, precision=args.precision)
    print(format_compact(DigitWord(1, u.digits)).split(";")[-1])
    print(f"finite={_fmt(u.finite)} monotone={u.monotone.value}"
          + (f" margin={u.margin:.3e}" if u.finite else "")
          + (f" period={u.period}" if u.period else ""))
    return EXIT_OK


def cmd_reduce(args) -> int:
    beta = _resolve_beta(args)
    word = parse_pointed(args.rep)
    unity = expansion_of_unity(beta, args.unity_horizon,
                               precision=args.precision)
    horizon = len(unity.digits) if unity.finite else args.unity_horizon
    table = build_disallowed_table(unity, horizon,
                                   expansion_depth=args.depth)
    res = reduce_to_expansion(BetaRepresentation(beta, word), table,
                              max_steps=args.max_steps, depth=args.depth,
                              min_position=args.min_position)
    for line in res.trace_lines():
        print(line)
    print(f"status={res.status} steps={res.steps} "
          f"digit_sums={res.digit_sums}")
    if res.truncation_residual > 0:
        print(f"rightward mass beyond depth {args.depth}: value bound "
              f"{res.truncation_residual:.3e}; rightmost digit at position "
              f"{res.rightmost_position()}")
    if res.unreduced_prefix is not None:
        print(f"unreduced leading positions {res.unreduced_prefix}")
    if res.status != "clean":
        return EXIT_BUDGET
    return EXIT_OK


_BOUNDS_HEADER = ["beta", "dbar_betaE", "dbar_exact", "thm2_upper",
                  "thm3_lower", "flags"]


def _bounds_row(ev) -> List[str]:
    return [_fmt(ev.beta_value), _fmt(ev.greedy_upper),
            _fmt(ev.greedy_exact),
            _fmt(ev.run_bound) if ev.run_bound is not None else "",
            _fmt(ev.lower_bound), ev.flags.get("greedy_upper", "")]


def cmd_bounds(args) -> int:
    beta = _resolve_beta(args)
    ev = evaluate_bounds(beta, automaton_depth=args.automaton_depth,
                         precision=args.precision)
    _write_csv(args.csv, _BOUNDS_HEADER, [_bounds_row(ev)])
    if args.json:
        _write_json(args.json, {
            "config": _config_echo(args),
            "rows": [dict(zip(_BOUNDS_HEADER, _bounds_row(ev)))]})
    return EXIT_OK


_COVERAGE_HEADER = ["beta", "k", "S", "bound", "covered", "worst_gap",
                    "sequences_examined", "wall_time"]


def cmd_coverage(args) -> int:
    beta = _resolve_beta(args)
    rep = coverage_upper_bound(beta, args.k, s_max=args.s_max,
                               tolerance=args.tolerance, budget=args.budget,
                               checkpoint_path=args.checkpoint,
                               resume=args.resume)
    row = rep.row()
    _write_csv(args.csv, _COVERAGE_HEADER,
               [[_fmt(row[h]) for h in _COVERAGE_HEADER]])
    if args.json:
        _write_json(args.json, {"config": _config_echo(args), "rows": [row]})
    return EXIT_OK if rep.covered else EXIT_BUDGET


_FIGURE1_HEADER = ["beta", "dbar_betaE", "thm2_upper", "coverage_upper",
                   "thm3_lower", "is_special_point"]


def _figure1_point(task) -> List[str]:
    beta, k_max, depth, tolerance, budget, special = task
    ev = evaluate_bounds(beta, automaton_depth=depth)
    sp = sweep_point(beta, k_max, tolerance=tolerance, budget=budget)
    return [_fmt(ev.beta_value), _fmt(ev.greedy_upper),
            _fmt(ev.run_bound) if ev.run_bound is not None else "",
            _fmt(sp.best_bound) if sp.best_bound is not None else "",
            _fmt(ev.lower_bound), _fmt(special)]


def figure1_rows(betas: List[Beta], k_max: int, depth: int, tolerance: float,
                 budget: Optional[int], workers: int,
                 special_flags: Optional[List[bool]] = None) -> List[List[str]]:
    if special_flags is None:
        special_flags = [False] * len(betas)
    tasks = [(b, k_max, depth, tolerance, budget, s)
             for b, s in zip(betas, special_flags)]
    if workers <= 1 or len(tasks) <= 1:
        return [_figure1_point(t) for t in tasks]
    import multiprocessing as mp_mod
    with mp_mod.Pool(workers) as pool:
        return list(pool.imap(_figure1_point, tasks, chunksize=1))


def cmd_figure1(args) -> int:
    start = Fraction(str(args.grid_start))
    stop = Fraction(str(args.grid_stop))
    step = Fraction(str(args.grid_step))
    if step <= 0 or stop < start:
        raise UsageError("empty grid")
    n = int((stop - start) / step) + 1
    if n <= 0:
        raise UsageError("empty grid")
    betas = [Beta.from_float(float(start + i * step)) for i in range(n)]
    flags = [False] * n
    if args.include_special_points:
        specials = [(named_beta(nm), True) for nm in SPECIAL_POINTS]
        merged = sorted(
            [(b, f) for b, f in zip(betas, flags)] + specials,
            key=lambda bf: bf[0].approx)
        betas = [b for b, _ in merged]
        flags = [f for _, f in merged]
    rows = figure1_rows(betas, args.k_max, args.automaton_depth,
                        args.tolerance, args.budget, args.workers, flags)
    _write_csv(args.csv, _FIGURE1_HEADER, rows)
    if args.json:
        _write_json(args.json, {
            "config": _config_echo(args),
            "rows": [dict(zip(_FIGURE1_HEADER, r)) for r in rows]})
    return EXIT_OK


def cmd_probe(args) -> int:
    beta = _resolve_beta(args)
    thetas = [float(t) for t in args.thetas.split(",")]
    if any(t <= 0 for t in thetas) or \
            any(a <= b for a, b in zip(thetas, thetas[1:])):
        raise UsageError("--thetas must be positive and strictly decreasing")
    table = empirical_rate_probe(args.c, beta, thetas, args.steps,
                                 dbar_estimate=args.dbar,
                                 n_angles=args.angles)
    text = table.to_csv()
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items())
            if k != "func" and v is not None}


# -- parser --------------------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="betamin",
                description="Minimum-average-digit analysis of beta "
                            "representations with unrestricted digits")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, digits_default=32):
        _add_beta_args(sp)
        sp.add_argument("--precision", type=int, default=None,
                        help="working precision in bits")
        sp.add_argument("--digits", type=int, default=digits_default,
                        help="digit horizon")
        sp.add_argument("--verbose", action="store_true")

    sp = sub.add_parser("expand", help="greedy expansion of a value")
    common(sp)
    sp.add_argument("--value", type=float, required=True)
    sp.add_argument("--style", choices=("spread", "d0", "fractional"),
                    default="spread",
                    help="spread: integer part over leading powers; d0: one "
                         "unbounded leading digit; fractional: leading digit "
                         "forced to 0 (u <= 1)")
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("unity", help="expansion of unity with reports")
    common(sp)
    sp.set_defaults(func=cmd_unity)

    sp = sub.add_parser("reduce", help="reduce a representation stepwise")
    common(sp)
    sp.add_argument("--rep", required=True,
                    help='pointed digits, e.g. "13.01"')
    sp.add_argument("--depth", type=int, default=48,
                    help="truncation depth for representations and tables")
    sp.add_argument("--max-steps", type=int, default=None)
    sp.add_argument("--min-position", type=int, default=None,
                    help="forbid digits left of this position")
    sp.add_argument("--unity-horizon", type=int, default=48)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("bounds", help="bound table row for one base")
    common(sp)
    sp.add_argument("--automaton-depth", type=int, default=32)
    sp.add_argument("--csv", default=None)
    sp.add_argument("--json", default=None)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("coverage", help="coverage upper bound search")
    common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--s-max", type=int, default=None)
    sp.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    sp.add_argument("--budget", type=int, default=None,
                    help="cap on sequences examined")
    sp.add_argument("--checkpoint", default=None)
    sp.add_argument("--resume", action="store_true")
    sp.add_argument("--csv", default=None)
    sp.add_argument("--json", default=None)
    sp.set_defaults(func=cmd_coverage)

    sp = sub.add_parser("figure1",
                        help="merged bound curves over a base grid")
    sp.add_argument("--grid-start", type=float, default=1.05)
    sp.add_argument("--grid-stop", type=float, default=4.00)
    sp.add_argument("--grid-step", type=float, default=0.05)
    sp.add_argument("--k-max", type=int, default=8)
    sp.add_argument("--automaton-depth", type=int, default=32)
    sp.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--include-special-points", action="store_true",
                    help="append flagged rows for the catalogued bases "
                         "where the greedy value is optimal")
    sp.add_argument("--csv", default=None)
    sp.add_argument("--json", default=None)
    sp.set_defaults(func=cmd_figure1)

    sp = sub.add_parser("probe",
                        help="empirical decay-rate probe of the 2x2 system")
    _add_beta_args(sp)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--thetas", required=True,
                    help="comma separated, strictly decreasing")
    sp.add_argument("--steps", type=int, default=10000)
    sp.add_argument("--dbar", type=float, default=None,
                    help="average-digit estimate for the reference rate")
    sp.add_argument("--angles", type=int, default=64)
    sp.add_argument("--seed", type=int, default=None,
                    help="seed for randomized strategies (built-ins are "
                         "deterministic)")
    sp.add_argument("--csv", default=None)
    sp.set_defaults(func=cmd_probe)

    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"betamin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionExhausted as exc:
        print(f"betamin: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except BetaminError as exc:
        print(f"betamin: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
