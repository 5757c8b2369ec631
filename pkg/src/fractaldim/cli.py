"""Command-line front end: JSON specs in, deterministic CSV/tables out.

Exit codes: 0 success, 2 rejected input, 3 horizon or budget exceeded,
4 unknown catalog identifier.  Output formatting is locale-free with fixed
precision and "\\n" newlines, so identical inputs give byte-identical
output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import blockset, boxdim, hypergrid, selfsimilar, seqgen
from .errors import FractalDimError, HorizonExceededError, InputError

_GEOM_TABLE_RATIOS = (1, 2, 3, 4, 5)
_ARITH_TABLE_STEPS = (0, 1, 2, 3, 4)
_TABLE_SIGMAS = (2, 3, 4, 5)


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation: a single command with its output policy."""

    command: str
    out: str | None
    precision: int


def _fr(value) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"expected a number or p/q fraction, got {value!r}") from exc


def _fmt_fraction(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _fmt(value, precision: int) -> str:
    return f"{float(value):.{precision}f}"


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_dim_block(args, cfg: RunConfig) -> None:
    schedule = blockset.schedule_from_json(_load_json(args.schedule))
    if args.n_max > schedule.horizon:
        raise HorizonExceededError(
            f"n_max {args.n_max} exceeds schedule horizon {schedule.horizon}",
            index=schedule.horizon,
        )
    report = blockset.dim_bounds(schedule, args.n_max, tol=args.tol)
    lines = [blockset.dim_report_csv(report, cfg.precision).rstrip("\n")]
    lines.append("summary,value,decimal")
    for label, value in (
        ("lower", report.lower),
        ("upper", report.upper),
        ("hausdorff_dim", report.lower),
    ):
        exact = _fmt_fraction(value) if isinstance(value, Fraction) else ""
        lines.append(f"{label},{exact},{_fmt(value, cfg.precision)}")
    lines.append(f"converged,{str(report.converged).lower()},{_fmt(report.spread, cfg.precision)}")
    _emit("\n".join(lines) + "\n", cfg)


def cmd_dim_ifs(args, cfg: RunConfig) -> None:
    if args.rule:
        d = selfsimilar.dim_from_rule(selfsimilar.rule(args.rule))
        _emit(f"dimension,{_fmt(d, cfg.precision)}\n", cfg)
        return
    if not args.ratios:
        raise InputError("need a ratio JSON path or --rule NAME")
    obj = _load_json(args.ratios)
    ratios = _parse_ratios(obj)
    root = selfsimilar.moran_solve(ratios, tol=args.tol)
    lines = [f"dimension,{_fmt(root.s, cfg.precision)}"]
    if root.degenerate:
        lines.append("degenerate,true")
    _emit("\n".join(lines) + "\n", cfg)


def _parse_ratios(obj) -> selfsimilar.IfsRatios:
    if not isinstance(obj, dict):
        raise InputError("ratio spec must be a JSON object")
    if "ratios" in obj:
        unknown = set(obj) - {"ratios"}
        if unknown:
            raise InputError(f"unknown keys in ratio spec: {sorted(unknown)}")
        values = obj["ratios"]
        if not isinstance(values, list):
            raise InputError("ratios must be a list")
        return selfsimilar.IfsRatios(tuple(float(v) for v in values))
    if "ratio" in obj and "count" in obj:
        unknown = set(obj) - {"ratio", "count"}
        if unknown:
            raise InputError(f"unknown keys in ratio spec: {sorted(unknown)}")
        return selfsimilar.IfsRatios(tuple([float(obj["ratio"])] * int(obj["count"])))
    raise InputError('ratio spec needs "ratios" or {"ratio", "count"}')


def _table_schedule(kind: str, param: int, sigma: int, n_max: int) -> blockset.BlockSchedule:
    if kind == "geometric":
        spec = seqgen.SequenceSpec.geometric(1, param, horizon=n_max + 1)
    else:
        spec = seqgen.SequenceSpec.arithmetic(1, param, horizon=n_max + 1)
    return blockset.BlockSchedule(base=sigma, alphabet=sigma, zeros=spec)


def cmd_tables_ch6(args, cfg: RunConfig) -> None:
    """Dimension and critical-coefficient tables for the two block families.

    The dim column is the family's limiting value (1/(n+1) for ratio-n
    blocks, 1/2 for arithmetic blocks) and hs is sigma**(-dim); the
    estimate columns show the exact cut value at the requested horizon
    converging toward the limit from below.
    """
    n_max = args.n_max
    lines = ["family,param,sigma,dim,dim_estimate,dim_estimate_decimal,hs"]
    rows = [("geometric", n) for n in _GEOM_TABLE_RATIOS]
    rows += [("arithmetic", d) for d in _ARITH_TABLE_STEPS]
    for family, param in rows:
        limit = Fraction(1, param + 1) if family == "geometric" else Fraction(1, 2)
        for sigma in _TABLE_SIGMAS:
            schedule = _table_schedule(family, param, sigma, n_max)
            estimate = blockset.hausdorff_dim(schedule, n_max)
            hs = float(sigma) ** float(-limit)
            lines.append(
                f"{family},{param},{sigma},{_fmt_fraction(limit)},"
                f"{_fmt_fraction(estimate)},{_fmt(estimate, cfg.precision)},"
                f"{_fmt(hs, cfg.precision)}"
            )
    _emit("\n".join(lines) + "\n", cfg)


def _counts_source(args) -> boxdim.CellSource:
    picked = [bool(args.rule), bool(args.schedule), bool(args.interval)]
    if sum(picked) != 1:
        raise InputError("pick exactly one of --rule, --schedule, --interval")
    if args.rule:
        return boxdim.RuleSource(selfsimilar.rule(args.rule))
    if args.schedule:
        # the budget caps cell enumeration; counting itself is arithmetic
        return blockset.cell_source(
            blockset.schedule_from_json(_load_json(args.schedule)), cell_budget=args.budget
        )
    a, b = (_fr(x) for x in args.interval)
    return boxdim.IntervalSource(a, b, base=args.base)


def cmd_counts(args, cfg: RunConfig) -> None:
    source = _counts_source(args)
    lo, hi = args.levels
    if lo > hi:
        raise InputError("levels must be LO HI with LO <= HI")
    series = boxdim.count_series(source, list(range(lo, hi + 1)))
    _emit(boxdim.count_series_to_csv(series), cfg)


def cmd_two_grid(args, cfg: RunConfig) -> None:
    if args.rule:
        if not args.levels:
            raise InputError("--rule needs --levels P Q")
        rule = selfsimilar.rule(args.rule)
        p, q = args.levels
        if not 0 <= p < q:
            raise InputError("levels must be P Q with P < Q")
        result = boxdim.two_grid_dim(
            rule.pieces**q,
            rule.pieces**p,
            Fraction(1, rule.scale**q),
            Fraction(1, rule.scale**p),
        )
    else:
        if args.n_h is None or args.n_k is None or args.h is None or args.k is None:
            raise InputError("need --rule with --levels, or all of --n-h --n-k --h --k")
        result = boxdim.two_grid_dim(args.n_h, args.n_k, _fr(args.h), _fr(args.k))
    payload = boxdim.two_grid_result_to_json(result, cfg.precision)
    _emit(json.dumps(payload, sort_keys=True) + "\n", cfg)


def cmd_critical_d(args, cfg: RunConfig) -> None:
    try:
        with open(args.counts, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.counts}: {exc}") from exc
    series = boxdim.count_series_from_csv(text)
    result = boxdim.critical_d(series, tol=args.tol, d_max=args.d_max)
    lines = [f"critical_d,{_fmt(result.d, cfg.precision)}"]
    lines.append(f"bracket,{_fmt(result.lo, cfg.precision)},{_fmt(result.hi, cfg.precision)}")
    if result.degenerate:
        lines.append("degenerate,true")
    _emit("\n".join(lines) + "\n", cfg)


def cmd_hyper_hsd(args, cfg: RunConfig) -> None:
    grid, iset = hypergrid.internal_set_from_json(_load_json(args.setspec))
    delta = _fr(args.delta)
    s = _fr(args.s)
    part = hypergrid.h_delta_s_greedy(iset, delta, s, grid)
    lines = [f"cost,{_fmt(part.cost, cfg.precision)}"]
    lines.append(f"intervals,{len(part.intervals)}")
    if args.oracle:
        oracle = hypergrid.h_delta_s_dp(iset, delta, s, grid)
        lines.append(f"oracle_cost,{_fmt(oracle.cost, cfg.precision)}")
        lines.append(f"oracle_match,{str(oracle.cost == part.cost).lower()}")
    _emit("\n".join(lines) + "\n", cfg)


def cmd_fractal(args, cfg: RunConfig) -> None:
    series_list = selfsimilar.geometry_catalog(args.name)
    lines = ["quantity,unit,m,recurrence,closed_form,deviation"]
    for series in series_list:
        rec = series.values(args.m_max)
        clo = series.closed_values(args.m_max)
        for m, (a, b) in enumerate(zip(rec, clo)):
            lines.append(
                f"{series.quantity},{series.unit},{m},{_fmt_fraction(a)},"
                f"{_fmt_fraction(b)},{_fmt_fraction(abs(a - b))}"
            )
    for report in selfsimilar.closed_form_check(args.name, args.m_max):
        flag = "consistent" if report.consistent else "inconsistent"
        lines.append(
            f"check,{report.quantity},{flag},{_fmt_fraction(report.max_deviation)}"
        )
    _emit("\n".join(lines) + "\n", cfg)


def cmd_seq_check(args, cfg: RunConfig) -> None:
    spec = seqgen.spec_from_json(_load_json(args.spec))
    if args.squared_sum is not None:
        rows = seqgen.squared_sum_check(spec, args.squared_sum)
        lines = ["index,holds"]
        lines += [f"{i},{str(ok).lower()}" for i, ok in rows]
        _emit("\n".join(lines) + "\n", cfg)
        return
    if args.tail_k is not None:
        ok = seqgen.tail_domination(spec, args.tail_k, _fr(args.eps))
        _emit(f"tail_domination,{str(ok).lower()}\n", cfg)
        return
    if args.K is None or args.window is None:
        raise InputError("need --K and --window (or --squared-sum / --tail-k)")
    lo, hi = args.window
    verdict = seqgen.dimzero_criterion(spec, _fr(args.K), lo, hi)
    margin = "" if verdict.margin is None else _fmt_fraction(verdict.margin)
    _emit(f"status,{verdict.status}\nwitness,{verdict.witness_index}\nmargin,{margin}\n", cfg)


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fractaldim",
        description="Exact fractal-dimension toolkit: digit-block sets, "
        "box counting, Moran roots and grid measures.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--precision", type=int, default=12, help="decimal digits")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim-block", parents=[common], help="cut-family dimensions of a digit-block set")
    p.add_argument("schedule", help="block schedule JSON path")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_dim_block)

    p = sub.add_parser("dim-ifs", parents=[common], help="Moran/rule self-similar dimension")
    p.add_argument("ratios", nargs="?", help="contraction-ratio JSON path")
    p.add_argument("--rule", help="catalog rule name")
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_dim_ifs)

    p = sub.add_parser("tables-ch6", parents=[common], help="block-family dimension tables")
    p.add_argument("--n-max", type=int, default=14)
    p.set_defaults(func=cmd_tables_ch6)

    p = sub.add_parser("counts", parents=[common], help="cell-count series as CSV")
    p.add_argument("--rule", help="catalog rule name")
    p.add_argument("--schedule", help="block schedule JSON path")
    p.add_argument("--interval", nargs=2, metavar=("A", "B"), help="interval endpoints")
    p.add_argument("--base", type=int, default=2, help="radix for --interval")
    p.add_argument("--levels", nargs=2, type=int, required=True, metavar=("LO", "HI"))
    p.add_argument("--budget", type=int, default=10**8)
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("two-grid", parents=[common], help="two-scale count-ratio dimension")
    p.add_argument("--rule", help="catalog rule name")
    p.add_argument("--levels", nargs=2, type=int, metavar=("P", "Q"))
    p.add_argument("--n-h", type=int)
    p.add_argument("--n-k", type=int)
    p.add_argument("--h")
    p.add_argument("--k")
    p.set_defaults(func=cmd_two_grid)

    p = sub.add_parser("critical-d", parents=[common], help="dot-count critical exponent")
    p.add_argument("counts", help="count series CSV path")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--d-max", type=float, default=None)
    p.set_defaults(func=cmd_critical_d)

    p = sub.add_parser("hyper-hsd", parents=[common], help="minimal delta-interval partition cost")
    p.add_argument("setspec", help="internal set JSON path")
    p.add_argument("--delta", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--oracle", action="store_true", help="cross-check greedy against the DP")
    p.set_defaults(func=cmd_hyper_hsd)

    p = sub.add_parser("fractal", parents=[common], help="catalog geometry series and checks")
    p.add_argument("name")
    p.add_argument("--m-max", type=int, required=True)
    p.set_defaults(func=cmd_fractal)

    p = sub.add_parser("seq-check", parents=[common], help="sequence growth criteria")
    p.add_argument("spec", help="sequence spec JSON path")
    p.add_argument("--K")
    p.add_argument("--window", nargs=2, type=int, metavar=("LO", "HI"))
    p.add_argument("--squared-sum", type=int, default=None, metavar="N")
    p.add_argument("--tail-k", type=int, default=None, metavar="K")
    p.add_argument("--eps", default="0")
    p.set_defaults(func=cmd_seq_check)

    return parser


def main(argv=None) -> int:
    # exact big naturals (power-tower digit positions) can exceed the
    # interpreter's default int-to-str conversion limit when printed
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(max(2_000_000, sys.get_int_max_str_digits()))
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(command=args.command, out=args.out, precision=args.precision)
    if cfg.precision < 1 or cfg.precision > 50:
        print("error: --precision must be in [1, 50]", file=sys.stderr)
        return 2
    try:
        args.func(args, cfg)
    except FractalDimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
