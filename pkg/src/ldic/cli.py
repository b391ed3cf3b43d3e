"""Command-line front end: capacity queries, simulations, and sweeps.

Exit codes: 0 success, 1 usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .capacity import (regime, saturating_beta, sum_capacity_infinite,
                       sum_capacity_limited, sum_capacity_nofb)
from .core import ChannelConfig
from .errors import LdicError
from .simulator import rank_oracle, run, verify_budget
from .strategies import plan_for

USAGE_ERROR = 1
VERIFY_ERROR = 2

CSV_HEADER = "alpha,beta,c_limited,c_nofb,c_infinite"


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit code 2; we need 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def parse_rational(text: str) -> Fraction:
    """Parse "2/3", "3", or "0.125" exactly; no binary floats involved."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational: {text!r}") from None


def fmt6(value: Fraction) -> str:
    """Render with exactly 6 decimals, round half to even, from the exact value."""
    f = Fraction(value)
    sign = "-" if f < 0 else ""
    scaled = abs(f) * 10**6
    q, r = divmod(scaled.numerator, scaled.denominator)
    double = 2 * r
    if double > scaled.denominator or (double == scaled.denominator and q % 2):
        q += 1
    return f"{sign}{q // 10**6}.{q % 10**6:06d}"


def _both(value: Fraction) -> str:
    return f"{value} ({fmt6(value)})"


def _fail(message: str) -> int:
    print(f"ldic: error: {message}", file=sys.stderr)
    return USAGE_ERROR


def cmd_capacity(args: argparse.Namespace) -> int:
    int_style = [v for v in (args.n, args.m, args.rf) if v is not None]
    rat_style = [v for v in (args.alpha, args.beta) if v is not None]
    if int_style and rat_style:
        return _fail("give either --n/--m/--rf or --alpha/--beta, not both")
    if int_style:
        if len(int_style) != 3:
            return _fail("integer style needs all of --n, --m, --rf")
        try:
            cfg = ChannelConfig(args.n, args.m, args.rf)
        except ValueError as exc:
            return _fail(str(exc))
        alpha, beta = cfg.alpha(), cfg.beta()
    else:
        if len(rat_style) != 2:
            return _fail("rational style needs both --alpha and --beta")
        alpha, beta = args.alpha, args.beta
        if alpha < 0 or beta < 0:
            return _fail("alpha and beta must be nonnegative")
    print(f"alpha = {_both(alpha)}")
    print(f"beta = {_both(beta)}")
    print(f"regime = {regime(alpha, beta).value}")
    print(f"c_limited = {_both(sum_capacity_limited(alpha, beta))}")
    print(f"c_nofb = {_both(sum_capacity_nofb(alpha))}")
    print(f"c_infinite = {_both(sum_capacity_infinite(alpha))}")
    print(f"saturating_beta = {_both(saturating_beta(alpha))}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        cfg = ChannelConfig(args.n, args.m, args.rf)
    except ValueError as exc:
        return _fail(str(exc))
    if args.blocks < 1:
        return _fail("blocks must be positive")
    try:
        trace, report = run(cfg, args.blocks, args.seed)
        budget_ok = verify_budget(trace, cfg)
        v1, v2 = rank_oracle(cfg, trace)
    except LdicError as exc:
        print(f"ldic: verification failure: {exc}", file=sys.stderr)
        return VERIFY_ERROR
    plan = plan_for(cfg)
    d1, d2 = report.delivered_bits
    print(f"regime = {plan.regime.value}")
    print(f"scheme = {plan.scheme}")
    print(f"blocks = {args.blocks}")
    print(f"slots_used = {report.slots_used}")
    print(f"delivered_bits = {d1} + {d2} = {d1 + d2}")
    print(f"achieved = {_both(report.achieved)}")
    print(f"formula = {_both(report.formula)}")
    print(f"gap = {_both(report.gap)}")
    print(f"oracle = {'ok' if v1.ok and v2.ok else 'FAILED'}")
    print(f"budget = {'ok' if budget_ok else 'FAILED'}")
    if args.trace_out:
        with open(args.trace_out, "w", encoding="ascii") as fh:
            fh.write(trace.to_text())
    if not (budget_ok and v1.ok and v2.ok):
        print("ldic: verification failure", file=sys.stderr)
        return VERIFY_ERROR
    return 0


def _sweep_rows(beta: Fraction, lo: Fraction, hi: Fraction, step: Fraction,
                exact: bool) -> list[str]:
    render = (lambda v: str(v)) if exact else fmt6
    rows = []
    alpha = lo
    while alpha <= hi:
        rows.append(",".join((
            render(alpha), render(beta),
            render(sum_capacity_limited(alpha, beta)),
            render(sum_capacity_nofb(alpha)),
            render(sum_capacity_infinite(alpha)))))
        alpha += step
    return rows


def _validate_csv(text: str) -> str | None:
    """Re-check an emitted sweep: header and sandwich ordering per row."""
    lines = text.strip("\n").split("\n")
    if not lines or lines[0] != CSV_HEADER:
        return "bad header"
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 5:
            return f"line {i}: expected 5 fields"
        try:
            c_lim, c_nofb, c_inf = (Fraction(p) for p in parts[2:])
        except ValueError:
            return f"line {i}: unparseable value"
        if not c_nofb <= c_lim <= c_inf:
            return f"line {i}: sandwich ordering violated"
    return None


def cmd_sweep(args: argparse.Namespace) -> int:
    beta, lo, hi, step = args.beta, args.alpha_min, args.alpha_max, args.step
    if beta < 0 or lo < 0:
        return _fail("beta and alpha bounds must be nonnegative")
    if lo > hi:
        return _fail("--alpha-min must not exceed --alpha-max")
    if step <= 0:
        return _fail("--step must be positive")
    text = "\n".join([CSV_HEADER] + _sweep_rows(beta, lo, hi, step, args.exact)) + "\n"
    if args.out and args.out != "-":
        try:
            with open(args.out, "w", encoding="ascii") as fh:
                fh.write(text)
            with open(args.out, "r", encoding="ascii") as fh:
                written = fh.read()
        except OSError as exc:
            return _fail(f"cannot write {args.out}: {exc}")
    else:
        written = text
        sys.stdout.write(text)
    problem = _validate_csv(written)
    if problem:
        print(f"ldic: emitted CSV failed validation: {problem}", file=sys.stderr)
        return VERIFY_ERROR
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="ldic", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("capacity", help="evaluate the sum-capacity formulas")
    cap.add_argument("--n", type=int)
    cap.add_argument("--m", type=int)
    cap.add_argument("--rf", type=int)
    cap.add_argument("--alpha", type=parse_rational)
    cap.add_argument("--beta", type=parse_rational)
    cap.set_defaults(func=cmd_capacity)

    sim = sub.add_parser("simulate", help="run a verified end-to-end simulation")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--m", type=int, required=True)
    sim.add_argument("--rf", type=int, required=True)
    sim.add_argument("--blocks", type=int, default=10)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--trace-out", help="write the slot-by-slot trace here")
    sim.set_defaults(func=cmd_simulate)

    sw = sub.add_parser("sweep", help="emit a capacity-vs-alpha CSV")
    sw.add_argument("--beta", type=parse_rational, required=True)
    sw.add_argument("--alpha-min", type=parse_rational, default=Fraction(0))
    sw.add_argument("--alpha-max", type=parse_rational, default=Fraction(3))
    sw.add_argument("--step", type=parse_rational, default=Fraction(1, 24))
    sw.add_argument("--out", default="-", help="output path, - for stdout")
    sw.add_argument("--exact", action="store_true",
                    help="emit exact p/q values instead of 6-decimal renderings")
    sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.func(args)
    except LdicError as exc:
        print(f"ldic: verification failure: {exc}", file=sys.stderr)
        return VERIFY_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
