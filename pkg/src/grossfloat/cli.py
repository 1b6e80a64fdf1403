"""Command-line front end.

Subcommands::

    grossfloat demo add "2^0:1.11010101110" "2^-3:1.11111001011" --t 3 --T 2
    grossfloat eval-sum 1.25 -0.75 2e-3 --target 3.9e-3 --t 7 --T 3
    grossfloat newton --poly 1,-5,10,-10,5,-1 --x0 2 --mode dynamic
    grossfloat figure 2 --out results/

Operands accept three spellings: a grossfloat literal (``+2^0 : 1.110|1.010``),
a base-2 scientific form (``2^-3:1.11111001011``, sign optional), or a plain
decimal (``0.1``, ``-2.5e-3``).

Format parameters come from ``--base/--t/--T/--rounding``, optionally seeded
from a ``key=value`` config file (flags win).  Exit codes: 0 success, 1 usage
error, 2 arithmetic error, 3 target accuracy unreachable.
"""

from __future__ import annotations

import argparse
import re
import sys

from .arith import TraceRow, add, div, mul, reciprocal, sub
from .config import ArithConfig, Rounding
from .errors import (
    AccuracyExhaustedError,
    DivisionByZeroError,
    ExponentOverflowError,
    FormatError,
    GrossFloatError,
    SectionRangeError,
    SingularStepError,
)
from .figures import run_figure
from .number import (
    GrossFloat,
    format_literal,
    from_binary_string,
    from_decimal_string,
    parse_literal,
    to_decimal_string,
)
from .precision import SumStep, adaptive_sum
from .profiler import OpCounter
from .render import render_solve_summary, render_trace, render_value_rows
from .rootfind import Polynomial, newton_solve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ARITHMETIC = 2
EXIT_ACCURACY = 3

_BINARY_SCI_RE = re.compile(r"^(?P<sign>[+-])?(?P<base>\d+)\^(?P<exp>-?\d+)\s*[:·*]\s*(?P<mant>[0-9.]+)$")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_operand(text: str, config: ArithConfig) -> GrossFloat:
    """Parse a literal, binary-scientific, or decimal operand."""
    stripped = text.strip()
    if "|" in stripped:
        return parse_literal(stripped, config)
    m = _BINARY_SCI_RE.match(stripped)
    if m:
        if int(m.group("base")) != config.base:
            raise FormatError(f"operand base {m.group('base')} != config base "
                              f"{config.base}")
        sign = -1 if m.group("sign") == "-" else 1
        return from_binary_string(sign, int(m.group("exp")), m.group("mant"), config)
    return from_decimal_string(stripped, config)


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise FormatError(f"bad config line: {line!r}")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def _add_common(p: argparse.ArgumentParser) -> None:
    # default SUPPRESS so a flag after the subcommand does not clobber one
    # given before it
    g = p.add_argument_group("format options")
    g.add_argument("--config-file", default=argparse.SUPPRESS,
                   help="key=value defaults (flags override)")
    g.add_argument("--base", type=int, default=argparse.SUPPRESS,
                   help="digit base (default 2)")
    g.add_argument("--t", type=int, default=argparse.SUPPRESS,
                   help="fractional digits per chunk; chunk width is t+1 (default 52)")
    g.add_argument("--T", type=int, default=argparse.SUPPRESS,
                   help="highest stored section index (default 4)")
    g.add_argument("--rounding", default=argparse.SUPPRESS,
                   choices=["truncate", "nearest-even", "nearest_even"],
                   help="rounding mode (default nearest-even)")
    g.add_argument("--format", dest="out_format", default=argparse.SUPPRESS,
                   choices=["table", "csv"], help="output format (default table)")
    g.add_argument("--out", default=argparse.SUPPRESS,
                   help="output directory or file")


def build_parser() -> _Parser:
    parser = _Parser(prog="grossfloat", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_common(parser)

    sub_parsers = parser.add_subparsers(dest="command", required=True)

    p_demo = sub_parsers.add_parser("demo", help="render one operation's pipeline")
    p_demo.add_argument("op", choices=["add", "sub", "mul", "recip", "div"])
    p_demo.add_argument("operands", nargs="+", help="one operand for recip, two otherwise")
    p_demo.add_argument("--section", type=int, default=None,
                        help="result section (default T)")
    _add_common(p_demo)

    p_sum = sub_parsers.add_parser("eval-sum", help="adaptive-precision signed sum")
    p_sum.add_argument("terms", nargs="+", help="signed terms")
    p_sum.add_argument("--target", type=float, required=True,
                       help="target relative accuracy, e.g. 3.9e-3")
    _add_common(p_sum)

    p_newton = sub_parsers.add_parser("newton", help="Newton root finding")
    p_newton.add_argument("--poly", required=True,
                          help="comma-separated coefficients, degree-descending")
    p_newton.add_argument("--x0", required=True, help="starting point")
    p_newton.add_argument("--mode", default="dynamic",
                          help="dynamic or fixed:<q> (default dynamic)")
    p_newton.add_argument("--tol", type=float, default=1e-15,
                          help="stop when the error estimate drops below this")
    p_newton.add_argument("--safety", type=float, default=1.0,
                          help="escalation safety factor s <= 1")
    p_newton.add_argument("--max-iter", type=int, default=200)
    p_newton.add_argument("--csv-out", default=None,
                          help="write the per-step trace CSV here")
    _add_common(p_newton)

    p_fig = sub_parsers.add_parser("figure", help="reproduce an error-vs-iteration figure")
    p_fig.add_argument("figure_id", type=int, choices=[1, 2])
    p_fig.add_argument("--tol", type=float, default=0.0,
                       help="dynamic-mode stop tolerance (default: run to the floor)")
    p_fig.add_argument("--safety", type=float, default=1.0)
    p_fig.add_argument("--max-iter", type=int, default=200)
    p_fig.add_argument("--no-png", action="store_true", help="emit CSVs only")
    _add_common(p_fig)

    return parser


_COMMON_DEFAULTS = {
    "config_file": None,
    "base": None,
    "t": None,
    "T": None,
    "rounding": None,
    "out_format": "table",
    "out": None,
}


def _fill_common(args) -> None:
    for name, default in _COMMON_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, default)


def make_config(args) -> ArithConfig:
    file_vals = _read_config_file(args.config_file) if args.config_file else {}

    def pick(flag_value, key, fallback, cast):
        if flag_value is not None:
            return flag_value
        if key in file_vals:
            return cast(file_vals[key])
        return fallback

    base = pick(args.base, "base", 2, int)
    t = pick(args.t, "t", 52, int)
    top = pick(args.T, "T", 4, int)
    rounding_text = pick(args.rounding, "rounding", "nearest_even", str)
    return ArithConfig(base=base, chunk_width=t + 1, max_section=top,
                       rounding=Rounding.parse(rounding_text))


def _emit(text: str, args) -> None:
    if args.out and args.command != "figure":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_demo(args, config: ArithConfig) -> int:
    need = 1 if args.op == "recip" else 2
    if len(args.operands) != need:
        raise FormatError(f"demo {args.op} takes exactly {need} operand(s)")
    rs = config.max_section if args.section is None else args.section
    operands = [parse_operand(text, config) for text in args.operands]
    profiler = OpCounter()
    if args.op == "recip":
        iterates: list[GrossFloat] = []
        result = reciprocal(operands[0], rs, profiler=profiler, trace=iterates)
        rows = render_value_rows(
            [(f"Z_{i}", z) for i, z in enumerate(iterates)] + [("result", result)])
        _emit(rows + f"result = {format_literal(result)}\n", args)
        return EXIT_OK
    trace: list[TraceRow] = []
    if args.op == "div":
        result = div(operands[0], operands[1], rs, profiler=profiler)
        text = render_value_rows([("x", operands[0]), ("y", operands[1]),
                                  ("x/y", result)])
        _emit(text + f"result = {format_literal(result)}\n", args)
        return EXIT_OK
    op = {"add": add, "sub": sub, "mul": mul}[args.op]
    result, report = op(operands[0], operands[1], rs, profiler=profiler, trace=trace)
    text = render_trace(trace, base=config.base)
    text += f"result = {format_literal(result)}\n"
    if report.shift:
        text += f"normalization shift: {report.shift} digits\n"
    text += (f"grossdigit mults: {profiler.grossdigit_mults}, "
             f"adds: {profiler.grossdigit_adds}\n")
    _emit(text, args)
    return EXIT_OK


def cmd_eval_sum(args, config: ArithConfig) -> int:
    terms = [parse_operand(text, config) for text in args.terms]
    profiler = OpCounter()
    steps: list[SumStep] = []
    try:
        result, prec = adaptive_sum(terms, args.target, profiler=profiler,
                                    trace_hook=steps.append)
    except AccuracyExhaustedError as exc:
        best = format_literal(exc.best) if exc.best is not None else "n/a"
        sys.stderr.write(f"accuracy exhausted: {exc}; best result {best}\n")
        return EXIT_ACCURACY
    if args.out_format == "csv":
        lines = ["step,term,sections,result,bound,shift,action"]
        for s in steps:
            secs = " ".join(str(q) for q in s.sections)
            lines.append(f"{s.step},{s.term_index},{secs},"
                         f"{format_literal(s.result)},{s.bound:.3e},"
                         f"{s.shift_digits},{s.action}")
        text = "\n".join(lines) + "\n"
    else:
        lines = []
        for s in steps:
            secs = ",".join(str(q) for q in s.sections)
            lines.append(f"step {s.step}: term {s.term_index} sections [{secs}] "
                         f"-> {format_literal(s.result)}  bound {s.bound:.2e}  "
                         f"{s.action}")
        lines.append(f"result = {format_literal(result)}  (precision level {prec}, "
                     f"grossdigit adds {profiler.grossdigit_adds})")
        text = "\n".join(lines) + "\n"
    _emit(text, args)
    return EXIT_OK


def _parse_mode(text: str) -> tuple[str, int | None]:
    if text == "dynamic":
        return "dynamic", None
    m = re.match(r"^fixed[:(]?(\d+)\)?$", text)
    if not m:
        raise FormatError(f"mode must be 'dynamic' or 'fixed:<q>', got {text!r}")
    return "fixed", int(m.group(1))


def cmd_newton(args, config: ArithConfig) -> int:
    coeffs = [c.strip() for c in args.poly.split(",") if c.strip()]
    poly = Polynomial.from_coefficients(coeffs, config)
    x0 = parse_operand(args.x0, config)
    mode, fixed_section = _parse_mode(args.mode)
    profiler = OpCounter()
    trace = newton_solve(poly, x0, args.tol, mode=mode,
                         fixed_section=fixed_section, max_iter=args.max_iter,
                         safety=args.safety, profiler=profiler)
    if args.csv_out:
        trace.to_csv(args.csv_out)
    if args.out_format == "csv":
        _emit(trace.to_csv(), args)
    else:
        _emit(render_solve_summary(trace), args)
    return EXIT_OK


def cmd_figure(args, config: ArithConfig) -> int:
    outdir = args.out or "."
    result = run_figure(args.figure_id, config, outdir, tol=args.tol,
                        max_iter=args.max_iter, safety=args.safety,
                        render_png=not args.no_png)
    for path in result.csv_paths:
        print(f"wrote {path}")
    if result.png_path:
        print(f"wrote {result.png_path}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _fill_common(args)
    try:
        config = make_config(args)
        if args.command == "demo":
            return cmd_demo(args, config)
        if args.command == "eval-sum":
            return cmd_eval_sum(args, config)
        if args.command == "newton":
            return cmd_newton(args, config)
        if args.command == "figure":
            return cmd_figure(args, config)
        parser.error(f"unknown command {args.command!r}")
    except (FormatError, SectionRangeError, OSError) as exc:
        sys.stderr.write(f"grossfloat: {exc}\n")
        return EXIT_USAGE
    except (DivisionByZeroError, ExponentOverflowError, SingularStepError) as exc:
        sys.stderr.write(f"grossfloat: arithmetic error: {exc}\n")
        return EXIT_ARITHMETIC
    except AccuracyExhaustedError as exc:
        sys.stderr.write(f"grossfloat: {exc}\n")
        return EXIT_ACCURACY
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
