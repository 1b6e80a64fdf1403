"""Plain-text table rendering for pipeline traces and solver output.

The layout mirrors the worked tables the demos reproduce: a label column, a
signed exponent column, then one column per stored power of the machine
constant (written ``u^0, u^-1, ...``), highest power first.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .arith import TraceRow
from .number import GrossFloat, chunk_str, to_decimal_string
from .rootfind import HornerStep, SolveTrace

__all__ = [
    "render_trace",
    "render_value_rows",
    "render_horner_trace",
    "render_solve_summary",
]


def _exp_cell(sign: int, base: int, exponent: int | None) -> str:
    if exponent is None:
        return "0"
    prefix = "-" if sign < 0 else ""
    return f"{prefix}{base}^{exponent}"


def render_trace(rows: Sequence[TraceRow], base: int = 2,
                 power_symbol: str = "u") -> str:
    """Render pipeline rows as an aligned text table."""
    if not rows:
        return ""
    cols = sorted({c for row in rows for c in row.cells})
    headers = ["", "exp"] + [f"{power_symbol}^{-c}" for c in cols]
    table = [headers]
    for row in rows:
        line = [row.label, _exp_cell(row.sign, base, row.exponent)]
        for c in cols:
            line.append(row.cells.get(c, ""))
        table.append(line)
    widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
    out = []
    for r in table:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return "\n".join(out) + "\n"


def render_value_rows(values: Iterable[tuple[str, GrossFloat]],
                      power_symbol: str = "u") -> str:
    """Render labelled values, one table row each (used for iterate traces)."""
    pairs = list(values)
    rows = []
    base = pairs[0][1].config.base if pairs else 2
    for label, v in pairs:
        if v.is_zero:
            rows.append(TraceRow(label, 1, None, {}))
        else:
            cfg = v.config
            rows.append(TraceRow(label, v.sign, v.exponent,
                                 {j: chunk_str(c, cfg) for j, c in enumerate(v.chunks)}))
    return render_trace(rows, base=base, power_symbol=power_symbol)


def render_horner_trace(initial: GrossFloat, steps: Sequence[HornerStep],
                        power_symbol: str = "u") -> str:
    """Horner evaluation in the multi-row layout: one block per update.

    Intermediate updates show the accumulated value; the final update also
    shows the pre-addition product, whose leading chunks the last coefficient
    typically cancels.
    """
    labelled: list[tuple[str, GrossFloat]] = [("start", initial)]
    for i, st in enumerate(steps):
        last = i == len(steps) - 1
        coeff = to_decimal_string(st.coefficient, 6)
        if last:
            labelled.append(("product", st.product.trimmed()))
            labelled.append((f"add {coeff}", st.value.trimmed()))
        else:
            labelled.append((f"times x, add {coeff}", st.value.trimmed()))
    rows = []
    for label, v in labelled:
        if v.is_zero:
            rows.append(TraceRow(label, 1, None, {}))
        else:
            cfg = v.config
            rows.append(TraceRow(label, v.sign, v.exponent,
                                 {j: chunk_str(c, cfg) for j, c in enumerate(v.chunks)}))
    base = initial.config.base
    return render_trace(rows, base=base, power_symbol=power_symbol)


def render_solve_summary(trace: SolveTrace) -> str:
    """Human-readable summary of a Newton run."""
    if not trace.steps:
        return "no steps taken\n"
    last = trace.steps[-1]
    lines = [
        f"mode:        {trace.mode}",
        f"steps:       {len(trace.steps)}",
        f"termination: {trace.reason}",
        f"final x:     {to_decimal_string(last.x, 40)}",
        f"final err:   {last.err:.3e}",
        f"final prec:  {last.prec}",
        f"grossdigit mults: {last.cum_mults}",
        f"grossdigit adds:  {last.cum_adds}",
    ]
    return "\n".join(lines) + "\n"
