"""Arithmetic pipelines: add, sub, mul, reciprocal, div, normalize.

Every operation follows the same shape: align or convolve the operands'
grossdigits into a raw accumulator of per-power integer sums, resolve carries,
normalize (shifting the mantissa so the leading digit is nonzero, which is
where cancellation becomes visible), and round once after the requested
result section.  Intermediate arithmetic is exact, so results match the exact
rational value rounded to the format.

Passing a ``trace`` list collects the pipeline's intermediate rows in the
layout used by the CLI's demo tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .config import ArithConfig, Rounding
from .errors import DivisionByZeroError, ExponentOverflowError, SectionRangeError
from .number import (
    GrossFloat,
    chunk_str,
    chunks_to_digits,
    digits_of_int,
    digits_to_chunks,
    from_fraction,
    int_of_digits,
    wide_str,
)
from .profiler import OpCounter

__all__ = [
    "NormalizationReport",
    "RawAccumulator",
    "TraceRow",
    "add",
    "sub",
    "mul",
    "div",
    "reciprocal",
    "normalize",
    "round_to_section",
]


@dataclass(frozen=True)
class NormalizationReport:
    """What normalization did: the left-shift count is the cancellation signal."""

    shift: int = 0              # digit positions shifted left (0 if none)
    rounded: bool = False       # result is inexact
    overflow: bool = False
    underflow: bool = False
    exact_zero: bool = False    # nonzero operands cancelled completely


@dataclass(frozen=True)
class RawAccumulator:
    """Unnormalized per-power sums produced by the add/mul pipelines.

    ``slots[j]`` is an integer-valued coefficient of ``unit**(-j)`` scaled by
    ``base**(t + extra_frac)``; it may exceed the chunk range until carries
    are redistributed.
    """

    sign: int
    exponent: int
    slots: tuple[int, ...]
    config: ArithConfig
    extra_frac: int = 0

    def to_mantissa(self) -> tuple[int, int]:
        """Collapse to ``(M, nominal_digits)`` with
        value = sign * base**exponent * M * base**(1 - nominal_digits)."""
        cfg = self.config
        w = cfg.chunk_width
        top = len(self.slots) - 1
        m = 0
        for s in self.slots:
            m = m * cfg.unit + s        # base**w per slot step
        # slots carry w*top extra scaling; undo nothing, record digit count
        nominal = cfg.t + self.extra_frac + w * top + 1
        return m, nominal


@dataclass(frozen=True)
class TraceRow:
    """One rendered pipeline row: a label, an exponent cell, per-power cells."""

    label: str
    sign: int
    exponent: int | None
    cells: dict[int, str]


# ---------------------------------------------------------------------------
# normalization and rounding
# ---------------------------------------------------------------------------

def _digit_len(n: int, base: int) -> int:
    if n == 0:
        return 0
    if base == 2:
        return n.bit_length()
    length = 0
    while n:
        n //= base
        length += 1
    return length


def _round_kept(mantissa: int, drop: int, base: int, mode: Rounding) -> tuple[int, bool]:
    if drop <= 0:
        return mantissa, False
    scale = base ** drop
    kept, rem = divmod(mantissa, scale)
    if rem == 0:
        return kept, False
    if mode is Rounding.NEAREST_EVEN:
        double = 2 * rem
        if double > scale or (double == scale and kept % 2 == 1):
            kept += 1
    return kept, True


def _normalize_int(sign: int, anchor_exp: int, mantissa: int, nominal_digits: int,
                   result_section: int, config: ArithConfig,
                   rounding: Rounding | None = None,
                   nonzero_inputs: bool = False) -> tuple[GrossFloat, NormalizationReport]:
    """Normalize and round an exact mantissa integer.

    The value represented is ``sign * base**anchor_exp * mantissa *
    base**(1 - nominal_digits)``: with ``mantissa`` exactly ``nominal_digits``
    long the leading digit sits at ``anchor_exp``.
    """
    cfg = config
    mode = rounding if rounding is not None else cfg.rounding
    if mantissa == 0:
        report = NormalizationReport(shift=nominal_digits, exact_zero=nonzero_inputs)
        return GrossFloat.zero(cfg), report
    length = _digit_len(mantissa, cfg.base)
    shift_left = nominal_digits - length       # > 0: cancellation, < 0: carry out
    exponent = anchor_exp - shift_left
    keep = (result_section + 1) * cfg.chunk_width
    kept, inexact = _round_kept(mantissa, length - keep, cfg.base, mode)
    width = min(length, keep)
    if kept >= cfg.base ** width:              # rounding carried out of the top
        kept //= cfg.base
        exponent += 1
    if exponent > cfg.exponent_max:
        raise ExponentOverflowError(f"exponent {exponent} overflows the format")
    if exponent < cfg.exponent_min:
        report = NormalizationReport(shift=max(shift_left, 0), rounded=True,
                                     underflow=True)
        return GrossFloat.zero(cfg), report
    digits = digits_of_int(kept, cfg.base, width)
    out = GrossFloat(sign, exponent, digits_to_chunks(digits, cfg), cfg)
    report = NormalizationReport(shift=max(shift_left, 0), rounded=inexact)
    return out, report


def normalize(raw: RawAccumulator, result_section: int,
              rounding: Rounding | None = None) -> tuple[GrossFloat, NormalizationReport]:
    """Carry-propagate, shift, and round a raw accumulator into a value."""
    _check_section(result_section, raw.config)
    mantissa, nominal = raw.to_mantissa()
    return _normalize_int(raw.sign, raw.exponent, mantissa, nominal,
                          result_section, raw.config, rounding)


def round_to_section(x: GrossFloat, result_section: int,
                     rounding: Rounding | None = None) -> GrossFloat:
    """Round a stored value to at most ``result_section + 1`` chunks."""
    _check_section(result_section, x.config)
    if x.is_zero or len(x.chunks) <= result_section + 1:
        return x
    digits = x.mantissa_digits()
    value, _ = _normalize_int(x.sign, x.exponent, int_of_digits(digits, x.config.base),
                              len(digits), result_section, x.config, rounding)
    return value


def _check_section(result_section: int, config: ArithConfig) -> None:
    if not 0 <= result_section <= config.max_section:
        raise SectionRangeError(
            f"result_section {result_section} outside [0, {config.max_section}]")


def _check_same_config(x: GrossFloat, y: GrossFloat) -> None:
    if x.config != y.config:
        raise ValueError("operands belong to different arithmetic configurations")


# ---------------------------------------------------------------------------
# addition / subtraction
# ---------------------------------------------------------------------------

def add(x: GrossFloat, y: GrossFloat, result_section: int | None = None, *,
        profiler: OpCounter | None = None,
        trace: list[TraceRow] | None = None) -> tuple[GrossFloat, NormalizationReport]:
    """Signed addition, rounded after chunk ``result_section``."""
    return _add_signed(x, y, result_section, profiler=profiler, trace=trace, kind="add")


def sub(x: GrossFloat, y: GrossFloat, result_section: int | None = None, *,
        profiler: OpCounter | None = None,
        trace: list[TraceRow] | None = None) -> tuple[GrossFloat, NormalizationReport]:
    """Signed subtraction ``x - y``; the normalization shift in the report is
    the cancellation signal consumed by the precision controller."""
    return _add_signed(x, -y, result_section, profiler=profiler, trace=trace, kind="sub")


def _add_signed(x, y, result_section, *, profiler, trace, kind):
    _check_same_config(x, y)
    cfg = x.config
    rs = cfg.max_section if result_section is None else result_section
    _check_section(rs, cfg)
    if x.is_zero or y.is_zero:
        other = y if x.is_zero else x
        if profiler is not None:
            profiler.record(kind, len(x.chunks) - 1, len(y.chunks) - 1)
        return round_to_section(other, rs), NormalizationReport()
    if x.sign == y.sign:
        return _add_magnitude(x, y, x.sign, rs, profiler=profiler, trace=trace, kind=kind)
    # opposite signs: subtract the smaller magnitude from the larger
    from .number import _compare_magnitude
    mag = _compare_magnitude(x, y)
    if mag == 0:
        if profiler is not None:
            profiler.record(kind, len(x.chunks) - 1, len(y.chunks) - 1,
                            adds=min(len(x.chunks), len(y.chunks)))
        total = len(x.mantissa_digits())
        return (GrossFloat.zero(cfg),
                NormalizationReport(shift=total, exact_zero=True))
    big, small = (x, y) if mag > 0 else (y, x)
    return _sub_magnitude(big, small, big.sign, rs,
                          profiler=profiler, trace=trace, kind=kind)


def _aligned_digits(x: GrossFloat, y: GrossFloat):
    p = max(x.exponent, y.exponent)
    sx, sy = p - x.exponent, p - y.exponent
    dgx = [0] * sx + x.mantissa_digits()
    dgy = [0] * sy + y.mantissa_digits()
    length = max(len(dgx), len(dgy))
    dgx += [0] * (length - len(dgx))
    dgy += [0] * (length - len(dgy))
    return p, sx, sy, dgx, dgy


def _slot_range(shift_digits: int, n_digits: int, w: int) -> tuple[int, int]:
    return shift_digits // w, (shift_digits + n_digits - 1) // w


def _overlap_slots(x, y, sx, sy, w) -> int:
    ax0, ax1 = _slot_range(sx, len(x.chunks) * w, w)
    ay0, ay1 = _slot_range(sy, len(y.chunks) * w, w)
    return max(0, min(ax1, ay1) - max(ax0, ay0) + 1)


def _add_magnitude(x, y, sign, rs, *, profiler, trace, kind):
    cfg = x.config
    w = cfg.chunk_width
    p, sx, sy, dgx, dgy = _aligned_digits(x, y)
    if profiler is not None:
        profiler.record(kind, len(x.chunks) - 1, len(y.chunks) - 1,
                        adds=_overlap_slots(x, y, sx, sy, w))
    ax = digits_to_chunks(dgx, cfg, trim=False)
    ay = digits_to_chunks(dgy, cfg, trim=False)
    top = max(len(ax), len(ay))
    slots = tuple((ax[j] if j < len(ax) else 0) + (ay[j] if j < len(ay) else 0)
                  for j in range(top))
    raw = RawAccumulator(sign, p, slots, cfg)
    if trace is not None:
        _trace_add(trace, x, y, p, ax, ay, slots, raw, rs)
    return normalize(raw, rs)


def _sub_magnitude(big, small, sign, rs, *, profiler, trace, kind):
    cfg = big.config
    w = cfg.chunk_width
    p, sb, ss, dgb, dgs = _aligned_digits(big, small)
    if profiler is not None:
        profiler.record(kind, len(big.chunks) - 1, len(small.chunks) - 1,
                        adds=_overlap_slots(big, small, sb, ss, w))
    base = cfg.base
    mantissa = int_of_digits(dgb, base) - int_of_digits(dgs, base)
    nominal = len(dgb)
    if trace is not None:
        ab = digits_to_chunks(dgb, cfg, trim=False)
        asm = digits_to_chunks(dgs, cfg, trim=False)
        _trace_acquisition(trace, big, small)
        _trace_aligned(trace, "(b) alignment", p, ab, asm, cfg)
        diff = digits_to_chunks(digits_of_int(mantissa, base, nominal), cfg, trim=False)
        trace.append(TraceRow("(c) difference", sign, p,
                              {j: chunk_str(c, cfg) for j, c in enumerate(diff)}))
    result, report = _normalize_int(sign, p, mantissa, nominal, rs, cfg,
                                    nonzero_inputs=True)
    if trace is not None:
        _trace_normalized(trace, sign, p, mantissa, nominal, result, report, cfg, rs)
    return result, report


# ---------------------------------------------------------------------------
# multiplication
# ---------------------------------------------------------------------------

def mul(x: GrossFloat, y: GrossFloat, result_section: int | None = None, *,
        profiler: OpCounter | None = None,
        trace: list[TraceRow] | None = None) -> tuple[GrossFloat, NormalizationReport]:
    """Convolution product of the grossdigit sequences, rounded once.

    Every chunk pair is multiplied (full retention), so the profiler sees
    exactly ``(q+1)(p+1)`` products for operands of ``q+1`` and ``p+1``
    stored chunks, however short the requested result section is.
    """
    _check_same_config(x, y)
    cfg = x.config
    rs = cfg.max_section if result_section is None else result_section
    _check_section(rs, cfg)
    if x.is_zero or y.is_zero:
        if profiler is not None:
            profiler.record("mul", len(x.chunks) - 1, len(y.chunks) - 1)
        return GrossFloat.zero(cfg), NormalizationReport()
    qx, qy = len(x.chunks) - 1, len(y.chunks) - 1
    sign = x.sign * y.sign
    conv = [0] * (qx + qy + 1)
    seen = [False] * (qx + qy + 1)
    adds = 0
    watermark = max(qx, qy)
    for a, ca in enumerate(x.chunks):
        for b, cb in enumerate(y.chunks):
            j = a + b
            if seen[j] and j <= watermark:
                adds += 1
            seen[j] = True
            conv[j] += ca * cb
    if profiler is not None:
        profiler.record("mul", qx, qy, mults=(qx + 1) * (qy + 1), adds=adds)
    raw = RawAccumulator(sign, x.exponent + y.exponent, tuple(conv), cfg,
                         extra_frac=cfg.t)
    if trace is not None:
        _trace_mul(trace, x, y, conv, raw, rs)
    return normalize(raw, rs)


# ---------------------------------------------------------------------------
# reciprocal and division
# ---------------------------------------------------------------------------

def newton_reciprocal_iterations(digit_count: int, base: int) -> int:
    """Iterations needed for ``digit_count`` accurate digits from the seed.

    The seed's relative error is at most 1/17 and squares at every step, so
    ``k`` steps leave at most ``(1/17)**(2**k)``.
    """
    bits = digit_count * math.log2(base)
    need = (bits + 1) / math.log2(17)
    if need <= 1:
        return 0
    return max(0, math.ceil(math.log2(need)))


def reciprocal(y: GrossFloat, target_section: int | None = None, *,
               profiler: OpCounter | None = None,
               trace: list[GrossFloat] | None = None) -> GrossFloat:
    """Newton-Raphson reciprocal ``1/y`` accurate to ``target_section``.

    ``y`` is scaled by a power of the base so the working operand lies in
    ``[1/base, 1)``; the minmax linear seed ``48/17 - (32/17) * yhat`` then
    guarantees quadratic convergence from the first step.  A ``trace`` list
    receives the scaled iterates.
    """
    cfg = y.config
    rs = cfg.max_section if target_section is None else target_section
    _check_section(rs, cfg)
    if y.is_zero:
        raise DivisionByZeroError("reciprocal of zero")
    scale = -(y.exponent + 1)              # yhat = base**scale * |y| in [1/base, 1)
    yhat = GrossFloat(1, -1, y.chunks, cfg)
    c48_17 = from_fraction(Fraction(48, 17), cfg)
    c32_17 = from_fraction(Fraction(32, 17), cfg)
    z = sub(c48_17, mul(c32_17, yhat, rs, profiler=profiler)[0], rs,
            profiler=profiler)[0]
    if trace is not None:
        trace.append(z)
    one = from_fraction(1, cfg)
    for _ in range(newton_reciprocal_iterations((rs + 1) * cfg.chunk_width, cfg.base)):
        residual = sub(one, mul(yhat, z, rs, profiler=profiler)[0], rs,
                       profiler=profiler)[0]
        z = add(z, mul(z, residual, rs, profiler=profiler)[0], rs,
                profiler=profiler)[0]
        if trace is not None:
            trace.append(z)
    exponent = z.exponent + scale
    if exponent > cfg.exponent_max:
        raise ExponentOverflowError("reciprocal overflows the exponent range")
    if exponent < cfg.exponent_min:
        return GrossFloat.zero(cfg)
    return GrossFloat(y.sign, exponent, z.chunks, cfg)


def div(x: GrossFloat, y: GrossFloat, result_section: int | None = None, *,
        profiler: OpCounter | None = None) -> GrossFloat:
    """Quotient via multiplication by the reciprocal.

    The reciprocal is computed one section beyond the requested result so the
    final product is the only rounding that matters.
    """
    _check_same_config(x, y)
    cfg = x.config
    rs = cfg.max_section if result_section is None else result_section
    _check_section(rs, cfg)
    if y.is_zero:
        raise DivisionByZeroError("division by zero")
    if x.is_zero:
        return GrossFloat.zero(cfg)
    guard = min(rs + 1, cfg.max_section)
    recip = reciprocal(y, guard, profiler=profiler)
    return mul(x, recip, rs, profiler=profiler)[0]


# ---------------------------------------------------------------------------
# pipeline trace construction
# ---------------------------------------------------------------------------

def _trace_acquisition(trace, x, y):
    cfg = x.config
    trace.append(TraceRow("(a) data acquisition", x.sign, x.exponent,
                          {j: chunk_str(c, cfg) for j, c in enumerate(x.chunks)}))
    trace.append(TraceRow("", y.sign, y.exponent,
                          {j: chunk_str(c, cfg) for j, c in enumerate(y.chunks)}))


def _trim_trailing(cells: list[int]) -> list[int]:
    out = list(cells)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _trace_aligned(trace, label, p, ax, ay, cfg):
    trace.append(TraceRow(label, 1, p,
                          {j: chunk_str(c, cfg) for j, c in enumerate(_trim_trailing(ax))}))
    trace.append(TraceRow("", 1, p,
                          {j: chunk_str(c, cfg) for j, c in enumerate(_trim_trailing(ay))}))


def _trace_add(trace, x, y, p, ax, ay, slots, raw, rs):
    cfg = x.config
    _trace_acquisition(trace, x, y)
    _trace_aligned(trace, "(b) alignment", p, ax, ay, cfg)
    trace.append(TraceRow("(c) sum", raw.sign, p,
                          {j: wide_str(s, cfg.t, cfg.base) for j, s in enumerate(slots)}))
    # one redistribution round: split each slot into carry + in-range parts;
    # the leading slot stays whole (normalization absorbs its overflow)
    cap = cfg.chunk_cap
    lines: list[dict[int, str]] = []
    current: dict[int, str] | None = None
    for j, s in enumerate(slots):
        carry, rem = divmod(s, cap)
        if carry and j > 0:
            line = {j - 1: chunk_str(carry, cfg), j: chunk_str(rem, cfg)}
            lines.append(line)
            current = line
        else:
            cell = wide_str(s, cfg.t, cfg.base) if s >= cap else chunk_str(s, cfg)
            if current is not None and j not in current:
                current[j] = cell
            else:
                current = {j: cell}
                lines.append(current)
    label = "(d) redistribution"
    for line in lines:
        trace.append(TraceRow(label, raw.sign, p, line))
        label = ""
    post = []
    for j, s in enumerate(slots):
        kept = s if j == 0 else s % cap
        if j + 1 < len(slots):
            kept += slots[j + 1] // cap
        post.append(kept)
    trace.append(TraceRow("(e) sum", raw.sign, p,
                          {j: wide_str(s, cfg.t, cfg.base) for j, s in enumerate(post)}))
    mantissa, nominal = raw.to_mantissa()
    result, report = _normalize_int(raw.sign, p, mantissa, nominal, rs, cfg)
    _trace_normalized(trace, raw.sign, p, mantissa, nominal, result, report, cfg, rs,
                      normalization_label="(f) normalization",
                      rounding_label="(g) rounding")


def _trace_normalized(trace, sign, anchor, mantissa, nominal, result, report, cfg, rs,
                      normalization_label="(d) normalization",
                      rounding_label="(e) rounding"):
    base = cfg.base
    if mantissa == 0:
        trace.append(TraceRow(normalization_label, sign, None, {}))
        return
    length = _digit_len(mantissa, base)
    exponent = anchor - (nominal - length)
    digits = digits_of_int(mantissa, base, length)
    chunks = digits_to_chunks(digits, cfg)
    trace.append(TraceRow(normalization_label, sign, exponent,
                          {j: chunk_str(c, cfg) for j, c in enumerate(chunks)}))
    trace.append(TraceRow(rounding_label, result.sign, result.exponent,
                          {j: chunk_str(c, cfg) for j, c in enumerate(result.chunks)}))


def _trace_mul(trace, x, y, conv, raw, rs):
    cfg = x.config
    w = cfg.chunk_width
    base = cfg.base
    frac = 2 * cfg.t
    _trace_acquisition(trace, x, y)
    trace.append(TraceRow("(b) convolution product", raw.sign, x.exponent + y.exponent,
                          {j: wide_str(c, frac, base) for j, c in enumerate(conv)}))
    # per-power redistribution: slice each convolution term on chunk boundaries
    label = "(c) redistribution"
    for j, c in enumerate(conv):
        if c == 0 and len(conv) > 1:
            cells = {j: chunk_str(0, cfg)}
        else:
            cells = {}
            ds = digits_of_int(c, base, frac + 1)
            # digit i (msd first) sits at global position j*w + frac - (len-1-i)
            for i, d in enumerate(ds):
                pos = j * w + frac - (len(ds) - 1 - i)
                col, off = divmod(pos, w)
                if col not in cells:
                    cells[col] = [0] * w
                cells[col][off] = d
            cells = {col: chunk_str(int_of_digits(ds_, base), cfg)
                     for col, ds_ in cells.items()}
        trace.append(TraceRow(label, raw.sign, x.exponent + y.exponent, cells))
        label = ""
    # fully carried column sums; the leading digit of a full-length mantissa
    # sits at the anchor position 0, one digit higher on carry-out
    mantissa, nominal = raw.to_mantissa()
    length = _digit_len(mantissa, base)
    ds = digits_of_int(mantissa, base, length)
    cells: dict[int, list[int]] = {}
    lead_pos = nominal - length
    for i, d in enumerate(ds):
        pos = lead_pos + i
        col = pos // w
        off = pos - col * w
        if col not in cells:
            cells[col] = [0] * w
        cells[col][off] = d
    trace.append(TraceRow("(d) sum with redistribution", raw.sign,
                          x.exponent + y.exponent,
                          {col: chunk_str(int_of_digits(dd, base), cfg)
                           for col, dd in sorted(cells.items())}))
    result, report = _normalize_int(raw.sign, raw.exponent, mantissa, nominal, rs, cfg)
    _trace_normalized(trace, raw.sign, raw.exponent, mantissa, nominal, result,
                      report, cfg, rs, normalization_label="(e) normalization",
                      rounding_label="(f) rounding")
