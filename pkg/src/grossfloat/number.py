"""The GrossFloat value type: storage, conversion, sectioning, comparison.

A nonzero value is ``sign * base**exponent * sum_j c_j * unit**(-j)`` where
each grossdigit ``c_j`` is held as an unsigned integer in ``[0, chunk_cap)``
with an implied radix point after its first digit (``c_j = int / base**t``).
The representation itself is exact; every arithmetic operation rounds once.

Values are immutable; all operations are pure functions of the operands, the
configuration, and an explicit profiler context, so concurrent use is safe as
long as each thread owns its own profiler.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .config import ArithConfig, Rounding
from .errors import ExponentOverflowError, FormatError, SectionRangeError

__all__ = [
    "GrossFloat",
    "compare",
    "section",
    "from_binary_string",
    "from_decimal_string",
    "from_fraction",
    "from_int",
    "format_literal",
    "parse_literal",
    "format_table_row",
    "to_decimal_string",
]


# ---------------------------------------------------------------------------
# digit-list helpers (msd first, plain ints in [0, base))
# ---------------------------------------------------------------------------

def digits_of_int(n: int, base: int, width: int = 0) -> list[int]:
    """Base-``base`` digits of ``n >= 0``, left-padded with zeros to ``width``."""
    if n < 0:
        raise ValueError("digits_of_int expects a non-negative integer")
    out: list[int] = []
    while n:
        n, r = divmod(n, base)
        out.append(r)
    while len(out) < max(width, 1):
        out.append(0)
    out.reverse()
    return out


def int_of_digits(digits, base: int) -> int:
    n = 0
    for d in digits:
        n = n * base + d
    return n


def chunks_to_digits(chunks, config: ArithConfig) -> list[int]:
    w = config.chunk_width
    out: list[int] = []
    for c in chunks:
        out.extend(digits_of_int(c, config.base, w))
    return out


def digits_to_chunks(digits, config: ArithConfig, *, trim: bool = True) -> tuple[int, ...]:
    w = config.chunk_width
    padded = list(digits)
    if len(padded) % w:
        padded.extend([0] * (w - len(padded) % w))
    chunks = [int_of_digits(padded[i:i + w], config.base) for i in range(0, len(padded), w)]
    if trim:
        while chunks and chunks[-1] == 0 and len(chunks) > 1:
            chunks.pop()
        if chunks == [0]:
            chunks = []
    return tuple(chunks)


def chunk_str(chunk: int, config: ArithConfig) -> str:
    """Render one grossdigit as ``d.ddd`` (width t+1, point after first digit)."""
    ds = digits_of_int(chunk, config.base, config.chunk_width)
    text = "".join(str(d) for d in ds)
    if config.chunk_width == 1:
        return text
    return text[0] + "." + text[1:]


def wide_str(value: int, frac_digits: int, base: int) -> str:
    """Render an unnormalized accumulator cell with ``frac_digits`` after the point."""
    ds = digits_of_int(value, base, frac_digits + 1)
    text = "".join(str(d) for d in ds)
    return text[:-frac_digits] + "." + text[-frac_digits:] if frac_digits else text


# ---------------------------------------------------------------------------
# the value type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrossFloat:
    """An immutable chunked floating-point number.

    ``chunks`` may carry trailing zero grossdigits: sectioning and the
    fixed-width evaluation modes rely on a value's *stored* width, so padding
    is meaningful and preserved.  Zero is canonical: no chunks, sign ``+1``,
    exponent ``0``.
    """

    sign: int
    exponent: int
    chunks: tuple[int, ...]
    config: ArithConfig = field(repr=False)

    def __post_init__(self):
        cfg = self.config
        if self.sign not in (1, -1):
            raise FormatError(f"sign must be +1 or -1, got {self.sign}")
        if not self.chunks:
            if self.sign != 1 or self.exponent != 0:
                raise FormatError("zero must have sign +1 and exponent 0")
            return
        if len(self.chunks) > cfg.max_section + 1:
            raise FormatError(
                f"{len(self.chunks)} chunks exceed the {cfg.max_section + 1} allowed")
        cap = cfg.chunk_cap
        for c in self.chunks:
            if not 0 <= c < cap:
                raise FormatError(f"chunk {c} outside [0, {cap})")
        if self.chunks[0] < cap // cfg.base:
            raise FormatError("leading digit of chunk 0 must be nonzero")
        if not cfg.exponent_min <= self.exponent <= cfg.exponent_max:
            raise ExponentOverflowError(
                f"exponent {self.exponent} outside "
                f"[{cfg.exponent_min}, {cfg.exponent_max}]")

    # -- basic predicates ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.chunks

    @classmethod
    def zero(cls, config: ArithConfig) -> "GrossFloat":
        return cls(1, 0, (), config)

    # -- exact value ----------------------------------------------------------

    def to_fraction(self) -> Fraction:
        """Exact rational value of the stored representation."""
        if self.is_zero:
            return Fraction(0)
        cfg = self.config
        w = cfg.chunk_width
        k = len(self.chunks) - 1
        mantissa = 0
        for c in self.chunks:
            mantissa = mantissa * cfg.unit + c
        num = self.sign * mantissa
        scale = cfg.t + w * k - self.exponent
        if scale >= 0:
            return Fraction(num, cfg.base ** scale)
        return Fraction(num * cfg.base ** (-scale))

    def mantissa_digits(self) -> list[int]:
        return chunks_to_digits(self.chunks, self.config)

    # -- housekeeping ---------------------------------------------------------

    def trimmed(self) -> "GrossFloat":
        """Copy with trailing zero chunks removed."""
        if self.is_zero:
            return self
        chunks = list(self.chunks)
        while chunks and chunks[-1] == 0 and len(chunks) > 1:
            chunks.pop()
        if len(chunks) == len(self.chunks):
            return self
        return GrossFloat(self.sign, self.exponent, tuple(chunks), self.config)

    def padded(self, section_index: int) -> "GrossFloat":
        """Copy padded with zero chunks out to ``section_index`` (inclusive).

        Zero stays zero: padding encodes a stored width, which an exact zero
        does not have.
        """
        if section_index > self.config.max_section:
            raise SectionRangeError(
                f"section {section_index} > max_section {self.config.max_section}")
        if self.is_zero or len(self.chunks) >= section_index + 1:
            return self
        chunks = self.chunks + (0,) * (section_index + 1 - len(self.chunks))
        return GrossFloat(self.sign, self.exponent, chunks, self.config)

    def __neg__(self) -> "GrossFloat":
        if self.is_zero:
            return self
        return GrossFloat(-self.sign, self.exponent, self.chunks, self.config)

    def __abs__(self) -> "GrossFloat":
        if self.sign < 0:
            return -self
        return self

    # -- comparison (by exact value) -------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrossFloat):
            return NotImplemented
        return compare(self, other) == 0

    def __lt__(self, other) -> bool:
        return compare(self, other) < 0

    def __le__(self, other) -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other) -> bool:
        return compare(self, other) > 0

    def __ge__(self, other) -> bool:
        return compare(self, other) >= 0

    def __hash__(self):
        return hash(self.to_fraction())

    # -- arithmetic sugar (full-format rounding, no profiling) -----------------

    def __add__(self, other):
        from . import arith
        return arith.add(self, _coerce(other, self.config))[0]

    def __sub__(self, other):
        from . import arith
        return arith.sub(self, _coerce(other, self.config))[0]

    def __mul__(self, other):
        from . import arith
        return arith.mul(self, _coerce(other, self.config))[0]

    def __truediv__(self, other):
        from . import arith
        return arith.div(self, _coerce(other, self.config))

    def __repr__(self):
        return f"GrossFloat({format_literal(self)!r})"

    def __str__(self):
        return format_literal(self)


def _coerce(value, config: ArithConfig) -> GrossFloat:
    if isinstance(value, GrossFloat):
        return value
    if isinstance(value, int):
        return from_int(value, config)
    if isinstance(value, Fraction):
        return from_fraction(value, config)
    raise TypeError(f"cannot combine GrossFloat with {type(value).__name__}")


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _round_mantissa(mantissa: int, drop: int, base: int, rounding: Rounding,
                    odd_sticky: bool = False) -> tuple[int, bool]:
    """Drop ``drop`` digits from ``mantissa``, rounding per mode.

    Returns (rounded mantissa, inexact flag).  ``odd_sticky`` marks extra
    nonzero weight below the dropped digits (breaks ties upward).
    """
    if drop <= 0:
        return mantissa, odd_sticky
    scale = base ** drop
    kept, rem = divmod(mantissa, scale)
    inexact = rem != 0 or odd_sticky
    if rounding is Rounding.TRUNCATE or not inexact:
        return kept, inexact
    double = 2 * rem
    if double > scale or (double == scale and odd_sticky):
        kept += 1
    elif double == scale and kept % 2 == 1:
        kept += 1
    return kept, inexact


def _build(sign: int, exponent: int, digits: list[int], config: ArithConfig,
           rounding: Rounding | None = None) -> GrossFloat:
    """Assemble a normalized value from msd-first digits at ``exponent``.

    ``digits[0]`` must be nonzero (or the list entirely zero).  Rounds after
    digit ``total_digits - 1`` per config.
    """
    if not any(digits):
        return GrossFloat.zero(config)
    mode = rounding if rounding is not None else config.rounding
    keep = config.total_digits
    mantissa = int_of_digits(digits, config.base)
    mantissa, _ = _round_mantissa(mantissa, len(digits) - keep, config.base, mode)
    if mantissa == 0:
        return GrossFloat.zero(config)
    width = min(len(digits), keep)
    if mantissa >= config.base ** width:   # carry out of the top digit
        mantissa //= config.base
        exponent += 1
    if exponent > config.exponent_max:
        raise ExponentOverflowError(f"exponent {exponent} overflows the format")
    if exponent < config.exponent_min:
        return GrossFloat.zero(config)     # flush to zero
    out_digits = digits_of_int(mantissa, config.base, width)
    return GrossFloat(sign, exponent, digits_to_chunks(out_digits, config), config)


def from_binary_string(sign: int, exponent: int, mantissa: str,
                       config: ArithConfig) -> GrossFloat:
    """Build a value from a base-``config.base`` digit string.

    The radix point, if present, must follow the first digit; it is implied
    otherwise.  Digits beyond the format's last position are truncated or
    rounded to nearest even per the configuration.
    """
    text = mantissa.strip()
    if text.count(".") > 1:
        raise FormatError(f"malformed mantissa {mantissa!r}")
    if "." in text and text.index(".") != 1:
        raise FormatError("radix point must follow the leading digit")
    text = text.replace(".", "")
    if not text:
        raise FormatError("empty mantissa")
    try:
        digits = [int(ch) for ch in text]
    except ValueError as exc:
        raise FormatError(f"invalid digit in {mantissa!r}") from exc
    if any(d >= config.base for d in digits):
        raise FormatError(f"digit out of range for base {config.base}")
    if not any(digits):
        return GrossFloat.zero(config)
    if digits[0] == 0:
        raise FormatError("leading digit must be nonzero for a nonzero value")
    return _build(1 if sign >= 0 else -1, exponent, digits, config)


def from_fraction(value: Fraction | int, config: ArithConfig,
                  rounding: Rounding | None = None) -> GrossFloat:
    """Round an exact rational into the format (the single rounding step)."""
    value = Fraction(value)
    if value == 0:
        return GrossFloat.zero(config)
    sign = 1 if value > 0 else -1
    num, den = abs(value).numerator, abs(value).denominator
    base = config.base
    # exponent e with base**e <= |value| < base**(e+1)
    e = 0
    while num < den:
        num *= base
        e -= 1
    while num >= den * base:
        den *= base
        e += 1
    keep = config.total_digits
    scaled_num = num * base ** (keep - 1)
    mantissa, rem = divmod(scaled_num, den)
    mode = rounding if rounding is not None else config.rounding
    if rem and mode is Rounding.NEAREST_EVEN:
        double = 2 * rem
        if double > den or (double == den and mantissa % 2 == 1):
            mantissa += 1
    if mantissa >= base ** keep:
        mantissa //= base
        e += 1
    if e > config.exponent_max:
        raise ExponentOverflowError(f"exponent {e} overflows the format")
    if e < config.exponent_min:
        return GrossFloat.zero(config)
    digits = digits_of_int(mantissa, base, keep)
    return GrossFloat(sign, e, digits_to_chunks(digits, config), config)


def from_int(value: int, config: ArithConfig) -> GrossFloat:
    return from_fraction(Fraction(value), config)


_DECIMAL_RE = re.compile(
    r"^(?P<sign>[+-])?(?P<int>\d+)?(?:\.(?P<frac>\d*))?(?:[eE](?P<exp>[+-]?\d+))?$")


def from_decimal_string(text: str, config: ArithConfig) -> GrossFloat:
    """Parse a decimal literal through exact rational arithmetic.

    Only the final conversion into the format rounds.
    """
    m = _DECIMAL_RE.match(text.strip())
    if not m or (m.group("int") is None and not m.group("frac")):
        raise FormatError(f"unparseable decimal {text!r}")
    int_part = m.group("int") or "0"
    frac_part = m.group("frac") or ""
    exp = int(m.group("exp") or 0)
    num = int(int_part + frac_part) if (int_part + frac_part) else 0
    value = Fraction(num, 10 ** len(frac_part)) * Fraction(10) ** exp
    if m.group("sign") == "-":
        value = -value
    return from_fraction(value, config)


# ---------------------------------------------------------------------------
# sectioning and comparison
# ---------------------------------------------------------------------------

def section(x: GrossFloat, q: int) -> GrossFloat:
    """Truncate ``x`` to its chunks of index <= q (no rounding)."""
    if not 0 <= q <= x.config.max_section:
        raise SectionRangeError(
            f"section index {q} outside [0, {x.config.max_section}]")
    if x.is_zero or len(x.chunks) <= q + 1:
        return x
    return GrossFloat(x.sign, x.exponent, x.chunks[:q + 1], x.config)


def compare(x: GrossFloat, y: GrossFloat) -> int:
    """Total order consistent with exact values: -1, 0, or +1."""
    if x.is_zero and y.is_zero:
        return 0
    if x.is_zero:
        return -y.sign
    if y.is_zero:
        return x.sign
    if x.sign != y.sign:
        return 1 if x.sign > y.sign else -1
    mag = _compare_magnitude(x, y)
    return mag * x.sign


def _compare_magnitude(x: GrossFloat, y: GrossFloat) -> int:
    if x.exponent != y.exponent:
        return 1 if x.exponent > y.exponent else -1
    dx = x.mantissa_digits()
    dy = y.mantissa_digits()
    width = max(len(dx), len(dy))
    dx += [0] * (width - len(dx))
    dy += [0] * (width - len(dy))
    if dx == dy:
        return 0
    return 1 if dx > dy else -1


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------

_LITERAL_RE = re.compile(
    r"^(?P<sign>[+-])(?P<base>\d+)\^(?P<exp>-?\d+)\s*:\s*(?P<chunks>[\d.|]+)$")


def format_literal(x: GrossFloat) -> str:
    """Round-trippable literal, e.g. ``+2^0 : 1.110|1.010|1.110``."""
    if x.is_zero:
        return "0"
    sign = "+" if x.sign > 0 else "-"
    body = "|".join(chunk_str(c, x.config) for c in x.chunks)
    return f"{sign}{x.config.base}^{x.exponent} : {body}"


def parse_literal(text: str, config: ArithConfig) -> GrossFloat:
    """Parse the literal format emitted by :func:`format_literal`."""
    stripped = text.strip()
    if stripped == "0":
        return GrossFloat.zero(config)
    m = _LITERAL_RE.match(stripped)
    if not m:
        raise FormatError(f"malformed grossfloat literal {text!r}")
    if int(m.group("base")) != config.base:
        raise FormatError(
            f"literal base {m.group('base')} does not match config base {config.base}")
    sign = 1 if m.group("sign") == "+" else -1
    exponent = int(m.group("exp"))
    chunks = []
    for part in m.group("chunks").split("|"):
        digits_text = part.replace(".", "")
        if len(digits_text) != config.chunk_width:
            raise FormatError(f"chunk {part!r} is not {config.chunk_width} digits wide")
        try:
            ds = [int(ch) for ch in digits_text]
        except ValueError as exc:
            raise FormatError(f"invalid digit in chunk {part!r}") from exc
        if any(d >= config.base for d in ds):
            raise FormatError(f"digit out of range in chunk {part!r}")
        chunks.append(int_of_digits(ds, config.base))
    return GrossFloat(sign, exponent, tuple(chunks), config)


def format_table_row(x: GrossFloat) -> str:
    """One table-style row: signed exponent column, then one cell per chunk."""
    if x.is_zero:
        return "0"
    sign = "-" if x.sign < 0 else ""
    cells = " | ".join(chunk_str(c, x.config) for c in x.chunks)
    return f"{sign}{x.config.base}^{x.exponent} | {cells}"


def to_decimal_string(x: GrossFloat, digits: int = 17) -> str:
    """Decimal rendering with ``digits`` significant digits (exact conversion)."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if x.is_zero:
        return "0"
    value = abs(x.to_fraction())
    e10 = 0
    while value < 1:
        value *= 10
        e10 -= 1
    while value >= 10:
        value /= 10
        e10 += 1
    scaled = value * 10 ** (digits - 1)
    mantissa, rem = divmod(scaled.numerator, scaled.denominator)
    double = 2 * rem
    if double > scaled.denominator or (double == scaled.denominator and mantissa % 2):
        mantissa += 1
    if mantissa >= 10 ** digits:
        mantissa //= 10
        e10 += 1
    text = str(mantissa).rstrip("0") or "0"
    sign = "-" if x.sign < 0 else ""
    if -4 <= e10 < digits:
        if e10 >= len(text) - 1:
            body = text + "0" * (e10 - len(text) + 1)
        elif e10 >= 0:
            body = text[:e10 + 1] + "." + text[e10 + 1:]
        else:
            body = "0." + "0" * (-e10 - 1) + text
        return sign + body
    mant = text[0] + ("." + text[1:] if len(text) > 1 else "")
    return f"{sign}{mant}e{e10:+d}"
