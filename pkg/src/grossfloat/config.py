"""Format parameters for chunked floating-point numbers.

A format is described by a base ``beta``, the chunk width ``t+1`` (digits per
grossdigit), and the maximum section index ``T``.  A number stores up to
``T+1`` chunks, i.e. ``(T+1)*(t+1)`` significant digits, the chunk of index
``j`` weighing ``unit**(-j)`` where ``unit = beta**(t+1)`` is the machine
constant whose negative powers act as precision "lenses".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import FormatError


class Rounding(enum.Enum):
    TRUNCATE = "truncate"
    NEAREST_EVEN = "nearest_even"

    @classmethod
    def parse(cls, text: str) -> "Rounding":
        key = text.strip().lower().replace("-", "_")
        for member in cls:
            if member.value == key or member.name.lower() == key:
                return member
        raise FormatError(f"unknown rounding mode: {text!r}")


@dataclass(frozen=True)
class ArithConfig:
    """Global format parameters shared by every value of one arithmetic."""

    base: int = 2
    chunk_width: int = 53          # t+1 digits per chunk
    max_section: int = 4           # T, highest stored negative power
    rounding: Rounding = Rounding.NEAREST_EVEN
    exponent_min: int = -16384
    exponent_max: int = 16383

    def __post_init__(self):
        if self.base < 2:
            raise FormatError(f"base must be >= 2, got {self.base}")
        if self.chunk_width < 1:
            raise FormatError(f"chunk_width must be >= 1, got {self.chunk_width}")
        if self.max_section < 0:
            raise FormatError(f"max_section must be >= 0, got {self.max_section}")
        if self.exponent_min >= self.exponent_max:
            raise FormatError("exponent_min must be below exponent_max")

    @property
    def t(self) -> int:
        """Fractional digits per chunk (chunk values live in [0, base))."""
        return self.chunk_width - 1

    @property
    def total_digits(self) -> int:
        """Significant digits of the full format, (T+1)*(t+1)."""
        return (self.max_section + 1) * self.chunk_width

    @property
    def chunk_cap(self) -> int:
        """Exclusive upper bound of a chunk's stored integer, base**(t+1)."""
        return self.base ** self.chunk_width

    @property
    def unit(self) -> int:
        """The machine constant base**(t+1); chunk j weighs unit**(-j)."""
        return self.base ** self.chunk_width
