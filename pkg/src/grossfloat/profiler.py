"""Grossdigit-level operation accounting.

The cost unit is one chunk-by-chunk product (a double-width multiplication)
or one chunk addition/subtraction performed while combining aligned operands.
Carry propagation and redistribution are bookkeeping on the accumulator and
are not charged against these counters, which keeps the measured numbers
equal to the closed-form predictions below.

Counters attach to an explicit context passed into every operation; passing
``None`` disables accounting.  One counter belongs to one logical task;
counters from parallel sweeps merge by summation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["OpCounter", "OpEvent", "predict_mul_cost", "predict_add_cost"]


@dataclass(frozen=True)
class OpEvent:
    kind: str
    q: int      # section index of the first operand (-1 for an exact zero)
    p: int      # section index of the second operand
    mults: int
    adds: int


@dataclass
class OpCounter:
    """Tally of grossdigit multiplications and additions/subtractions."""

    grossdigit_mults: int = 0
    grossdigit_adds: int = 0
    events: list[OpEvent] = field(default_factory=list)

    def record(self, kind: str, q: int, p: int, mults: int = 0, adds: int = 0) -> None:
        if mults < 0 or adds < 0:
            raise ValueError("operation counts never decrease")
        self.events.append(OpEvent(kind, q, p, mults, adds))
        self.grossdigit_mults += mults
        self.grossdigit_adds += adds

    def totals(self) -> tuple[int, int]:
        return self.grossdigit_mults, self.grossdigit_adds

    def merge(self, other: "OpCounter") -> "OpCounter":
        merged = OpCounter(
            self.grossdigit_mults + other.grossdigit_mults,
            self.grossdigit_adds + other.grossdigit_adds,
            self.events + other.events,
        )
        return merged

    def dump_csv(self) -> str:
        """Per-event breakdown as CSV text (kind, q, p, mults, adds)."""
        lines = ["kind,q,p,mults,adds"]
        for ev in self.events:
            lines.append(f"{ev.kind},{ev.q},{ev.p},{ev.mults},{ev.adds}")
        lines.append(f"total,,,{self.grossdigit_mults},{self.grossdigit_adds}")
        return "\n".join(lines) + "\n"


def predict_mul_cost(q: int, p: int) -> tuple[int, int]:
    """Grossdigit cost of multiplying sections q and p with full retention.

    ``(q+1)(p+1)`` products; accumulating the per-power sums inside the
    result's stored powers takes ``qp - q(q-1)/2`` additions (for q <= p).
    """
    if q > p:
        q, p = p, q
    if q < 0:
        return (0, 0)
    return ((q + 1) * (p + 1), q * p - q * (q - 1) // 2)


def predict_add_cost(q: int, p: int) -> int:
    """Grossdigit additions for adding sections q and p: min(q, p) + 1."""
    if q > p:
        q, p = p, q
    if q < 0:
        return 0
    return q + 1
