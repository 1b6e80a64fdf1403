"""Accuracy-loss detection and automatic precision escalation.

The controller works from two signals: the normalization shift reported by a
subtraction (leading digits lost to cancellation) and the running estimate of
a result's relative error.  A partial result computed from sections of index
``q`` starts with relative error about ``base**(-(q+1)(t+1))``; every digit
of cancellation amplifies it by one power of the base.  A result is accepted
when that a-priori bound meets the caller's target, otherwise the operands
feeding the offending operation are promoted one section and the evaluation
is repeated, reusing the chunk work already done.

``PrecisionState`` belongs to a single computation; nothing here shares
mutable state between tasks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import arith
from .config import ArithConfig
from .errors import AccuracyExhaustedError
from .number import GrossFloat, section
from .profiler import OpCounter

__all__ = [
    "PrecisionState",
    "CancellationReport",
    "SumStep",
    "relative_err",
    "should_escalate",
    "cancellation_report",
    "adaptive_sum",
]


@dataclass
class PrecisionState:
    """Escalation controller state: current level, safety factor, error history.

    ``prec`` counts active chunks (level q+1 for section index q); ``safety``
    is the factor ``s <= 1`` in the stagnation test.
    """

    prec: int = 1
    safety: float = 1.0
    max_prec: int | None = None
    err_history: list[float] = field(default_factory=list)

    def __post_init__(self):
        if self.prec < 1:
            raise ValueError("prec starts at 1")
        if not 0 < self.safety <= 1:
            raise ValueError("safety factor must lie in (0, 1]")

    def observe(self, err: float) -> None:
        self.err_history.append(err)


@dataclass(frozen=True)
class CancellationReport:
    """Shift-based cancellation verdict for one subtraction."""

    shift_digits: int
    threshold_digits: int
    triggered: bool


def default_cancel_threshold(config: ArithConfig) -> int:
    """Digits of shift that count as cancellation: half a chunk."""
    return (config.chunk_width + 1) // 2


def cancellation_report(report: arith.NormalizationReport, config: ArithConfig,
                        threshold_digits: int | None = None) -> CancellationReport:
    thr = default_cancel_threshold(config) if threshold_digits is None else threshold_digits
    shift = report.shift
    triggered = report.exact_zero or shift >= thr
    return CancellationReport(shift_digits=shift, threshold_digits=thr,
                              triggered=triggered)


def relative_err(x_k: GrossFloat, x_km1: GrossFloat) -> float:
    """``|x_k - x_{k-1}| / |x_k|`` evaluated exactly, returned as a float."""
    if x_k.is_zero:
        raise ZeroDivisionError("relative error undefined at x_k = 0")
    num = abs(x_k.to_fraction() - x_km1.to_fraction())
    den = abs(x_k.to_fraction())
    ratio = num / den
    try:
        return float(ratio)
    except OverflowError:
        return math.inf


def should_escalate(state: PrecisionState, err_k: float) -> bool:
    """True when the error stopped improving and another section is available.

    The caller raises ``state.prec`` by one on a True verdict; levels are
    capped so ``prec`` never exceeds the count of stored sections.
    """
    if not state.err_history:
        return False
    if state.max_prec is not None and state.prec > state.max_prec - 1:
        return False
    return err_k >= state.safety * state.err_history[-1]


@dataclass(frozen=True)
class SumStep:
    """One accept/escalate decision, streamable to the CLI's table renderer."""

    step: int
    term_index: int
    sections: tuple[int, ...]
    result: GrossFloat
    bound: float
    shift_digits: int
    action: str                 # "accept", "improve", or "final"


def adaptive_sum(terms: Sequence[GrossFloat], target_rel_accuracy,
                 *, profiler: OpCounter | None = None,
                 trace_hook: Callable[[SumStep], None] | None = None,
                 threshold_digits: int | None = None) -> tuple[GrossFloat, int]:
    """Left-to-right signed sum at the lowest precision meeting the target.

    Terms carry their own signs and are assumed stored at full precision.
    Every pairwise operation is checked against the a-priori error bound;
    when a result fails, the operands feeding that operation are promoted one
    section each and the chain is re-evaluated.  Chunk work from earlier
    passes is reused, so each re-evaluation of an operation costs one new
    grossdigit addition.

    Returns the accepted result and the final precision level (sections + 1).
    """
    terms = [t for t in terms]
    if not terms:
        raise ValueError("adaptive_sum needs at least one term")
    cfg = terms[0].config
    w = cfg.chunk_width
    top = cfg.max_section
    target = float(target_rel_accuracy)
    if target <= 0:
        raise ValueError("target accuracy must be positive")
    sections = [0] * len(terms)
    if len(terms) == 1:
        only = section(terms[0], 0)
        if trace_hook is not None:
            trace_hook(SumStep(1, 0, (0,), only, float(cfg.base) ** (-w), 0, "final"))
        return only, 1

    # cache per operation position: sections used -> (result, report, cost paid)
    cache: dict[int, dict[tuple[int, int], tuple[GrossFloat, arith.NormalizationReport]]] = {}
    paid: dict[int, int] = {}
    step_no = 0

    def charge(pos: int, qa: int, qb: int) -> None:
        cost = min(qa, qb) + 1
        new = cost - paid.get(pos, 0)
        if new > 0:
            paid[pos] = cost
            if profiler is not None:
                profiler.record("adaptive", qa, qb, adds=new)

    while True:
        restart = False
        partial = section(terms[0], sections[0])
        partial_err_digits = -(sections[0] + 1) * w
        for pos in range(1, len(terms)):
            qa = min(sections[:pos])          # effective section of the partial
            qb = sections[pos]
            key = (qa, qb)
            hit = cache.setdefault(pos, {}).get(key)
            if hit is None:
                result, report = arith.add(partial, section(terms[pos], qb),
                                           min(max(qa, qb), top))
                cache[pos][key] = (result, report)
                charge(pos, qa, qb)
            else:
                result, report = hit
            step_no += 1
            term_err_digits = -(qb + 1) * w
            exact_operands = min(sections[:pos + 1]) >= top
            if report.exact_zero and exact_operands:
                # full-precision operands cancelled exactly: the zero is exact
                bound = 0.0
            elif report.exact_zero:
                bound = 1.0
            else:
                err_digits = max(partial_err_digits, term_err_digits) + report.shift
                bound = float(cfg.base) ** err_digits
            ok = bound <= target
            if ok:
                action = "final" if pos == len(terms) - 1 else "accept"
                partial = result
                if report.exact_zero:
                    partial_err_digits = -(10 ** 9)   # exact zero: no error
                else:
                    partial_err_digits = (max(partial_err_digits, term_err_digits)
                                          + report.shift)
            else:
                action = "improve"
            if trace_hook is not None:
                trace_hook(SumStep(step_no, pos, tuple(sections), result,
                                   bound, report.shift, action))
            if ok:
                continue
            if all(sections[i] >= top for i in range(pos + 1)):
                raise AccuracyExhaustedError(
                    f"target {target:g} unreachable at precision {top + 1}",
                    best=result, prec=max(sections) + 1)
            for i in range(pos + 1):
                sections[i] = min(sections[i] + 1, top)
            restart = True
            break
        if not restart:
            return partial, max(sections) + 1
