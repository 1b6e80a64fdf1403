"""Adaptive-precision Newton's method for polynomial roots.

The polynomial is evaluated by Horner's rule.  Multiplying the accumulator by
a narrower value grows it by the narrow operand's width, so with a
single-chunk argument the evaluation wanders through every intermediate
precision on its own: no rounding happens until the accumulator would exceed
the precision cap, and a final subtraction that cancels the leading chunks
collapses the result back to a narrow number.

Two evaluation policies are exposed.  The default lets the accumulator grow
one chunk per step from the width of the leading coefficient (the cheap,
exact mode).  ``fixed_width=True`` holds the accumulator at the cap
throughout, which models running every operation at the currently selected
precision; the Newton driver uses it so that its measured grossdigit work
matches the per-step precision it reports.

The solver's profiler is attached to the evaluations of the polynomial
itself; derivative evaluations and the quotient share their cost profile and
are left out of the headline counts.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import arith
from .config import ArithConfig
from .errors import FormatError, SingularStepError
from .number import GrossFloat, from_decimal_string, from_fraction, to_decimal_string
from .precision import PrecisionState, relative_err, should_escalate
from .profiler import OpCounter

__all__ = [
    "Polynomial",
    "HornerStep",
    "SolveStep",
    "SolveTrace",
    "ConditioningEstimate",
    "horner_eval",
    "horner_eval_derivative",
    "newton_solve",
    "predict_perturbation",
]


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial with exact grossfloat coefficients, degree-descending."""

    coefficients: tuple[GrossFloat, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise FormatError("a polynomial needs at least one coefficient")
        if self.coefficients[0].is_zero and len(self.coefficients) > 1:
            raise FormatError("leading coefficient must be nonzero")

    @classmethod
    def from_coefficients(cls, values: Sequence, config: ArithConfig) -> "Polynomial":
        coeffs = []
        for v in values:
            if isinstance(v, GrossFloat):
                coeffs.append(v)
            elif isinstance(v, str):
                coeffs.append(from_decimal_string(v, config))
            else:
                coeffs.append(from_fraction(Fraction(v), config))
        return cls(tuple(coeffs))

    @property
    def config(self) -> ArithConfig:
        return self.coefficients[0].config

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def derivative(self) -> "Polynomial":
        n = self.degree
        if n == 0:
            return Polynomial((GrossFloat.zero(self.config),))
        coeffs = []
        for i, c in enumerate(self.coefficients[:-1]):
            coeffs.append(from_fraction(c.to_fraction() * (n - i), self.config))
        return Polynomial(tuple(coeffs))


@dataclass(frozen=True)
class HornerStep:
    """One Horner update ``acc <- acc * x + coefficient``."""

    coefficient: GrossFloat
    product: GrossFloat
    value: GrossFloat


def horner_eval(poly: Polynomial, x: GrossFloat, max_prec: int | None = None,
                profiler: OpCounter | None = None, *,
                trace: list[HornerStep] | None = None,
                fixed_width: bool = False) -> GrossFloat:
    """Evaluate ``poly`` at ``x`` with the accumulator capped at ``max_prec``.

    ``max_prec`` is a section index: the accumulator never stores more than
    ``max_prec + 1`` chunks.  In the default growth mode it starts at the
    leading coefficient's width and widens by the width of ``x`` per step;
    with ``fixed_width=True`` it is held at the cap from the start.
    """
    cfg = poly.config
    top = cfg.max_section if max_prec is None else max_prec
    if not 0 <= top <= cfg.max_section:
        raise FormatError(f"max_prec {top} outside [0, {cfg.max_section}]")
    cap = top + 1
    acc = poly.coefficients[0]
    x_width = max(len(x.chunks), 1)
    width = cap if fixed_width else min(max(len(acc.chunks), 1), cap)
    for coeff in poly.coefficients[1:]:
        acc = acc.padded(width - 1)
        next_width = cap if fixed_width else min(width + x_width, cap)
        product, _ = arith.mul(acc, x, next_width - 1, profiler=profiler)
        value, _ = arith.add(product, coeff, next_width - 1, profiler=profiler)
        if trace is not None:
            trace.append(HornerStep(coeff, product, value))
        acc = value
        width = next_width
    return acc.trimmed()


def horner_eval_derivative(poly: Polynomial, x: GrossFloat,
                           max_prec: int | None = None,
                           profiler: OpCounter | None = None, *,
                           fixed_width: bool = False) -> GrossFloat:
    """Evaluate the derivative of ``poly`` at ``x`` (coefficients formed exactly)."""
    return horner_eval(poly.derivative(), x, max_prec, profiler,
                       fixed_width=fixed_width)


# ---------------------------------------------------------------------------
# Newton iteration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveStep:
    k: int
    x: GrossFloat
    err: float
    prec: int
    cum_mults: int
    cum_adds: int


@dataclass
class SolveTrace:
    """Per-iteration record of a Newton run."""

    mode: str
    steps: list[SolveStep] = field(default_factory=list)
    reason: str = "max_iter"

    @property
    def final_x(self) -> GrossFloat:
        return self.steps[-1].x

    @property
    def final_err(self) -> float:
        return self.steps[-1].err

    @property
    def cum_mults(self) -> int:
        return self.steps[-1].cum_mults if self.steps else 0

    @property
    def cum_adds(self) -> int:
        return self.steps[-1].cum_adds if self.steps else 0

    def to_csv(self, target=None) -> str:
        """Write ``step,x_k,err_k,prec,cum_mults,cum_adds`` rows.

        ``target`` may be a path or a writable object; the CSV text is
        returned either way.
        """
        buf = io.StringIO()
        buf.write("step,x_k,err_k,prec,cum_mults,cum_adds\n")
        for s in self.steps:
            buf.write(f"{s.k},{to_decimal_string(s.x, 40)},{s.err:.17g},"
                      f"{s.prec},{s.cum_mults},{s.cum_adds}\n")
        text = buf.getvalue()
        if target is None:
            return text
        if hasattr(target, "write"):
            target.write(text)
        else:
            with open(target, "w", encoding="utf-8") as fh:
                fh.write(text)
        return text


def newton_solve(poly: Polynomial, x0: GrossFloat, tol: float = 1e-15, *,
                 mode: str = "dynamic", fixed_section: int | None = None,
                 max_iter: int = 200, safety: float = 1.0,
                 profiler: OpCounter | None = None,
                 stagnation_window: int = 5) -> SolveTrace:
    """Newton iteration ``x <- x - p(x)/p'(x)`` with adaptive evaluation precision.

    In dynamic mode the iterate stays a single-chunk number while the
    polynomial and derivative evaluations run at the current precision level,
    raised by one section whenever the step-to-step error estimate stops
    shrinking.  In fixed mode everything is held at ``fixed_section``.
    Termination: estimated error below ``tol``, an exactly-zero residual,
    ``stagnation_window`` consecutive non-improving steps at the highest
    available precision, or ``max_iter``.
    """
    cfg = poly.config
    if mode not in ("dynamic", "fixed"):
        raise ValueError(f"mode must be 'dynamic' or 'fixed', got {mode!r}")
    if mode == "fixed":
        if fixed_section is None:
            raise ValueError("fixed mode needs fixed_section")
        if not 0 <= fixed_section <= cfg.max_section:
            raise FormatError(f"fixed_section {fixed_section} outside "
                              f"[0, {cfg.max_section}]")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    counter = profiler if profiler is not None else OpCounter()
    deriv = poly.derivative()
    x_section = 0 if mode == "dynamic" else fixed_section
    state = PrecisionState(prec=1 if mode == "dynamic" else fixed_section + 1,
                           safety=safety, max_prec=cfg.max_section + 1)
    trace = SolveTrace(mode=mode)
    x = arith.round_to_section(x0, x_section)
    if mode == "fixed":
        x = x.padded(fixed_section)
    stagnant = 0
    can_escalate = mode == "dynamic"
    k = 0
    while k < max_iter:
        fx = horner_eval(poly, x, state.prec - 1, counter, fixed_width=True)
        if fx.is_zero:
            # no residual visible at this precision: either escalate or stop
            if can_escalate and state.prec <= cfg.max_section:
                state.prec += 1
                stagnant = 0
                continue
            k += 1
            trace.steps.append(SolveStep(k, x, 0.0, state.prec,
                                         counter.grossdigit_mults,
                                         counter.grossdigit_adds))
            trace.reason = "zero_residual"
            break
        fpx = horner_eval(deriv, x, state.prec - 1, None, fixed_width=True)
        if fpx.is_zero:
            raise SingularStepError(
                f"derivative vanished at {x} with nonzero residual")
        delta = arith.div(fx, fpx, x_section)
        x_new = arith.sub(x, delta, x_section)[0]
        if mode == "fixed" and not x_new.is_zero:
            x_new = x_new.padded(fixed_section)
        if x_new == x:
            if can_escalate and state.prec <= cfg.max_section:
                state.prec += 1
                stagnant = 0
                continue
            err = 0.0
        elif x_new.is_zero:
            err = math.inf
        else:
            err = relative_err(x_new, x)
        k += 1
        trace.steps.append(SolveStep(k, x_new, err, state.prec,
                                     counter.grossdigit_mults,
                                     counter.grossdigit_adds))
        if err < tol:
            trace.reason = "tolerance"
            x = x_new
            break
        improving = not state.err_history or err < safety * state.err_history[-1]
        if improving:
            stagnant = 0
        elif can_escalate and should_escalate(state, err):
            state.prec += 1
            stagnant = 0
        else:
            stagnant += 1
        state.observe(err)
        x = x_new
        if stagnant >= stagnation_window:
            trace.reason = "stagnation"
            break
    return trace


# ---------------------------------------------------------------------------
# conditioning of a multiple root
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditioningEstimate:
    """Inputs of the perturbed-root estimate for a root of multiplicity d."""

    d: int
    eps: float
    g_alpha: float
    fd_alpha: float

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("multiplicity d must be >= 1")
        if self.fd_alpha == 0:
            raise ValueError("f^(d)(alpha) must be nonzero")


def predict_perturbation(est: ConditioningEstimate) -> float:
    """Size of the root shift caused by a perturbation of size ``eps``.

    A perturbation ``eps * g`` moves a root of multiplicity ``d`` by about
    ``(eps * d! * |g(alpha)/f^(d)(alpha)|) ** (1/d)``.
    """
    inner = est.eps * math.factorial(est.d) * abs(est.g_alpha / est.fd_alpha)
    return inner ** (1.0 / est.d)
