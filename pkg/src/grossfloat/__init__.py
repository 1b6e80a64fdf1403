"""Dynamic-precision chunked floating-point arithmetic.

Numbers are stored as short expansions of "grossdigits" (chunks of ``t+1``
base-``beta`` digits) over negative powers of the machine constant
``beta**(t+1)``.  Values of different stored precisions combine directly, and
the precision controller escalates the working section when subtraction
cancels leading digits.  An adaptive Newton solver built on top demonstrates
the arithmetic on ill-conditioned polynomial roots.
"""

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
from .number import (
    GrossFloat,
    compare,
    format_literal,
    format_table_row,
    from_binary_string,
    from_decimal_string,
    from_fraction,
    from_int,
    parse_literal,
    section,
    to_decimal_string,
)
from .arith import (
    NormalizationReport,
    RawAccumulator,
    TraceRow,
    add,
    div,
    mul,
    normalize,
    reciprocal,
    round_to_section,
    sub,
)
from .profiler import OpCounter, OpEvent, predict_add_cost, predict_mul_cost
from .precision import (
    CancellationReport,
    PrecisionState,
    adaptive_sum,
    relative_err,
    should_escalate,
)
from .rootfind import (
    ConditioningEstimate,
    Polynomial,
    SolveTrace,
    horner_eval,
    horner_eval_derivative,
    newton_solve,
    predict_perturbation,
)

__version__ = "0.1.0"

__all__ = [
    "ArithConfig",
    "Rounding",
    "GrossFloat",
    "NormalizationReport",
    "RawAccumulator",
    "TraceRow",
    "OpCounter",
    "OpEvent",
    "PrecisionState",
    "CancellationReport",
    "Polynomial",
    "SolveTrace",
    "ConditioningEstimate",
    "add",
    "sub",
    "mul",
    "div",
    "reciprocal",
    "normalize",
    "round_to_section",
    "section",
    "compare",
    "adaptive_sum",
    "relative_err",
    "should_escalate",
    "horner_eval",
    "horner_eval_derivative",
    "newton_solve",
    "predict_perturbation",
    "predict_mul_cost",
    "predict_add_cost",
    "from_binary_string",
    "from_decimal_string",
    "from_fraction",
    "from_int",
    "parse_literal",
    "format_literal",
    "format_table_row",
    "to_decimal_string",
    "GrossFloatError",
    "FormatError",
    "SectionRangeError",
    "ExponentOverflowError",
    "DivisionByZeroError",
    "SingularStepError",
    "AccuracyExhaustedError",
]
