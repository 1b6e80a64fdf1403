"""Exception types raised by the grossfloat library."""


class GrossFloatError(Exception):
    """Base class for all grossfloat errors."""


class FormatError(GrossFloatError, ValueError):
    """Malformed literal, digit string, or configuration value."""


class SectionRangeError(GrossFloatError, ValueError):
    """Requested section index outside [0, max_section]."""


class ExponentOverflowError(GrossFloatError, OverflowError):
    """Exponent left the configured window after normalization."""


class DivisionByZeroError(GrossFloatError, ZeroDivisionError):
    """Reciprocal or quotient of an exact zero."""


class SingularStepError(GrossFloatError, ArithmeticError):
    """Newton step hit an exactly-zero derivative away from a root."""


class AccuracyExhaustedError(GrossFloatError, ArithmeticError):
    """Target accuracy unreachable at the maximum stored precision.

    Carries the best result obtained so far in ``best`` together with the
    precision level it was computed at.
    """

    def __init__(self, message, best=None, prec=None):
        super().__init__(message)
        self.best = best
        self.prec = prec
