"""Exception types.

Two families matter to callers: ``ValidationError`` (bad input, wrong
shapes, point outside a chart domain) and ``NumericalError`` (a tolerance
check failed on otherwise well-formed data). The CLI maps them to exit
codes 2 and 3.
"""


class SchurLossError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SchurLossError, ValueError):
    pass


class NumericalError(SchurLossError, ArithmeticError):
    pass


# -- input / precondition failures ------------------------------------------

class DimensionMismatch(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NotIsometry(ValidationError):
    pass


class NotContractive(ValidationError):
    pass


class DegenerateVector(ValidationError):
    pass


class NotJUnitary(ValidationError):
    pass


class DegeneratePair(ValidationError):
    pass


class NotOutputNormal(ValidationError):
    pass


class SchurVectorTooLarge(ValidationError):
    def __init__(self, norm, limit):
        self.norm = float(norm)
        self.limit = float(limit)
        super().__init__(f"Schur vector norm {self.norm:.3e} exceeds {self.limit:.3e}")


class NotInChart(ValidationError):
    """Raised when a lossless function leaves the domain of a chart.

    ``step`` is the 1-based recursion step whose Schur vector was too large,
    or 0 when the terminal constant differs from a fixed base ``D0``.
    """

    def __init__(self, step, norm, message=None):
        self.step = int(step)
        self.norm = float(norm)
        super().__init__(message or f"not in chart at step {self.step} (norm {self.norm:.6g})")


class ParseError(ValidationError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


# -- numerical failures ------------------------------------------------------

class NotStable(NumericalError):
    pass


class PoleHit(NumericalError):
    pass


class NotLossless(NumericalError):
    pass


class NotMinimal(NumericalError):
    pass


class WindingAmbiguous(NumericalError):
    pass


class SingularBlock(NumericalError):
    pass


class SingularPivot(NumericalError):
    pass


class DeflationFailed(NumericalError):
    pass


class NoAdmissibleDirection(NumericalError):
    pass
