"""Exception types raised across the package."""


class AmgError(Exception):
    """Base class for errors raised by amgreuse."""


class SparseFormatError(AmgError, ValueError):
    """Invalid sparse matrix data (out-of-range index, broken CSR invariants)."""


class DimensionMismatch(AmgError, ValueError):
    """Operand shapes do not conform."""


class ZeroDiagonalError(AmgError, ValueError):
    """A required diagonal entry is missing or zero."""

    def __init__(self, row, level=None):
        self.row = int(row)
        self.level = level
        where = f"row {self.row}" if level is None else f"row {self.row} on level {level}"
        super().__init__(f"zero or missing diagonal entry at {where}")


class SingularMatrixError(AmgError, ArithmeticError):
    """Dense factorization hit a zero pivot."""


class CoarseningStalledError(AmgError, RuntimeError):
    """Aggregation made no progress on a level too large for a direct solve."""


class PartialUpdateError(AmgError, ValueError):
    """The hierarchy cannot be updated in place for the given matrix."""


class MatrixMarketError(AmgError, ValueError):
    """Malformed or unsupported Matrix Market content."""

    def __init__(self, message, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        prefix = ""
        if path is not None:
            prefix += f"{path}:"
        if lineno is not None:
            prefix += f"line {lineno}: "
        elif prefix:
            prefix += " "
        super().__init__(prefix + message)


class SequenceError(AmgError, ValueError):
    """A stored matrix sequence is empty, has gaps or inconsistent sizes."""
