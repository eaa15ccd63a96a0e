"""Exception types shared across the package."""


class FPError(Exception):
    """Base class for all package errors."""


class DomainError(FPError, ValueError):
    """Input lies outside the domain of an operation (e.g. negative entries)."""


class InfinityNotAllowed(DomainError):
    pass


class ConvergenceError(FPError, RuntimeError):
    """Iteration budget exhausted before the requested certification width."""


class MatrixSyntaxError(FPError, ValueError):
    pass


class QuiverSyntaxError(FPError, ValueError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class MissingData(FPError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "missing data"


class InsufficientData(FPError, ValueError):
    pass


class DegenerateSet(FPError, ValueError):
    pass


class InvalidDecomposition(FPError, ValueError):
    pass


class Indeterminate(FPError, ValueError):
    pass


class UnknownDescriptor(FPError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown descriptor"


class ConstructionMismatch(FPError, AssertionError):
    """Independent constructions of the same tube data disagree."""
