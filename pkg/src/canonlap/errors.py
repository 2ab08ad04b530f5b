"""Exception types shared across the package."""


class CanonLapError(Exception):
    """Base class for library errors."""


class DomainError(CanonLapError, ValueError):
    """An argument lies outside the operation's domain."""


class RangeError(CanonLapError, OverflowError):
    """A request exceeds the supported numeric range."""


class ConsistencyError(CanonLapError, ArithmeticError):
    """A computed quantity contradicts a structural identity."""


class NumericError(CanonLapError, ArithmeticError):
    """Non-finite values showed up during evaluation."""


class ZeroFindingError(CanonLapError, RuntimeError):
    """Root refinement produced an inconsistent zero set."""


class CSVFormatError(CanonLapError, ValueError):
    """Malformed sample file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
