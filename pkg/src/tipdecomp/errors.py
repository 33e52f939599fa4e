"""Exception types raised across the package."""


class TipDecompError(Exception):
    """Base class for all library errors."""


class GraphFormatError(TipDecompError, ValueError):
    """An edge-list line could not be parsed."""

    def __init__(self, lineno: int, line: str, reason: str = "expected 2 tokens"):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


class NotApplicableError(TipDecompError, ValueError):
    """A measure or bound was requested on a graph it is not defined for."""


class UndefinedMeasureError(TipDecompError, ValueError):
    """The measure has no value on this input (e.g. modularity with no edges)."""


class ConvergenceError(TipDecompError, RuntimeError):
    """An iterative method did not converge within its iteration budget."""


class SizeLimitError(TipDecompError, ValueError):
    """An exact method refused an instance larger than its node limit."""


class DegenerateFitError(TipDecompError, ValueError):
    """A least-squares design matrix is rank deficient."""
