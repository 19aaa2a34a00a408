"""
Exception hierarchy for the k-positivity oracle
"""
from typing import Optional


class OracleError(Exception):
    """Base class for every error raised by kpos_oracle"""


class DomainError(OracleError, ValueError):
    """Input outside an operation's domain (bad index, dimension, cap)"""


class MatrixFormatError(DomainError):
    """Malformed matrix input, with the offending location"""

    def __init__(self, message: str, source: str = "<input>", line: Optional[int] = None):
        self.source = source
        self.line = line
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


class NumericError(OracleError, ArithmeticError):
    """A numerical routine failed to reach its accuracy target"""

    def __init__(self, message: str, residual: float = float("nan")):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class NotHyperbolicError(NumericError):
    """Root finder saw a complex pair: P is not hyperbolic in direction a at x"""


class SamplingError(OracleError):
    """Rejection budget exhausted while sampling"""
