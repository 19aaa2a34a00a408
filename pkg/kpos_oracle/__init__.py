"""
Numerical oracle for Hadamard-type inequalities on k-positive matrices
"""
__version__ = "1.0.0"

from .agent import RunResult, VerificationAgent
from .config import DEFAULT_TOLERANCE, RunConfig, Status, ToleranceConfig
from .reports import InequalityReport

__all__ = ["VerificationAgent", "RunResult", "RunConfig", "Status", "ToleranceConfig", "DEFAULT_TOLERANCE", "InequalityReport"]
