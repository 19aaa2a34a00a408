"""
Tolerance policy and run configuration
"""
import os
from enum import Enum
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

MAX_N = 32
MAX_WEDGE_DIM = 10_000
MINOR_SUM_ADVISORY_N = 16
REJECTION_BUDGET = 10_000
ESCALATION_LEVELS = (1e-9, 1e-11)
ENV_PREFIX = "KPOS_"


class Status(str, Enum):
    HOLDS = "holds"
    EQUALITY = "equality"
    VIOLATED = "violated-candidate"
    INAPPLICABLE = "inapplicable"


class ToleranceConfig(BaseModel):
    """Single numerical reading of every "≥" and "=" in the checked statements.

    A margin m (already divided by its natural scale) is classified as
    holds when m > eps_rel, equality when |m| <= eps_rel and
    violated-candidate when m < -eps_rel.
    """

    model_config = ConfigDict(frozen=True)

    eps_abs: float = Field(default=1e-12, gt=0)
    eps_rel: float = Field(default=1e-9, gt=0)

    def classify(self, margin: float) -> Status:
        if margin > self.eps_rel:
            return Status.HOLDS
        if margin < -self.eps_rel:
            return Status.VIOLATED
        return Status.EQUALITY

    def classify_identity(self, margin: float) -> Status:
        """Two-sided statements: anything outside the band is a violation"""
        return Status.EQUALITY if abs(margin) <= self.eps_rel else Status.VIOLATED

    def is_boundary(self, margin: float) -> bool:
        return abs(margin) <= self.eps_rel

    def scale_for(self, lhs: float, rhs: float) -> float:
        return max(abs(lhs), abs(rhs), self.eps_abs)


DEFAULT_TOLERANCE = ToleranceConfig()


def parse_range(text: str) -> List[int]:
    """Parse ``4``, ``3..8`` or ``3,5,7`` into a sorted list of integers"""
    values = set()
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise ValueError(f"empty range {part!r}")
            values.update(range(lo_i, hi_i + 1))
        else:
            values.add(int(part))
    if not values:
        raise ValueError(f"no values in range {text!r}")
    return sorted(values)


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    HUMAN = "human"


class RunConfig(BaseModel):
    """Everything one CLI invocation needs"""

    command: str
    n_values: List[int] = Field(default_factory=lambda: [4])
    k_values: Optional[List[int]] = None
    p_values: Optional[List[int]] = None
    count: int = Field(default=100, ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    profile: str = "generic"
    family: str = "sk"
    output_format: OutputFormat = OutputFormat.HUMAN
    out: Optional[Path] = None
    inputs: List[Path] = Field(default_factory=list)
    threads: int = Field(default=1, ge=1, le=256)
    tol: ToleranceConfig = DEFAULT_TOLERANCE

    @field_validator("n_values")
    @classmethod
    def _check_n(cls, values: List[int]) -> List[int]:
        for n in values:
            if not 1 <= n <= MAX_N:
                raise ValueError(f"n={n} outside 1..{MAX_N}")
        return values

    @field_validator("k_values", "p_values")
    @classmethod
    def _check_levels(cls, values: Optional[List[int]]) -> Optional[List[int]]:
        if values is not None and any(v < 1 for v in values):
            raise ValueError("levels and grades start at 1")
        return values

    @model_validator(mode="after")
    def _check_wedge_cap(self) -> "RunConfig":
        from math import comb

        if self.p_values:
            for n in self.n_values:
                for p in self.p_values:
                    if p <= n and comb(n, p) > MAX_WEDGE_DIM:
                        raise ValueError(f"C({n},{p}) exceeds {MAX_WEDGE_DIM}")
        return self


def env_default(name: str, fallback: Optional[str] = None) -> Optional[str]:
    """Read a ``KPOS_`` override for the flag ``name``"""
    return os.getenv(ENV_PREFIX + name.upper().replace("-", "_"), fallback)
