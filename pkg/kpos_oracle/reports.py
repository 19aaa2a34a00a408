"""
Structured verdicts shared by every verifier
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from .config import DEFAULT_TOLERANCE, Status, ToleranceConfig

FORMAT_VERSION = 1

# kebab-case tag -> human title
STATEMENT_TITLES = {
    "hadamard-type": "Hadamard-type inequality S_k(diag A) >= S_k(A)",
    "hadamard-determinant": "Hadamard determinant inequality a_11...a_nn >= det A",
    "trace-identity": "Trace identity S_1(diag A) = S_1(A)",
    "second-order-identity": "S_2(A) = S_2(diag A) - sum a_ij^2",
    "diagonal-cone": "Diagonal of a k-positive matrix is k-positive",
    "bordered-diagonal-expansion": "Bordered-diagonal expansion of S_k",
    "deletion-bound": "S_k(A) <= S_k(A[j^c]) + a_jj S_{k-1}(A[j^c])",
    "border-zeroing-step": "Zeroing one border keeps (k+1)-positivity and raises S_m",
    "border-zeroing-chain": "Iterated border zeroing is monotone up to diag(A)",
    "deletion-identity": "sum_j S_k(A[j^c]) = (n-k) S_k(A)",
    "cubic-base-case": "3 S_3(A) <= sum a_ii S_2(A[i^c])",
    "submatrix-inheritance": "A[i^c] is (k-1)-positive",
    "garding": "Garding inequality for S_k",
    "garding-diagonal": "Garding inequality with a positive diagonal direction",
    "mixed-diagonal": "sum b_ii S_{k-1}(A[i^c]) >= k S_k(A)^((k-1)/k) S_k(B)^(1/k)",
    "derivation-spectrum": "Spectrum of D_A equals the p-fold eigenvalue sums",
    "derivation-hadamard": "Hadamard-type inequality for p-fold sums",
    "hyperbolic-hadamard": "Hadamard-type inequality for a symmetric hyperbolic polynomial (open)",
    "garding-cone-convexity": "Convexity of a Garding cone",
    "sampling": "Sample generation",
}


@dataclass
class InequalityReport:
    """One checked statement on one input.

    margin = (lhs - rhs) / scale; see ToleranceConfig.classify for the
    status bands.
    """

    statement: str
    lhs: float
    rhs: float
    margin: float
    status: Status
    n: int = 0
    k: Optional[int] = None
    p: Optional[int] = None
    witness: Dict[str, Any] = field(default_factory=dict)
    tolerance_level: float = DEFAULT_TOLERANCE.eps_rel
    provenance: Dict[str, Any] = field(default_factory=dict)

    @property
    def title(self) -> str:
        return STATEMENT_TITLES.get(self.statement, self.statement)

    @property
    def is_candidate(self) -> bool:
        return self.status is Status.VIOLATED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format_version": FORMAT_VERSION,
            "statement": self.statement,
            "n": self.n,
            "k": self.k,
            "p": self.p,
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "margin": _jsonable(self.margin),
            "status": self.status.value,
            "witness": _jsonable(self.witness),
            "tolerance_level": self.tolerance_level,
            "provenance": _jsonable(self.provenance),
        }


def compare(
    statement: str,
    lhs: float,
    rhs: float,
    tol: ToleranceConfig = DEFAULT_TOLERANCE,
    *,
    identity: bool = False,
    scale: Optional[float] = None,
    **context: Any,
) -> InequalityReport:
    """Report for lhs >= rhs (or lhs = rhs when ``identity``)"""
    scale = scale if scale is not None else tol.scale_for(lhs, rhs)
    margin = (lhs - rhs) / scale
    status = tol.classify_identity(margin) if identity else tol.classify(margin)
    return InequalityReport(
        statement=statement,
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float(margin),
        status=status,
        tolerance_level=tol.eps_rel,
        **context,
    )


def inapplicable(statement: str, reason: str, tol: ToleranceConfig = DEFAULT_TOLERANCE, **context: Any) -> InequalityReport:
    witness = dict(context.pop("witness", {}))
    witness["reason"] = reason
    return InequalityReport(
        statement=statement,
        lhs=float("nan"),
        rhs=float("nan"),
        margin=float("nan"),
        status=Status.INAPPLICABLE,
        witness=witness,
        tolerance_level=tol.eps_rel,
        **context,
    )


def _jsonable(value: Any) -> Any:
    if isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, Status):
        return value.value
    return value
