"""
Membership in Γ_k(n) and k-positivity of symmetric matrices
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .config import DEFAULT_TOLERANCE, ToleranceConfig
from .errors import DomainError
from .linalg.matrix import SymMatrix, deleted, eigen
from .linalg.symfunc import SpectrumLike, as_spectrum, esp_table, principal_minor_sum
from .reports import InequalityReport, inapplicable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConeQuery:
    n: int
    k: int
    tol: ToleranceConfig = DEFAULT_TOLERANCE

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise DomainError(f"cone level k={self.k} outside 1..{self.n}")


@dataclass(frozen=True)
class ConeVerdict:
    """Verdict plus the normalized margin min_j S_j / (1+‖λ‖_∞)^j.

    ``first_failing_j`` is set exactly when ``member`` is false.
    """

    member: bool
    margin: float
    first_failing_j: Optional[int] = None
    boundary: bool = False
    level_margins: Tuple[float, ...] = field(default=(), repr=False)

    def __bool__(self) -> bool:
        return self.member


def _verdict_from_values(values, scale_base: float, k: int, tol: ToleranceConfig) -> ConeVerdict:
    margins = tuple(float(values[j]) / scale_base ** j for j in range(1, k + 1))
    margin = min(margins)
    failing = next((j for j, m in enumerate(margins, start=1) if m <= tol.eps_rel), None)
    return ConeVerdict(
        member=failing is None,
        margin=margin,
        first_failing_j=failing,
        boundary=tol.is_boundary(margin),
        level_margins=margins,
    )


def gamma_member(lam: SpectrumLike, q: ConeQuery) -> ConeVerdict:
    """λ ∈ Γ_k(n), i.e. S_1(λ), ..., S_k(λ) all positive"""
    spectrum = as_spectrum(lam)
    if spectrum.n != q.n:
        raise DomainError(f"point has {spectrum.n} coordinates, cone lives in R^{q.n}")
    table = esp_table(spectrum)
    return _verdict_from_values(table.s, 1.0 + spectrum.sup_norm(), q.k, q.tol)


def k_positive(A: SymMatrix, q: ConeQuery) -> ConeVerdict:
    if A.n != q.n:
        raise DomainError(f"matrix is {A.n}x{A.n}, query is for n={q.n}")
    return gamma_member(eigen(A).values, q)


def k_positive_minors(A: SymMatrix, q: ConeQuery) -> ConeVerdict:
    """Eigenvalue-free verdict from the minor sums E_1, ..., E_k"""
    if A.n != q.n:
        raise DomainError(f"matrix is {A.n}x{A.n}, query is for n={q.n}")
    values = [1.0] + [principal_minor_sum(A.dense, j) for j in range(1, q.k + 1)]
    return _verdict_from_values(values, 1.0 + A.frobenius_norm(), q.k, q.tol)


def is_k_positive(A: SymMatrix, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> bool:
    return k_positive(A, ConeQuery(A.n, k, tol)).member


def max_level(A: SymMatrix, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> int:
    """Largest k with A k-positive, 0 when S_1(A) is not positive"""
    lam = eigen(A).values
    scale = 1.0 + float(np.max(np.abs(lam)))
    table = esp_table(lam)
    level = 0
    for j in range(1, A.n + 1):
        if table[j] / scale ** j <= tol.eps_rel:
            break
        level = j
    return level


def inheritance_check(A: SymMatrix, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """Every A[{i}ᶜ] of a k-positive A is (k-1)-positive"""
    statement = "submatrix-inheritance"
    if k < 2 or k > A.n:
        return inapplicable(statement, f"needs 2 <= k <= n, got k={k}", tol, n=A.n, k=k)
    own = k_positive(A, ConeQuery(A.n, k, tol))
    if not own.member:
        return inapplicable(statement, "matrix is not k-positive", tol, n=A.n, k=k, witness={"cone_margin": own.margin})
    per_row = []
    failures = []
    for i in range(1, A.n + 1):
        verdict = k_positive(deleted(A, i), ConeQuery(A.n - 1, k - 1, tol))
        per_row.append(verdict.margin)
        if not verdict.member and not verdict.boundary:
            failures.append(i)
    worst = min(per_row)
    status = tol.classify(worst)
    report = InequalityReport(
        statement=statement,
        lhs=worst,
        rhs=0.0,
        margin=worst,
        status=status,
        n=A.n,
        k=k,
        witness={"row_margins": per_row, "failing_rows": failures, "cone_margin": own.margin},
        tolerance_level=tol.eps_rel,
    )
    if failures:
        logger.warning("submatrix inheritance failed on rows %s (n=%d, k=%d)", failures, A.n, k)
    return report
