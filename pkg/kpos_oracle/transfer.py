"""
Checks that move statements from A to its derivation operator D_A
"""
import logging
from math import comb

import numpy as np

from .cones import ConeQuery, gamma_member
from .config import DEFAULT_TOLERANCE, MAX_WEDGE_DIM, Status, ToleranceConfig
from .inequalities import cor1_check
from .linalg.derivation import derivation_matrix, lambda_brackets
from .linalg.matrix import SymMatrix, eigen
from .linalg.symfunc import esp_table
from .reports import InequalityReport, compare, inapplicable

logger = logging.getLogger(__name__)

SPECTRUM_TOL = 1e-7
# D_A is only built for the cross-check up to this dimension
ROUTE_CHECK_DIM = 252


def spectrum_transfer_check(A: SymMatrix, p: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """Sorted λ(D_A) against sorted λ(A)_[p]"""
    statement = "derivation-spectrum"
    if not 1 <= p <= A.n or comb(A.n, p) > MAX_WEDGE_DIM:
        return inapplicable(statement, f"needs 1 <= p <= n and C(n,p) <= {MAX_WEDGE_DIM}, got p={p}", tol, n=A.n, p=p)
    lam = eigen(A).values
    sums = np.sort(lambda_brackets(lam, p))
    operator = derivation_matrix(A, p)
    spectrum = np.sort(eigen(operator.matrix).values)
    scale = 1.0 + A.max_norm()
    deviation = float(np.max(np.abs(spectrum - sums)))
    status = Status.EQUALITY if deviation <= SPECTRUM_TOL * scale else Status.VIOLATED
    if status is Status.VIOLATED:
        logger.warning("derivation spectrum off by %.3e (n=%d, p=%d)", deviation, A.n, p)
    return InequalityReport(
        statement=statement,
        lhs=float(spectrum.sum()),
        rhs=float(sums.sum()),
        margin=-deviation / scale,
        status=status,
        n=A.n,
        p=p,
        witness={"max_deviation": deviation, "threshold": SPECTRUM_TOL * scale, "dim": operator.dim},
        tolerance_level=SPECTRUM_TOL,
    )


def pcor_check(A: SymMatrix, p: int, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """λ(A)_[p] ∈ Γ_k(C(n,p)) ⇒ diag(A)_[p] ∈ Γ_k and S_k(diag(A)_[p]) >= S_k(λ(A)_[p])"""
    statement = "derivation-hadamard"
    context = {"n": A.n, "k": k, "p": p}
    if not 1 <= p <= A.n or comb(A.n, p) > MAX_WEDGE_DIM:
        return inapplicable(statement, f"needs 1 <= p <= n and C(n,p) <= {MAX_WEDGE_DIM}", tol, **context)
    dim = comb(A.n, p)
    if not 1 <= k <= dim:
        return inapplicable(statement, f"needs 1 <= k <= C(n,p) = {dim}, got k={k}", tol, **context)
    query = ConeQuery(dim, k, tol)
    sums = lambda_brackets(eigen(A).values, p)
    verdict = gamma_member(sums, query)
    if not verdict.member:
        return inapplicable(statement, "p-fold eigenvalue sums are not in the cone", tol, witness={"cone_margin": verdict.margin}, **context)
    diag_sums = lambda_brackets(A.diagonal(), p)
    diag_verdict = gamma_member(diag_sums, query)
    report = compare(statement, esp_table(diag_sums)[k], esp_table(sums)[k], tol, **context)
    if not diag_verdict.member and not diag_verdict.boundary:
        report.status = Status.VIOLATED
    report.witness = {"cone_margin": verdict.margin, "diagonal_cone_margin": diag_verdict.margin}
    if dim <= ROUTE_CHECK_DIM:
        # the same statement run on D_A itself, whose diagonal is diag(A)_[p]
        operator_report = cor1_check(derivation_matrix(A, p).matrix, k, tol)
        report.witness["operator_margin"] = operator_report.margin
        report.witness["operator_status"] = operator_report.status.value
    if report.is_candidate:
        logger.warning("p-fold Hadamard candidate: n=%d p=%d k=%d margin=%.3e", A.n, p, k, report.margin)
    return report
