"""
Verifiers for the Hadamard-type inequalities and the lemmas behind them.

Every verifier re-checks its own hypotheses and answers ``inapplicable``
instead of raising, so randomized sweeps never abort on an input that
simply does not satisfy a statement's assumptions.
"""
import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from .cones import ConeQuery, ConeVerdict, gamma_member, inheritance_check, k_positive
from .config import DEFAULT_TOLERANCE, Status, ToleranceConfig
from .linalg.matrix import SymMatrix, border_reduce, deleted, eigen, zero_border
from .linalg.symfunc import diag_esp, esp_table, minor_sum, sk_gradient, sk_matrix, sk_partial
from .reports import InequalityReport, compare, inapplicable

logger = logging.getLogger(__name__)

EQUALITY_DIAGONAL_TOL = 1e-6
BORDERED_DIAGONAL_TOL = 1e-12

__all__ = [
    "InequalityReport",
    "hadamard_check",
    "remark_check",
    "cor1_check",
    "expand_lemma_check",
    "key_lemma_check",
    "step1_check",
    "zeroing_chain_check",
    "deletion_identity_check",
    "cubic_base_check",
    "garding_check",
    "diagonal_garding_check",
    "cor2_check",
    "inheritance_check",
    "full_suite",
]


def _cone(A: SymMatrix, k: int, tol: ToleranceConfig) -> ConeVerdict:
    return k_positive(A, ConeQuery(A.n, k, tol))


def _settle_equality(A: SymMatrix, report: InequalityReport) -> dict:
    """Equality is only reported for (near-)diagonal A; elsewhere a margin inside the band reads as holds"""
    off = A.off_diagonal_max()
    near_diagonal = off <= EQUALITY_DIAGONAL_TOL * (1.0 + A.max_norm())
    if report.status is Status.EQUALITY and not near_diagonal:
        report.status = Status.HOLDS
    return {"off_diagonal_max": off, "near_diagonal": near_diagonal}


def _identity_scale(A: SymMatrix, k: int, lhs: float, rhs: float, tol: ToleranceConfig) -> float:
    """Normalizer for two routes to the same degree-k quantity.

    Rounding in either route grows like (1 + ρ(A))^k, so both sides being
    small next to that is cancellation, not disagreement.
    """
    radius = float(np.max(np.abs(eigen(A).values))) if A.n else 0.0
    return max(tol.scale_for(lhs, rhs), (1.0 + radius) ** k)


def _power_mean_rhs(k: int, s_a: float, s_d: float) -> float:
    """k·s_a^{(k-1)/k}·s_d^{1/k} for verified-positive s_a, s_d"""
    return k * math.exp(((k - 1) / k) * math.log(s_a) + math.log(s_d) / k)


def remark_check(A: SymMatrix, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """k = 1: S_1(diag A) = S_1(A); k = 2: S_2(diag A) - S_2(A) = Σ_{i<j} a_ij²"""
    if k == 1:
        lhs, rhs = diag_esp(A, 1), sk_matrix(A, 1)
        report = compare("trace-identity", lhs, rhs, tol, identity=True, n=A.n, k=1)
        report.witness = {"off_diagonal_max": A.off_diagonal_max()}
        return report
    if k != 2 or A.n < 2:
        return inapplicable("second-order-identity", f"needs k in {{1, 2}} and k <= n, got k={k}", tol, n=A.n, k=k)
    lhs, rhs = diag_esp(A, 2), sk_matrix(A, 2)
    off_sq = float(np.sum(np.triu(A.dense, 1) ** 2))
    report = compare("second-order-identity", lhs, rhs, tol, n=A.n, k=2)
    gap = (lhs - rhs) - off_sq
    identity_holds = abs(gap) <= tol.eps_rel * _identity_scale(A, 2, lhs, rhs, tol)
    report.witness = {
        "off_diagonal_square_sum": off_sq,
        "identity_residual": gap,
        "identity_holds": identity_holds,
        **_settle_equality(A, report),
    }
    if not identity_holds:
        logger.warning("second-order identity off by %.3e (n=%d)", gap, A.n)
        report.status = Status.VIOLATED
    return report


def hadamard_check(A: SymMatrix, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """S_k(diag A) >= S_k(A) for k-positive A, equality only for diagonal A"""
    if k in (1, 2):
        return remark_check(A, k, tol)
    statement = "hadamard-determinant" if k == A.n else "hadamard-type"
    if not 3 <= k <= A.n:
        return inapplicable(statement, f"needs 3 <= k <= n, got k={k}", tol, n=A.n, k=k)
    verdict = _cone(A, k, tol)
    if not verdict.member:
        return inapplicable(statement, "matrix is not k-positive", tol, n=A.n, k=k, witness={"cone_margin": verdict.margin})
    lhs, rhs = diag_esp(A, k), sk_matrix(A, k)
    report = compare(statement, lhs, rhs, tol, n=A.n, k=k)
    report.witness = {"cone_margin": verdict.margin, "classical": k == A.n, **_settle_equality(A, report)}
    if report.is_candidate:
        logger.warning("Hadamard-type candidate: n=%d k=%d margin=%.3e", A.n, k, report.margin)
    return report


def cor1_check(A: SymMatrix, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """diag(A) ∈ Γ_k(n) and S_k(diag A) >= S_k(A) for k-positive A"""
    statement = "diagonal-cone"
    if not 1 <= k <= A.n:
        return inapplicable(statement, f"needs 1 <= k <= n, got k={k}", tol, n=A.n, k=k)
    verdict = _cone(A, k, tol)
    if not verdict.member:
        return inapplicable(statement, "matrix is not k-positive", tol, n=A.n, k=k, witness={"cone_margin": verdict.margin})
    diag_verdict = gamma_member(A.diagonal(), ConeQuery(A.n, k, tol))
    report = compare(statement, diag_esp(A, k), sk_matrix(A, k), tol, n=A.n, k=k)
    if not diag_verdict.member and not diag_verdict.boundary:
        report.status = Status.VIOLATED
    report.witness = {
        "cone_margin": verdict.margin,
        "diagonal_cone_margin": diag_verdict.margin,
        "diagonal_first_failing_j": diag_verdict.first_failing_j,
    }
    return report


def _bordered_expansion(A: SymMatrix, k: int) -> float:
    """S_k(diag A) - Σ_{i<n} a_in²·S_{k-2}(diag(A[{i,n}ᶜ]))"""
    n = A.n
    d = A.diagonal()
    total = esp_table(d)[k]
    for i in range(n - 1):
        rest = np.delete(d, [i, n - 1])
        total -= A.dense[i, n - 1] ** 2 * esp_table(rest)[k - 2]
    return total


def expand_lemma_check(A: SymMatrix, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """Expansion of S_k for a matrix whose leading (n-1)-block is diagonal"""
    statement = "bordered-diagonal-expansion"
    if not 2 <= k <= A.n:
        return inapplicable(statement, f"needs 2 <= k <= n, got k={k}", tol, n=A.n, k=k)
    head_off = deleted(A, A.n).off_diagonal_max() if A.n > 1 else 0.0
    if head_off > BORDERED_DIAGONAL_TOL:
        return inapplicable(statement, "A[{n}^c] is not diagonal", tol, n=A.n, k=k, witness={"head_off_diagonal_max": head_off})
    lhs = minor_sum(A, k)
    rhs = _bordered_expansion(A, k)
    report = compare(statement, lhs, rhs, tol, identity=True, scale=_identity_scale(A, k, lhs, rhs, tol), n=A.n, k=k)
    report.witness = {"head_off_diagonal_max": head_off, "border_max": float(np.max(np.abs(A.dense[:-1, -1])))}
    return report


def key_lemma_check(A: SymMatrix, j: int, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """S_k(A) <= S_k(A[{j}ᶜ]) + a_jj·S_{k-1}(A[{j}ᶜ]) when A[{j}ᶜ] is (k-1)-positive"""
    statement = "deletion-bound"
    context = {"n": A.n, "k": k}
    if not (A.n > k >= 2) or not 1 <= j <= A.n:
        return inapplicable(statement, f"needs n > k >= 2 and 1 <= j <= n, got k={k}, j={j}", tol, **context)
    rest = deleted(A, j)
    verdict = _cone(rest, k - 1, tol)
    if not verdict.member:
        return inapplicable(statement, "A[{j}^c] is not (k-1)-positive", tol, witness={"j": j, "cone_margin": verdict.margin}, **context)
    table = esp_table(eigen(rest).values)
    a_jj = A.entry(j, j)
    lhs = table[k] + a_jj * table[k - 1]
    rhs = sk_matrix(A, k)
    report = compare(statement, lhs, rhs, tol, **context)
    border = np.delete(A.dense[j - 1], j - 1)
    border_max = float(np.max(np.abs(border))) if border.size else 0.0
    zeroed = sk_matrix(zero_border(A, j), k)
    border_zero = border_max <= EQUALITY_DIAGONAL_TOL * (1.0 + A.max_norm())
    report.witness = {
        "j": j,
        "border_max": border_max,
        "zero_border_value": zeroed,
        "zero_border_gap": (zeroed - lhs) / tol.scale_for(zeroed, lhs),
        "equality_consistent": report.status is not Status.EQUALITY or border_zero,
    }
    return report


def step1_check(A: SymMatrix, k: int, j: Optional[int] = None, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """A (k+1)-positive: A^{j,0} stays (k+1)-positive and S_{m+1} does not drop, 1 <= m <= k"""
    statement = "border-zeroing-step"
    j = A.n if j is None else j
    context = {"n": A.n, "k": k}
    if not (k >= 1 and k + 1 < A.n) or not 1 <= j <= A.n:
        return inapplicable(statement, f"needs 1 <= k and k+1 < n, got k={k}", tol, **context)
    verdict = _cone(A, k + 1, tol)
    if not verdict.member:
        return inapplicable(statement, "matrix is not (k+1)-positive", tol, witness={"cone_margin": verdict.margin}, **context)
    zeroed = zero_border(A, j)
    after = esp_table(eigen(zeroed).values)
    before = esp_table(eigen(A).values)
    per_level = []
    for m in range(1, k + 1):
        per_level.append((after[m + 1] - before[m + 1]) / tol.scale_for(after[m + 1], before[m + 1]))
    worst = int(np.argmin(per_level)) + 1
    report = compare(statement, after[worst + 1], before[worst + 1], tol, **context)
    zeroed_verdict = _cone(zeroed, k + 1, tol)
    if not zeroed_verdict.member and not zeroed_verdict.boundary:
        report.status = Status.VIOLATED
    report.witness = {"j": j, "level_margins": per_level, "worst_level": worst + 1, "zeroed_cone_margin": zeroed_verdict.margin}
    return report


def zeroing_chain_check(A: SymMatrix, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """Zero rows n, n-1, ..., 1 in turn: S_k never drops and ends at S_k(diag A)"""
    statement = "border-zeroing-chain"
    if not 1 <= k <= A.n:
        return inapplicable(statement, f"needs 1 <= k <= n, got k={k}", tol, n=A.n, k=k)
    verdict = _cone(A, k, tol)
    if not verdict.member:
        return inapplicable(statement, "matrix is not k-positive", tol, n=A.n, k=k, witness={"cone_margin": verdict.margin})
    current = A
    values = [sk_matrix(A, k)]
    cone_margins = [verdict.margin]
    for j in range(A.n, 0, -1):
        current = zero_border(current, j)
        values.append(sk_matrix(current, k))
        cone_margins.append(_cone(current, k, tol).margin)
    steps = [(b - a) / tol.scale_for(a, b) for a, b in zip(values, values[1:])]
    final = diag_esp(A, k)
    report = compare(statement, values[-1], values[0], tol, n=A.n, k=k)
    terminal_gap = (values[-1] - final) / tol.scale_for(values[-1], final)
    if min(steps) < -tol.eps_rel or abs(terminal_gap) > tol.eps_rel or min(cone_margins) <= tol.eps_rel:
        report.status = Status.VIOLATED
    report.witness = {"values": values, "step_margins": steps, "terminal_gap": terminal_gap, "cone_margins": cone_margins}
    return report


def deletion_identity_check(A: SymMatrix, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """Σ_j S_k(A[{j}ᶜ]) = (n - k)·S_k(A)"""
    statement = "deletion-identity"
    if A.n < 2 or not 0 <= k <= A.n:
        return inapplicable(statement, f"needs n >= 2 and 0 <= k <= n, got k={k}", tol, n=A.n, k=k)
    lhs = sum(esp_table(eigen(deleted(A, j)).values)[k] for j in range(1, A.n + 1))
    rhs = (A.n - k) * sk_matrix(A, k)
    return compare(statement, lhs, rhs, tol, identity=True, scale=_identity_scale(A, k, lhs, rhs, tol), n=A.n, k=k)


def cubic_base_check(A: SymMatrix, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """3·S_3(A) <= Σ_i a_ii·S_2(A[{i}ᶜ]) for 3-positive A with n >= 4"""
    statement = "cubic-base-case"
    if A.n < 4:
        return inapplicable(statement, "needs n >= 4", tol, n=A.n, k=3)
    verdict = _cone(A, 3, tol)
    if not verdict.member:
        return inapplicable(statement, "matrix is not 3-positive", tol, n=A.n, k=3, witness={"cone_margin": verdict.margin})
    d = A.diagonal()
    lhs = sum(d[i - 1] * sk_matrix(deleted(A, i), 2) for i in range(1, A.n + 1))
    rhs = 3.0 * sk_matrix(A, 3)
    correction = 0.0
    for i in range(A.n):
        for j in range(i + 1, A.n):
            correction += A.dense[i, j] ** 2 * (d.sum() - d[i] - d[j])
    closed_form = 3.0 * esp_table(d)[3] - correction
    report = compare(statement, lhs, rhs, tol, n=A.n, k=3)
    report.witness = {
        "cone_margin": verdict.margin,
        "identity_residual": (lhs - closed_form) / _identity_scale(A, 3, lhs, closed_form, tol),
        "diagonal_value": 3.0 * esp_table(d)[3],
    }
    if abs(report.witness["identity_residual"]) > tol.eps_rel:
        report.status = Status.VIOLATED
    return report


def garding_check(A: SymMatrix, D: SymMatrix, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """Σ d_ij S_k^{ij}(A) >= k·S_k(A)^{(k-1)/k}·S_k(D)^{1/k} for k-positive A, D"""
    statement = "garding"
    context = {"n": A.n, "k": k}
    if D.n != A.n or not 1 <= k <= A.n:
        return inapplicable(statement, f"needs matching sizes and 1 <= k <= n, got k={k}", tol, **context)
    va, vd = _cone(A, k, tol), _cone(D, k, tol)
    if not (va.member and vd.member):
        return inapplicable(statement, "A or D is not k-positive", tol, witness={"cone_margin_a": va.margin, "cone_margin_d": vd.margin}, **context)
    s_a, s_d = sk_matrix(A, k), sk_matrix(D, k)
    lhs = float(np.sum(D.dense * sk_gradient(A, k)))
    rhs = _power_mean_rhs(k, s_a, s_d)
    report = compare(statement, lhs, rhs, tol, **context)
    report.witness = {"s_k_a": s_a, "s_k_d": s_d, "euler_value": k * s_a}
    return report


def diagonal_garding_check(A: SymMatrix, delta: Sequence[float], k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """Gårding with D = diag(δ), δ > 0: Σ δ_i S_{k-1}(A[{i}ᶜ]) >= k·S_k(A)^{(k-1)/k}·S_k(δ)^{1/k}"""
    statement = "garding-diagonal"
    delta = np.asarray(delta, dtype=float)
    context = {"n": A.n, "k": k}
    if delta.shape != (A.n,) or np.any(delta <= 0) or not 2 <= k <= A.n:
        return inapplicable(statement, "needs a positive weight per row and 2 <= k <= n", tol, **context)
    verdict = _cone(A, k, tol)
    if not verdict.member:
        return inapplicable(statement, "matrix is not k-positive", tol, witness={"cone_margin": verdict.margin}, **context)
    lhs = sum(delta[i - 1] * sk_matrix(deleted(A, i), k - 1) for i in range(1, A.n + 1))
    rhs = _power_mean_rhs(k, sk_matrix(A, k), esp_table(delta)[k])
    return compare(statement, lhs, rhs, tol, **context)


def cor2_check(A: SymMatrix, B: SymMatrix, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> InequalityReport:
    """Σ b_ii·S_{k-1}(A[{i}ᶜ]) >= k·S_k(A)^{(k-1)/k}·S_k(B)^{1/k} for k-positive A, B"""
    statement = "mixed-diagonal"
    context = {"n": A.n, "k": k}
    if B.n != A.n or not 2 <= k <= A.n:
        return inapplicable(statement, f"needs matching sizes and 2 <= k <= n, got k={k}", tol, **context)
    va, vb = _cone(A, k, tol), _cone(B, k, tol)
    if not (va.member and vb.member):
        return inapplicable(statement, "A or B is not k-positive", tol, witness={"cone_margin_a": va.margin, "cone_margin_b": vb.margin}, **context)
    b = B.diagonal()
    lhs = sum(b[i - 1] * sk_matrix(deleted(A, i), k - 1) for i in range(1, A.n + 1))
    via_partials = sum(b[i - 1] * sk_partial(A, k, i, i) for i in range(1, A.n + 1))
    rhs = _power_mean_rhs(k, sk_matrix(A, k), sk_matrix(B, k))
    report = compare(statement, lhs, rhs, tol, **context)
    report.witness = {"partials_route": via_partials, "route_gap": (lhs - via_partials) / tol.scale_for(lhs, via_partials)}
    return report


def full_suite(A: SymMatrix, k: int, partner: Optional[SymMatrix] = None, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> List[InequalityReport]:
    """Every matrix-level statement for one (A, k); ``partner`` plays D and B"""
    partner = partner if partner is not None else SymMatrix.identity(A.n)
    reports = [hadamard_check(A, k, tol), cor1_check(A, k, tol), inheritance_check(A, k, tol)]
    reports.append(garding_check(A, partner, k, tol))
    reports.append(cor2_check(A, partner, k, tol))
    if k >= 2:
        # a partner diagonal with a non-positive entry cannot serve as weights
        weights = partner.diagonal()
        reports.append(diagonal_garding_check(A, weights if np.all(weights > 0) else np.ones(A.n), k, tol))
    reports.append(deletion_identity_check(A, k, tol))
    reports.append(zeroing_chain_check(A, k, tol))
    if A.n >= 2 and k >= 2:
        _, bordered = border_reduce(A, A.n)
        reports.append(expand_lemma_check(bordered, k, tol))
    if A.n > k >= 2:
        reports.extend(key_lemma_check(A, j, k, tol) for j in range(1, A.n + 1))
    if k >= 2 and k < A.n:
        reports.append(step1_check(A, k - 1, tol=tol))
    if k == 3:
        reports.append(cubic_base_check(A, tol))
    return reports
