"""
Hyperbolic polynomials, their a-eigenvalues and Gårding cones.

P is hyperbolic in direction a when P(a) > 0 and t ↦ P(ta + x) has only
real roots for every x. Writing P(ta + x) = P(a)·∏(t + λ_i), the λ_i are
the a-eigenvalues of x and Γ_a(P) is where they are all positive.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from tenacity import RetryError, retry, retry_if_exception_type, stop_after_attempt

from .cones import ConeVerdict
from .config import DEFAULT_TOLERANCE, ESCALATION_LEVELS, REJECTION_BUDGET, Status, ToleranceConfig
from .errors import DomainError, NotHyperbolicError, NumericError
from .linalg.derivation import derivation_matrix, lambda_brackets
from .linalg.matrix import JACOBI_REL_TARGET, SymMatrix, eigen
from .linalg.symfunc import esp_linear, esp_table, minor_sum, sk_charpoly, sk_matrix
from .reports import InequalityReport, compare, inapplicable
from .sampling import SampleRejected, rng_for

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], float]
Restriction = Callable[[np.ndarray, np.ndarray], Optional[Polynomial]]
EigenHook = Callable[[np.ndarray, np.ndarray], Optional[np.ndarray]]

ROOT_RESIDUAL_TOL = 1e-7
ROOT_TOUCH_TOL = 1e-9
VANDERMONDE_COND_MAX = 1e12
CROSS_CHECK_DEGREE = 12
CROSS_CHECK_TOL = 1e-6
SYMMETRY_TOL = 1e-8
ESCALATION_JACOBI_FLOOR = 1e-15


@dataclass(frozen=True, eq=False)
class HyperbolicPolynomial:
    """Homogeneous P of ``degree`` on ℝ^arity, hyperbolic in ``direction``.

    ``restriction`` and ``eigen_hook`` are optional closed forms for
    P(ta + x) and for the a-eigenvalues; either may return None to fall
    back to interpolation and root finding. ``matrix_route`` evaluates
    P(λ(A)) without an eigensolver and backs the conjecture escalation.
    """

    name: str
    arity: int
    degree: int
    direction: np.ndarray = field(repr=False)
    evaluator: Evaluator = field(repr=False)
    symmetric: bool = False
    restriction: Optional[Restriction] = field(default=None, repr=False)
    eigen_hook: Optional[EigenHook] = field(default=None, repr=False)
    matrix_route: Optional[Callable[[SymMatrix], float]] = field(default=None, repr=False)
    params: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        a = np.array(self.direction, dtype=float).reshape(-1)
        if a.size != self.arity:
            raise DomainError(f"direction has {a.size} coordinates, polynomial has arity {self.arity}")
        a.flags.writeable = False
        object.__setattr__(self, "direction", a)
        if self.degree < 1:
            raise DomainError(f"degree must be >= 1, got {self.degree}")
        if not self(a) > 0:
            raise DomainError(f"{self.name}: P(a) = {self(a):.3e} is not positive")

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.arity,):
            raise DomainError(f"{self.name} takes {self.arity} coordinates, got shape {x.shape}")
        return float(self.evaluator(x))


@dataclass(frozen=True, eq=False)
class AEigenvalues:
    roots: np.ndarray
    residual: float

    def __len__(self) -> int:
        return int(self.roots.size)


def _check_point(P: HyperbolicPolynomial, a, x) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float).reshape(-1)
    x = np.asarray(x, dtype=float).reshape(-1)
    if a.size != P.arity or x.size != P.arity:
        raise DomainError(f"{P.name} takes {P.arity} coordinates, got {a.size} and {x.size}")
    if not P(a) > 0:
        raise DomainError(f"{P.name}: P(a) is not positive in the requested direction")
    return a, x


def _interpolation_nodes(count: int) -> np.ndarray:
    nodes = [0.0]
    step = 1
    while len(nodes) < count:
        nodes.extend([float(step), float(-step)])
        step += 1
    return np.asarray(nodes[:count])


def _interpolate(P: HyperbolicPolynomial, a: np.ndarray, x: np.ndarray) -> Polynomial:
    nodes = _interpolation_nodes(P.degree + 1)
    vander = np.vander(nodes, P.degree + 1, increasing=True)
    cond = float(np.linalg.cond(vander))
    if cond > VANDERMONDE_COND_MAX:
        raise NumericError(f"interpolating a degree-{P.degree} restriction is ill-conditioned (cond {cond:.2e})", cond)
    values = np.array([P(t * a + x) for t in nodes])
    return Polynomial(np.linalg.solve(vander, values))


def univariate_restriction(P: HyperbolicPolynomial, a, x, cross_check: bool = True) -> Polynomial:
    """t ↦ P(ta + x), coefficients in increasing powers of t"""
    a, x = _check_point(P, a, x)
    closed = P.restriction(a, x) if P.restriction is not None else None
    if closed is None:
        return _interpolate(P, a, x)
    if cross_check and P.degree <= CROSS_CHECK_DEGREE:
        sampled = _interpolate(P, a, x)
        width = max(closed.coef.size, sampled.coef.size)
        gap = np.max(np.abs(np.pad(closed.coef, (0, width - closed.coef.size)) - np.pad(sampled.coef, (0, width - sampled.coef.size))))
        scale = 1.0 + float(np.max(np.abs(closed.coef)))
        if gap > CROSS_CHECK_TOL * scale:
            raise NumericError(f"{P.name}: closed-form restriction disagrees with interpolation", gap / scale)
    return closed


def _normalized_value(poly: Polynomial, t: float) -> float:
    weights = np.abs(poly.coef) * np.abs(t) ** np.arange(poly.coef.size)
    return abs(float(poly(t))) / max(float(weights.sum()), np.finfo(float).tiny)


def _bisect(poly: Polynomial, lo: float, hi: float) -> float:
    f_lo = float(poly(lo))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = float(poly(mid))
        if f_mid == 0.0:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def real_roots(poly: Polynomial) -> np.ndarray:
    """All roots of a real-rooted polynomial, ascending.

    The critical points (roots of poly') interlace the roots, so every gap
    between consecutive critical points, closed off by a Cauchy bound,
    holds exactly one root counted with multiplicity. A gap without a sign
    change must end in a multiple root; if it does not, the polynomial has
    a complex pair and NotHyperbolicError is raised.
    """
    poly = poly.trim()
    coef = poly.coef
    degree = coef.size - 1
    if degree < 1:
        return np.empty(0)
    if degree == 1:
        return np.array([-coef[0] / coef[1]])
    critical = real_roots(poly.deriv())
    bound = 1.0 + float(np.max(np.abs(coef[:-1] / coef[-1])))
    edges = [-bound, *np.clip(critical, -bound, bound), bound]
    roots = []
    for lo, hi in zip(edges, edges[1:]):
        f_lo, f_hi = float(poly(lo)), float(poly(hi))
        if f_lo == 0.0:
            roots.append(lo)
        elif f_hi == 0.0:
            roots.append(hi)
        elif (f_lo < 0) != (f_hi < 0):
            roots.append(_bisect(poly, lo, hi))
        else:
            touch = lo if abs(f_lo) <= abs(f_hi) else hi
            residual = _normalized_value(poly, touch)
            if residual > ROOT_TOUCH_TOL:
                raise NotHyperbolicError(f"degree-{degree} restriction has a non-real root pair near t={touch:.6g}", residual)
            roots.append(touch)
    return np.sort(np.asarray(roots, dtype=float))


def a_eigenvalues(P: HyperbolicPolynomial, a, x) -> AEigenvalues:
    """Negated roots of P(ta + x), descending"""
    a, x = _check_point(P, a, x)
    lam = P.eigen_hook(a, x) if P.eigen_hook is not None else None
    if lam is None:
        poly = univariate_restriction(P, a, x, cross_check=False)
        lam = -real_roots(poly)
    lam = np.sort(np.asarray(lam, dtype=float))[::-1]
    spread = 1.0 + 2.0 * float(np.max(np.abs(lam))) if lam.size else 1.0
    scale = P(a) * spread ** P.degree
    residual = max((abs(P(-value * a + x)) / scale for value in lam), default=0.0)
    if residual > ROOT_RESIDUAL_TOL:
        raise NotHyperbolicError(f"{P.name} is not hyperbolic in direction a at this point", residual)
    return AEigenvalues(lam.copy(), residual)


def garding_member(P: HyperbolicPolynomial, a, x, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> ConeVerdict:
    """x ∈ Γ_a(P) iff every a-eigenvalue is positive"""
    lam = a_eigenvalues(P, a, x).roots
    normalized = tuple(float(v) / (1.0 + float(np.max(np.abs(lam)))) for v in lam)
    margin = min(normalized)
    failing = next((i for i, m in enumerate(normalized, start=1) if m <= tol.eps_rel), None)
    return ConeVerdict(
        member=failing is None,
        margin=margin,
        first_failing_j=failing,
        boundary=tol.is_boundary(margin),
        level_margins=normalized,
    )


def make_sk_poly(n: int, k: int) -> HyperbolicPolynomial:
    if not 1 <= k <= n:
        raise DomainError(f"k={k} outside 1..{n}")
    return HyperbolicPolynomial(
        name=f"S_{k}",
        arity=n,
        degree=k,
        direction=np.ones(n),
        evaluator=lambda x: esp_table(x)[k],
        symmetric=True,
        restriction=lambda a, x: esp_linear(a, x, k),
        matrix_route=lambda A: minor_sum(A, k),
        params={"k": k},
    )


def detminor_value(A: SymMatrix, k: int) -> float:
    """P_k(A) = S_k(λ(A)), cross-checked against the coefficient of t^{n-k} in det(tI + A)"""
    value = sk_matrix(A, k)
    other = sk_charpoly(A)[k]
    if abs(value - other) > 1e-8 * max(1.0, abs(value), abs(other)) * (1.0 + A.max_norm()) ** k:
        logger.warning("P_%d routes disagree: eigen %.12g vs charpoly %.12g", k, value, other)
    return value


def make_detminor_poly(n: int, k: int) -> HyperbolicPolynomial:
    """P_k on symmetric matrices, a point being the packed upper triangle (arity n(n+1)/2)"""
    if not 1 <= k <= n:
        raise DomainError(f"k={k} outside 1..{n}")
    identity = SymMatrix.identity(n).packed

    def restriction(a: np.ndarray, x: np.ndarray) -> Optional[Polynomial]:
        if not np.array_equal(a, identity):
            return None
        return esp_linear(np.ones(n), eigen(SymMatrix(n, x)).values, k)

    return HyperbolicPolynomial(
        name=f"P_{k}",
        arity=n * (n + 1) // 2,
        degree=k,
        direction=identity,
        evaluator=lambda x: detminor_value(SymMatrix(n, x), k),
        restriction=restriction,
        params={"k": k},
    )


def make_diagonal_detminor_poly(n: int, k: int) -> HyperbolicPolynomial:
    """x ↦ P_k(diag x) through the trace recursion, no eigensolver involved"""
    if not 1 <= k <= n:
        raise DomainError(f"k={k} outside 1..{n}")
    return HyperbolicPolynomial(
        name=f"P_{k}(diag)",
        arity=n,
        degree=k,
        direction=np.ones(n),
        evaluator=lambda x: sk_charpoly(SymMatrix.diagonal_matrix(x))[k],
        symmetric=True,
        restriction=lambda a, x: esp_linear(a, x, k),
        matrix_route=lambda A: sk_charpoly(A)[k],
        params={"k": k},
    )


def make_product_poly(n: int, p: int) -> HyperbolicPolynomial:
    """𝒫_p(λ) = ∏ over increasing p-tuples of (λ_{i_1} + ... + λ_{i_p})"""
    if not 1 <= p <= n:
        raise DomainError(f"p={p} outside 1..{n}")

    def restriction(a: np.ndarray, x: np.ndarray) -> Polynomial:
        out = Polynomial([1.0])
        for a_sum, x_sum in zip(lambda_brackets(a, p), lambda_brackets(x, p)):
            out = out * Polynomial([x_sum, a_sum])
        return out

    def eigen_hook(a: np.ndarray, x: np.ndarray) -> np.ndarray:
        return lambda_brackets(x, p) / lambda_brackets(a, p)

    def matrix_route(A: SymMatrix) -> float:
        if p == n - 1:
            return float(np.linalg.det(A.trace() * np.eye(n) - A.dense))
        return float(np.linalg.det(derivation_matrix(A, p).matrix.dense))

    return HyperbolicPolynomial(
        name=f"Prod_{p}",
        arity=n,
        degree=comb(n, p),
        direction=np.ones(n),
        evaluator=lambda x: float(np.prod(lambda_brackets(x, p))),
        symmetric=True,
        restriction=restriction,
        eigen_hook=eigen_hook,
        matrix_route=matrix_route,
        params={"p": p},
    )


def product_trace_identity(A: SymMatrix) -> Tuple[float, float]:
    """(𝒫_{n-1}(λ(A)), det(S_1(A)·I - A))"""
    if A.n < 2:
        raise DomainError("needs n >= 2")
    lhs = float(np.prod(lambda_brackets(eigen(A).values, A.n - 1)))
    rhs = float(np.linalg.det(A.trace() * np.eye(A.n) - A.dense))
    return lhs, rhs


@lru_cache(maxsize=128)
def verify_symmetry(P: HyperbolicPolynomial, seed: int = 0, permutations: int = 20, points: int = 20) -> bool:
    """Sampled invariance under coordinate permutations"""
    rng = rng_for(seed, 0)
    for _ in range(points):
        x = rng.standard_normal(P.arity)
        base = P(x)
        for _ in range(permutations):
            moved = P(x[rng.permutation(P.arity)])
            if abs(moved - base) > SYMMETRY_TOL * max(1.0, abs(base)):
                logger.info("%s is not symmetric: %.6g vs %.6g", P.name, moved, base)
                return False
    return True


def verify_homogeneity(P: HyperbolicPolynomial, seed: int = 0, samples: int = 20) -> bool:
    rng = rng_for(seed, 1)
    for _ in range(samples):
        x = rng.standard_normal(P.arity)
        c = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
        lhs, rhs = P(c * x), c ** P.degree * P(x)
        if abs(lhs - rhs) > SYMMETRY_TOL * max(1.0, abs(lhs), abs(rhs)):
            return False
    return True


def _jacobi_target(level: float) -> float:
    """Eigensolver target for an escalation level, tighter levels converge further"""
    return max(JACOBI_REL_TARGET * level / ESCALATION_LEVELS[0], ESCALATION_JACOBI_FLOOR)


def _escalate(P: HyperbolicPolynomial, A: SymMatrix, diag: np.ndarray, floor: float) -> Dict[str, Any]:
    """Recompute a value candidate at every escalation level and through the matrix route.

    Each level reruns Jacobi to its own target, re-checks λ(A) against the
    Gårding cone and classifies the fresh margin in its own band. The spread
    of the readings is taken as rounding noise; a candidate is confirmed only
    when every level reads violated and every reading sits below
    -(tightest level + noise).
    """
    lhs = P(diag)
    margins: Dict[str, Optional[float]] = {}
    statuses: Dict[str, str] = {}
    for level in ESCALATION_LEVELS:
        level_tol = ToleranceConfig(eps_rel=level)
        try:
            lam = eigen(A, rel_target=_jacobi_target(level)).values
            inside = garding_member(P, P.direction, lam, level_tol).member
        except NumericError as exc:
            logger.info("escalation level %.0e could not re-read the candidate: %s", level, exc)
            margins[str(level)], statuses[str(level)] = None, Status.INAPPLICABLE.value
            continue
        rhs = P(lam)
        margin = (lhs - rhs) / max(floor, abs(lhs), abs(rhs))
        margins[str(level)] = margin
        statuses[str(level)] = level_tol.classify(margin).value if inside else Status.INAPPLICABLE.value
    readings = [m for m in margins.values() if m is not None]
    noise = max(readings) - min(readings) if readings else 0.0
    out: Dict[str, Any] = {"margins_by_level": margins, "status_by_level": statuses, "noise": noise}
    if P.matrix_route is not None:
        route_lhs = P.matrix_route(SymMatrix.diagonal_matrix(diag))
        route_rhs = P.matrix_route(A)
        route_margin = (route_lhs - route_rhs) / max(floor, abs(route_lhs), abs(route_rhs))
        out["matrix_route"] = {"lhs": route_lhs, "rhs": route_rhs, "margin": route_margin}
        readings.append(route_margin)
    threshold = -(min(ESCALATION_LEVELS) + noise)
    out["confirmed"] = (
        bool(readings)
        and all(status == Status.VIOLATED.value for status in statuses.values())
        and max(readings) < threshold
    )
    out["best_margin"] = max(readings) if readings else None
    return out


def _escalate_cone(P: HyperbolicPolynomial, x: np.ndarray) -> Dict[str, Any]:
    """Re-check a diagonal outside Γ(P) in every band and by plain root finding"""
    margins: Dict[str, float] = {}
    statuses: Dict[str, str] = {}
    try:
        for level in ESCALATION_LEVELS:
            verdict = garding_member(P, P.direction, x, ToleranceConfig(eps_rel=level))
            margins[str(level)] = verdict.margin
            statuses[str(level)] = ToleranceConfig(eps_rel=level).classify(verdict.margin).value
        lam = -real_roots(univariate_restriction(P, P.direction, x, cross_check=False))
        roots_margin = float(np.min(lam)) / (1.0 + float(np.max(np.abs(lam))))
    except NumericError as exc:
        logger.info("cone escalation could not re-read the diagonal: %s", exc)
        return {"margins_by_level": margins, "status_by_level": statuses, "confirmed": False}
    confirmed = all(status == Status.VIOLATED.value for status in statuses.values()) and roots_margin < -min(ESCALATION_LEVELS)
    return {"margins_by_level": margins, "status_by_level": statuses, "roots_margin": roots_margin, "confirmed": confirmed}


def conjecture_check(
    P: HyperbolicPolynomial,
    A: SymMatrix,
    tol: ToleranceConfig = DEFAULT_TOLERANCE,
    provenance: Optional[Dict[str, Any]] = None,
) -> InequalityReport:
    """P(a_11, ..., a_nn) >= P(λ(A)) for symmetric P with λ(A) ∈ Γ(P).

    The statement is open; a violated-candidate here is evidence, never a
    verdict, and only survives if every escalation level and the second
    route agree. A value candidate that does not survive takes the most
    favourable re-read margin and is classified again; one that still
    reads violated is left inapplicable.
    """
    statement = "hyperbolic-hadamard"
    context = {"n": A.n, "k": P.params.get("k"), "p": P.params.get("p")}
    if P.arity != A.n:
        return inapplicable(statement, f"{P.name} has arity {P.arity}, matrix is {A.n}x{A.n}", tol, **context)
    if not verify_symmetry(P):
        return inapplicable(statement, f"{P.name} is not symmetric in its coordinates", tol, **context)
    lam = eigen(A).values
    diag = A.diagonal()
    try:
        spectrum_verdict = garding_member(P, P.direction, lam, tol)
        diag_verdict = garding_member(P, P.direction, diag, tol)
    except NumericError as exc:
        return inapplicable(statement, str(exc), tol, witness={"family": P.name}, **context)
    if not spectrum_verdict.member:
        return inapplicable(statement, "λ(A) is outside the Garding cone", tol, witness={"family": P.name, "cone_margin": spectrum_verdict.margin}, **context)
    lhs, rhs = P(diag), P(lam)
    report = compare(statement, lhs, rhs, tol, **context)
    report.provenance = dict(provenance or {})
    report.witness = {"family": P.name, "cone_margin": spectrum_verdict.margin, "diagonal_cone_margin": diag_verdict.margin}
    if report.is_candidate:
        escalation = _escalate(P, A, diag, tol.eps_abs)
        report.witness["escalation"] = escalation
        if not escalation["confirmed"]:
            logger.info("%s value candidate not confirmed (margin %.3e)", P.name, report.margin)
            report.witness["unconfirmed_margin"] = report.margin
            if escalation["best_margin"] is not None:
                report.margin = escalation["best_margin"]
                report.status = tol.classify(report.margin)
            if report.is_candidate:
                report.status = Status.INAPPLICABLE
                report.witness["reason"] = "escalation routes disagree on the candidate"
    if not diag_verdict.member and not diag_verdict.boundary:
        cone = _escalate_cone(P, diag)
        report.witness["cone_escalation"] = cone
        if cone["confirmed"]:
            report.status = Status.VIOLATED
        else:
            logger.info("%s diagonal cone failure not confirmed (margin %.3e)", P.name, diag_verdict.margin)
    if report.is_candidate:
        logger.warning("%s candidate survived escalation: n=%d margin=%.3e", P.name, A.n, report.margin)
    return report


def convexity_probe(
    P: HyperbolicPolynomial,
    a=None,
    trials: int = 100,
    seed: int = 0,
    tol: ToleranceConfig = DEFAULT_TOLERANCE,
) -> InequalityReport:
    """Random convex combinations of points of Γ_a(P) must stay inside it"""
    statement = "garding-cone-convexity"
    a = P.direction if a is None else np.asarray(a, dtype=float)
    rng = rng_for(seed, 0)
    sigma = 1.0 + float(np.max(np.abs(a)))

    @retry(stop=stop_after_attempt(REJECTION_BUDGET), retry=retry_if_exception_type(SampleRejected))
    def draw_member() -> np.ndarray:
        x = a + sigma * rng.standard_normal(P.arity)
        if not garding_member(P, a, x, tol).member:
            raise SampleRejected()
        return x

    worst = np.inf
    failures = []
    try:
        for trial in range(trials):
            x, y = draw_member(), draw_member()
            s = rng.uniform()
            verdict = garding_member(P, a, s * x + (1.0 - s) * y, tol)
            worst = min(worst, verdict.margin)
            if not verdict.member and not verdict.boundary:
                failures.append({"trial": trial, "weight": s, "margin": verdict.margin})
    except RetryError:
        return inapplicable(statement, f"no cone points found in {REJECTION_BUDGET} draws", tol, n=P.arity)
    report = InequalityReport(
        statement=statement,
        lhs=float(worst),
        rhs=0.0,
        margin=float(worst),
        status=Status.VIOLATED if failures else tol.classify(worst),
        n=P.arity,
        k=P.params.get("k"),
        p=P.params.get("p"),
        witness={"family": P.name, "trials": trials, "failures": failures},
        tolerance_level=tol.eps_rel,
        provenance={"seed": seed},
    )
    if failures:
        logger.warning("%s: %d convex combinations left the cone", P.name, len(failures))
    return report
