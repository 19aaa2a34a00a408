from dataclasses import replace
from types import SimpleNamespace

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from kpos_oracle.cones import ConeQuery, gamma_member, k_positive
from kpos_oracle.config import Status
from kpos_oracle.errors import DomainError, NotHyperbolicError
from kpos_oracle.hyperbolic import (
    HyperbolicPolynomial,
    _escalate,
    _escalate_cone,
    a_eigenvalues,
    conjecture_check,
    convexity_probe,
    garding_member,
    make_detminor_poly,
    make_diagonal_detminor_poly,
    make_product_poly,
    make_sk_poly,
    product_trace_identity,
    real_roots,
    univariate_restriction,
    verify_homogeneity,
    verify_symmetry,
)
from kpos_oracle.inequalities import hadamard_check
from kpos_oracle.linalg.matrix import SymMatrix, eigen, random_symmetric
from kpos_oracle.linalg.symfunc import esp_table
from kpos_oracle.sampling import rng_for, sample_gamma, sample_matrix, sample_product_cone, sample_product_matrix
from kpos_oracle.transfer import pcor_check


def test_restriction_of_s2():
    P = make_sk_poly(3, 2)
    poly = univariate_restriction(P, np.ones(3), [1.0, 2.0, 3.0])
    np.testing.assert_allclose(poly.coef, [11.0, 12.0, 3.0], atol=1e-12)


def test_restriction_at_origin_is_the_leading_term():
    poly = univariate_restriction(make_sk_poly(3, 3), np.ones(3), np.zeros(3))
    np.testing.assert_allclose(poly.coef, [0.0, 0.0, 0.0, 1.0], atol=1e-12)


def test_eigenvalues_of_s2():
    lam = a_eigenvalues(make_sk_poly(3, 2), np.ones(3), [1.0, 2.0, 3.0]).roots
    np.testing.assert_allclose(lam, [2.0 + 1.0 / np.sqrt(3.0), 2.0 - 1.0 / np.sqrt(3.0)], atol=1e-9)


def test_top_degree_eigenvalues_are_coordinates():
    lam = a_eigenvalues(make_sk_poly(3, 3), np.ones(3), [3.0, -1.0, 2.0]).roots
    np.testing.assert_allclose(lam, [3.0, 2.0, -1.0], atol=1e-8)


def test_multiple_eigenvalue_along_the_direction():
    lam = a_eigenvalues(make_sk_poly(4, 2), np.ones(4), np.full(4, 2.5)).roots
    np.testing.assert_allclose(lam, [2.5, 2.5], atol=1e-6)


def test_real_roots():
    cubic = Polynomial([-6.0, 11.0, -6.0, 1.0])
    np.testing.assert_allclose(real_roots(cubic), [1.0, 2.0, 3.0], atol=1e-10)
    with pytest.raises(NotHyperbolicError):
        real_roots(Polynomial([1.0, 0.0, 1.0]))


def test_garding_cone_of_sk_is_gamma_k(rng):
    checked = 0
    for _ in range(60):
        x = rng.standard_normal(5) + 0.3
        for k in range(1, 6):
            direct = gamma_member(x, ConeQuery(5, k))
            via_roots = garding_member(make_sk_poly(5, k), np.ones(5), x)
            if direct.boundary or via_roots.boundary or abs(direct.margin) < 1e-6 or abs(via_roots.margin) < 1e-6:
                continue
            assert direct.member == via_roots.member
            checked += 1
    assert checked > 100


def test_direction_is_inside_its_cone():
    verdict = garding_member(make_sk_poly(4, 3), np.ones(4), np.ones(4))
    assert verdict.member
    np.testing.assert_allclose(verdict.level_margins, [0.5, 0.5, 0.5])


def test_garding_cone_does_not_depend_on_the_direction(rng):
    cases = [
        (make_sk_poly(5, 3), sample_gamma(5, 3, 8).values),
        (make_product_poly(5, 2), sample_product_cone(5, 2, 8).values),
    ]
    for P, b in cases:
        assert garding_member(P, P.direction, b).member
        assert np.ptp(b / P.direction) > 1e-3
        compared = 0
        for _ in range(80):
            x = rng.standard_normal(5) + 0.4
            along_a = garding_member(P, P.direction, x)
            along_b = garding_member(P, b, x)
            if min(abs(along_a.margin), abs(along_b.margin)) < 1e-6:
                continue
            assert along_a.member == along_b.member
            compared += 1
        assert compared > 40


def test_restriction_factors_over_the_eigenvalues(rng):
    for P in (make_sk_poly(5, 3), make_product_poly(4, 2)):
        for a in (P.direction, P.direction + 0.25 * rng.uniform(size=P.arity)):
            for _ in range(10):
                x = rng.standard_normal(P.arity)
                lam = a_eigenvalues(P, a, x).roots
                for t in rng.uniform(-3.0, 3.0, size=4):
                    direct = P(t * a + x)
                    factored = P(a) * np.prod(t + lam)
                    scale = P(a) * np.prod(abs(t) + np.abs(lam) + 1.0)
                    assert abs(direct - factored) <= 1e-8 * scale


def test_product_family(rng):
    for n in (3, 4, 5):
        x = rng.standard_normal(n)
        table = esp_table(x)
        assert make_product_poly(n, 1)(x) == pytest.approx(table[n], abs=1e-12)
        assert make_product_poly(n, n)(x) == pytest.approx(table[1], abs=1e-12)
    P = make_product_poly(4, 2)
    assert P.degree == 6
    assert garding_member(P, P.direction, [1.0, 1.0, 1.0, -0.5]).member
    assert not garding_member(P, P.direction, [1.0, 1.0, -1.5, 0.2]).member


def test_product_trace_identity(random_matrices):
    for A in random_matrices:
        lhs, rhs = product_trace_identity(A)
        assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-8 * (1.0 + A.frobenius_norm()) ** (A.n))


def test_product_matrix_route_is_the_determinant_of_d_a(rng):
    A = random_symmetric(4, rng)
    P = make_product_poly(4, 2)
    assert P.matrix_route(A) == pytest.approx(P(eigen(A).values), rel=1e-8, abs=1e-6)


def test_detminor_on_matrices(rng):
    n, k = 3, 2
    P = make_detminor_poly(n, k)
    identity = SymMatrix.identity(n).packed
    twice = 2.0 * identity
    checked = 0
    for _ in range(30):
        A = random_symmetric(n, rng, bound=2.0) + SymMatrix.identity(n)
        verdict = k_positive(A, ConeQuery(n, k))
        if abs(verdict.margin) < 1e-6:
            continue
        assert garding_member(P, identity, A.packed).member == verdict.member
        assert garding_member(P, twice, A.packed).member == verdict.member
        checked += 1
    assert checked > 0


def test_detminor_on_diagonal_matches_sk(rng):
    x = rng.standard_normal(5)
    for k in range(1, 6):
        assert make_diagonal_detminor_poly(5, k)(x) == pytest.approx(esp_table(x)[k], rel=1e-9, abs=1e-9)


def test_structure_checks():
    assert verify_symmetry(make_sk_poly(4, 2))
    assert verify_homogeneity(make_sk_poly(4, 2))
    assert verify_homogeneity(make_detminor_poly(3, 2))
    lopsided = HyperbolicPolynomial(name="x_1", arity=3, degree=1, direction=np.ones(3), evaluator=lambda x: x[0])
    assert not verify_symmetry(lopsided)
    report = conjecture_check(lopsided, SymMatrix.identity(3))
    assert report.status is Status.INAPPLICABLE


def test_direction_must_be_positive():
    with pytest.raises(DomainError):
        HyperbolicPolynomial(name="-S_1", arity=2, degree=1, direction=np.ones(2), evaluator=lambda x: -x.sum())


def test_conjecture_on_sk_family():
    for i in range(5):
        A = sample_matrix(5, 3, rng_for(21, i))
        report = conjecture_check(make_sk_poly(5, 3), A, provenance={"trial_index": i})
        assert report.status is not Status.VIOLATED
        assert report.provenance == {"trial_index": i}
        assert report.margin == pytest.approx(hadamard_check(A, 3).margin, abs=1e-9)
    diagonal = conjecture_check(make_sk_poly(4, 2), SymMatrix.diagonal_matrix([1.0, 2.0, 3.0, 4.0]))
    assert diagonal.status is Status.EQUALITY


def test_conjecture_arity_mismatch():
    report = conjecture_check(make_sk_poly(4, 2), SymMatrix.identity(3))
    assert report.status is Status.INAPPLICABLE


def test_conjecture_on_products_matches_lifted_hadamard():
    for p in (1, 2, 3):
        A = sample_product_matrix(4, p, rng_for(5, p))
        report = conjecture_check(make_product_poly(4, p), A)
        lifted = pcor_check(A, p, make_product_poly(4, p).degree)
        assert report.status is not Status.VIOLATED
        assert lifted.status is not Status.INAPPLICABLE
        assert report.margin == pytest.approx(lifted.margin, abs=1e-9)


def _rescaled_eigen(first, loose, tight):
    """eigen stand-in whose values depend on the requested Jacobi target"""
    def fake(A, max_sweeps=30, rel_target=None):
        factor = first if rel_target is None else (loose if rel_target > 5e-14 else tight)
        return SimpleNamespace(values=eigen(A).values * factor)
    return fake


def test_escalation_rereads_a_rounding_level_candidate():
    A = SymMatrix.diagonal_matrix([1.0, 2.0, 3.0, 4.0])
    escalation = _escalate(make_sk_poly(4, 3), A, A.diagonal(), floor=1.0)
    assert set(escalation["status_by_level"].values()) == {Status.EQUALITY.value}
    assert all(abs(m) < 1e-12 for m in escalation["margins_by_level"].values())
    assert abs(escalation["matrix_route"]["margin"]) < 1e-12
    assert not escalation["confirmed"]


def test_escalation_levels_use_their_own_bands():
    A = SymMatrix.diagonal_matrix([1.0, 2.0, 3.0, 4.0])
    escalation = _escalate(make_sk_poly(4, 3), A, A.diagonal() * (1.0 - 1e-10), floor=1.0)
    assert escalation["status_by_level"] == {"1e-09": Status.EQUALITY.value, "1e-11": Status.VIOLATED.value}
    assert escalation["margins_by_level"]["1e-11"] == pytest.approx(-3e-10, rel=1e-3)
    assert not escalation["confirmed"]


def test_escalation_confirms_a_real_gap(pd_matrix):
    A = SymMatrix.diagonal_matrix([1.0, 2.0, 3.0, 4.0])
    escalation = _escalate(make_sk_poly(4, 3), A, 0.5 * A.diagonal(), floor=1.0)
    assert escalation["confirmed"]
    assert escalation["best_margin"] == pytest.approx(-0.875)
    positive = _escalate(make_sk_poly(4, 3), pd_matrix, pd_matrix.diagonal(), floor=1.0)
    assert set(positive["status_by_level"].values()) == {Status.HOLDS.value}
    assert positive["matrix_route"]["margin"] > 0
    assert not positive["confirmed"]


def test_unconfirmed_candidate_keeps_a_consistent_status(pd_matrix, monkeypatch, tol):
    monkeypatch.setattr("kpos_oracle.hyperbolic.eigen", _rescaled_eigen(1.5, 1.0, 1.0))
    report = conjecture_check(make_sk_poly(4, 3), pd_matrix)
    assert report.witness["unconfirmed_margin"] < -1e-9
    assert not report.witness["escalation"]["confirmed"]
    assert report.status is tol.classify(report.margin)
    assert report.status is Status.HOLDS
    assert report.margin == pytest.approx(hadamard_check(pd_matrix, 3).margin, abs=1e-9)


def test_candidate_the_levels_disagree_on_is_inapplicable(monkeypatch):
    monkeypatch.setattr("kpos_oracle.hyperbolic.eigen", _rescaled_eigen(1.5, 1.001, 1.5))
    P = replace(make_sk_poly(4, 3), matrix_route=None)
    report = conjecture_check(P, SymMatrix.diagonal_matrix([1.0, 2.0, 3.0, 4.0]))
    escalation = report.witness["escalation"]
    assert set(escalation["status_by_level"].values()) == {Status.VIOLATED.value}
    assert escalation["noise"] > abs(escalation["best_margin"])
    assert report.status is Status.INAPPLICABLE
    assert not report.is_candidate


def test_cone_escalation():
    P = make_sk_poly(3, 2)
    outside = _escalate_cone(P, np.array([1.0, 1.0, -5.0]))
    assert outside["confirmed"]
    assert outside["roots_margin"] < 0
    boundary = _escalate_cone(P, np.array([1.0, 1.0, -0.5]))
    assert set(boundary["status_by_level"].values()) == {Status.EQUALITY.value}
    assert not boundary["confirmed"]


def test_convexity_probe():
    for P in (make_sk_poly(5, 3), make_product_poly(4, 2)):
        report = convexity_probe(P, trials=30, seed=4)
        assert report.status is not Status.VIOLATED
        assert report.witness["failures"] == []
    report = convexity_probe(make_detminor_poly(3, 2), trials=10, seed=1)
    assert report.witness["failures"] == []
