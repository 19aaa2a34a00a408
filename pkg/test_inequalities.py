import json

import numpy as np
import pytest

from kpos_oracle.config import Status
from kpos_oracle.inequalities import (
    cor1_check,
    cor2_check,
    cubic_base_check,
    deletion_identity_check,
    diagonal_garding_check,
    expand_lemma_check,
    full_suite,
    garding_check,
    hadamard_check,
    key_lemma_check,
    remark_check,
    step1_check,
    zeroing_chain_check,
)
from kpos_oracle.linalg.matrix import SymMatrix, border_reduce, random_symmetric, zero_border
from kpos_oracle.linalg.symfunc import diag_esp
from kpos_oracle.sampling import Profile, rng_for, sample_matrix


def test_second_order_example():
    report = hadamard_check(SymMatrix.from_dense([[2.0, 1.0], [1.0, 2.0]]), 2)
    assert report.statement == "second-order-identity"
    assert report.lhs == pytest.approx(4.0)
    assert report.rhs == pytest.approx(3.0)
    assert report.margin == pytest.approx(0.25)
    assert report.status is Status.HOLDS


def test_second_order_without_positivity():
    report = remark_check(SymMatrix.from_dense([[1.0, 3.0], [3.0, 1.0]]), 2)
    assert report.lhs == pytest.approx(1.0)
    assert report.rhs == pytest.approx(-8.0)
    assert report.lhs - report.rhs == pytest.approx(9.0)
    assert report.witness["off_diagonal_square_sum"] == pytest.approx(9.0)
    assert report.witness["identity_holds"]


def test_trace_identity(random_matrices):
    for A in random_matrices:
        report = hadamard_check(A, 1)
        assert report.statement == "trace-identity"
        assert report.status is Status.EQUALITY


def test_second_order_identity_on_random_matrices(random_matrices):
    for A in random_matrices:
        report = remark_check(A, 2)
        assert report.witness["identity_holds"]
        assert report.status is not Status.VIOLATED or A.off_diagonal_max() == 0.0


def test_hadamard_diagonal_equality():
    report = hadamard_check(SymMatrix.diagonal_matrix([1.0, 2.0, 3.0, 4.0]), 3)
    assert report.statement == "hadamard-type"
    assert report.status is Status.EQUALITY
    assert report.witness["near_diagonal"]


def test_equality_needs_a_near_diagonal_matrix():
    dense = np.diag([1.0, 2.0, 3.0, 4.0])
    dense[0, 1] = dense[1, 0] = 2e-5
    A = SymMatrix.from_dense(dense)
    for k in (2, 3):
        report = hadamard_check(A, k)
        assert abs(report.margin) <= 1e-9
        assert not report.witness["near_diagonal"]
        assert report.status is Status.HOLDS
    dense[0, 1] = dense[1, 0] = 1e-6
    assert hadamard_check(SymMatrix.from_dense(dense), 3).status is Status.EQUALITY


def test_second_order_identity_failure_is_a_violation(monkeypatch):
    monkeypatch.setattr("kpos_oracle.inequalities.sk_matrix", lambda A, k: 2.0)
    report = remark_check(SymMatrix.from_dense([[2.0, 1.0], [1.0, 2.0]]), 2)
    assert report.margin > 0
    assert not report.witness["identity_holds"]
    assert report.status is Status.VIOLATED


def test_hadamard_small_perturbation():
    A = SymMatrix.from_dense(np.eye(4) + 0.1 * (np.ones((4, 4)) - np.eye(4)))
    report = hadamard_check(A, 3)
    assert report.lhs == pytest.approx(4.0)
    assert report.rhs == pytest.approx(3.888)
    assert report.status is Status.HOLDS


def test_hadamard_determinant(pd_matrix):
    report = hadamard_check(pd_matrix, 4)
    assert report.statement == "hadamard-determinant"
    assert report.witness["classical"]
    assert report.status is Status.HOLDS
    assert report.rhs == pytest.approx(np.linalg.det(pd_matrix.dense))


def test_hadamard_inapplicable():
    report = hadamard_check(SymMatrix.diagonal_matrix([1.0, 1.0, -5.0]), 3)
    assert report.status is Status.INAPPLICABLE
    assert json.loads(json.dumps(report.to_dict()))["margin"] is None


def test_hadamard_on_samples(k_positive_samples):
    for n, k, A in k_positive_samples:
        report = hadamard_check(A, k)
        assert report.status is not Status.VIOLATED
        if k >= 2:
            assert report.status is not Status.EQUALITY or report.witness["near_diagonal"]


def test_near_diagonal_samples_hold_strictly():
    for i in range(3):
        A = sample_matrix(5, 3, rng_for(7, i), Profile.NEAR_DIAGONAL)
        assert hadamard_check(A, 3).status is Status.HOLDS


def test_diagonal_cone(k_positive_samples):
    for n, k, A in k_positive_samples:
        report = cor1_check(A, k)
        assert report.status is not Status.VIOLATED
        assert report.witness["diagonal_first_failing_j"] is None


def test_bordered_expansion_example():
    x, y = 0.3, 0.4
    A = SymMatrix.from_dense([[1.0, 0.0, x], [0.0, 1.0, y], [x, y, 1.0]])
    report = expand_lemma_check(A, 2)
    assert report.lhs == pytest.approx(3.0 - x * x - y * y)
    assert report.rhs == pytest.approx(2.75)
    assert report.status is Status.EQUALITY


def test_bordered_expansion_on_arrow_matrices(rng):
    for n in (4, 5):
        A = np.diag(rng.uniform(0.5, 3.0, n))
        A[-1, :-1] = A[:-1, -1] = rng.uniform(-1.0, 1.0, n - 1)
        for k in range(2, n + 1):
            assert expand_lemma_check(SymMatrix.from_dense(A), k).status is Status.EQUALITY


def test_bordered_expansion_after_reduction(random_matrices):
    for A in random_matrices:
        _, B = border_reduce(A, A.n)
        for k in range(2, A.n + 1):
            assert expand_lemma_check(B, k).status is Status.EQUALITY


def test_bordered_expansion_needs_diagonal_head():
    A = SymMatrix.from_dense([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]])
    assert expand_lemma_check(A, 2).status is Status.INAPPLICABLE


def test_deletion_bound_with_zero_border(k_positive_samples):
    for n, k, A in k_positive_samples:
        if not n > k >= 2:
            continue
        report = key_lemma_check(zero_border(A, n), n, k)
        assert report.status is Status.EQUALITY
        assert report.witness["equality_consistent"]


def test_deletion_bound_on_samples(k_positive_samples):
    for n, k, A in k_positive_samples:
        if not n > k >= 2:
            continue
        for j in range(1, n + 1):
            report = key_lemma_check(A, j, k)
            assert report.status is not Status.VIOLATED
            assert abs(report.witness["zero_border_gap"]) < 1e-9


def test_deletion_bound_preconditions(pd_matrix):
    assert key_lemma_check(pd_matrix, 1, 4).status is Status.INAPPLICABLE
    assert key_lemma_check(pd_matrix, 5, 2).status is Status.INAPPLICABLE
    assert key_lemma_check(pd_matrix, 1, 1).status is Status.INAPPLICABLE


def test_zeroing_step(k_positive_samples):
    for n, k, A in k_positive_samples:
        if not 2 <= k < n:
            continue
        for j in (1, n):
            report = step1_check(A, k - 1, j)
            assert report.status is not Status.VIOLATED
            assert min(report.witness["level_margins"]) >= -1e-9


def test_zeroing_step_preconditions(pd_matrix):
    assert step1_check(pd_matrix, 3).status is Status.INAPPLICABLE
    assert step1_check(SymMatrix.diagonal_matrix([1.0, 1.0, -5.0, 1.0]), 1).status is Status.INAPPLICABLE


def test_zeroing_chain(k_positive_samples):
    for n, k, A in k_positive_samples:
        report = zeroing_chain_check(A, k)
        assert report.status is not Status.VIOLATED
        assert len(report.witness["values"]) == n + 1
        assert report.witness["values"][-1] == pytest.approx(diag_esp(A, k), rel=1e-9, abs=1e-12)


def test_deletion_identity(random_matrices):
    for A in random_matrices:
        for k in range(0, A.n + 1):
            assert deletion_identity_check(A, k).status is Status.EQUALITY


def test_cubic_base_case(k_positive_samples):
    ran = 0
    for n, k, A in k_positive_samples:
        if k != 3:
            continue
        report = cubic_base_check(A)
        assert report.status is not Status.VIOLATED
        assert abs(report.witness["identity_residual"]) <= 1e-9
        ran += 1
    assert ran > 0
    assert cubic_base_check(SymMatrix.identity(3)).status is Status.INAPPLICABLE


def test_garding_identity_equality():
    for n in (3, 4, 5):
        for k in range(1, n + 1):
            report = garding_check(SymMatrix.identity(n), SymMatrix.identity(n), k)
            assert report.status is Status.EQUALITY


def test_garding_self_pairing_is_euler(k_positive_samples):
    for n, k, A in k_positive_samples:
        report = garding_check(A, A, k)
        assert report.status is Status.EQUALITY
        assert report.lhs == pytest.approx(report.witness["euler_value"], rel=1e-8)


def test_garding_scaling_invariance():
    A = sample_matrix(5, 3, rng_for(3, 0))
    D = sample_matrix(5, 3, rng_for(3, 1))
    base = garding_check(A, D, 3)
    scaled = garding_check(A.scaled(3.0), D.scaled(3.0), 3)
    assert base.status is not Status.VIOLATED
    assert abs(base.margin - scaled.margin) < 1e-9


def test_garding_pairs():
    for i in range(6):
        A = sample_matrix(5, 3, rng_for(11, 2 * i))
        D = sample_matrix(5, 3, rng_for(11, 2 * i + 1))
        assert garding_check(A, D, 3).status is not Status.VIOLATED
        assert diagonal_garding_check(A, rng_for(11, 50 + i).uniform(0.1, 2.0, 5), 3).status is not Status.VIOLATED


def test_garding_preconditions(pd_matrix):
    assert garding_check(pd_matrix, SymMatrix.identity(3), 2).status is Status.INAPPLICABLE
    assert garding_check(pd_matrix, SymMatrix.diagonal_matrix([1.0, 1.0, 1.0, -9.0]), 4).status is Status.INAPPLICABLE
    assert diagonal_garding_check(pd_matrix, [1.0, -1.0, 1.0, 1.0], 2).status is Status.INAPPLICABLE


def test_mixed_diagonal_matches_diagonal_garding(pd_matrix):
    b = np.array([0.5, 1.0, 1.5, 2.0])
    for k in range(2, 5):
        mixed = cor2_check(pd_matrix, SymMatrix.diagonal_matrix(b), k)
        garding = garding_check(pd_matrix, SymMatrix.diagonal_matrix(b), k)
        assert mixed.lhs == pytest.approx(garding.lhs, rel=1e-9)
        assert mixed.rhs == pytest.approx(garding.rhs, rel=1e-9)
        assert abs(mixed.witness["route_gap"]) < 1e-9


def test_mixed_diagonal_identity_pair():
    assert cor2_check(SymMatrix.identity(4), SymMatrix.identity(4), 3).status is Status.EQUALITY


def test_full_suite_on_samples(k_positive_samples):
    for n, k, A in k_positive_samples:
        reports = full_suite(A, k)
        assert reports
        bad = [r for r in reports if r.status is Status.VIOLATED]
        assert not bad, [(r.statement, r.margin) for r in bad]
        for report in reports:
            json.dumps(report.to_dict())


def test_full_suite_on_random_matrices_never_raises(rng):
    for n in (2, 3, 4):
        A = random_symmetric(n, rng)
        for k in range(1, n + 1):
            statuses = {r.statement: r.status for r in full_suite(A, k)}
            assert statuses["deletion-identity"] is Status.EQUALITY


def test_full_suite_weights_the_diagonal_garding_check_with_the_partner(pd_matrix):
    reports = {r.statement: r for r in full_suite(pd_matrix, 3, SymMatrix.diagonal_matrix([1.0, 2.0, 3.0, 4.0]))}
    weighted = reports["garding-diagonal"]
    assert weighted.status is Status.HOLDS
    assert weighted.margin == pytest.approx(diagonal_garding_check(pd_matrix, [1.0, 2.0, 3.0, 4.0], 3).margin)
    signed = {r.statement: r for r in full_suite(pd_matrix, 2, SymMatrix.diagonal_matrix([3.0, 2.0, 1.0, -0.5]))}
    assert signed["garding-diagonal"].margin == pytest.approx(diagonal_garding_check(pd_matrix, np.ones(4), 2).margin)
