import logging

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kpos_oracle.errors import DomainError
from kpos_oracle.linalg.matrix import SymMatrix, deleted, random_symmetric
from kpos_oracle.linalg.symfunc import (
    Spectrum,
    diag_esp,
    esp,
    esp_linear,
    esp_newton,
    esp_table,
    minor_sum,
    principal_minor_sum,
    sk_charpoly,
    sk_gradient,
    sk_matrix,
    sk_partial,
)


def test_esp_table_of_small_vector():
    np.testing.assert_allclose(esp_table([1.0, 2.0, 3.0]).tolist(), [1.0, 6.0, 11.0, 6.0])
    assert esp([1.0, 2.0, 3.0], 0) == 1.0
    assert esp_table([1.0, 2.0])[5] == 0.0


@seed(1)
@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (6,), elements=st.floats(min_value=-3.0, max_value=3.0)))
def test_recurrence_matches_newton(lam):
    table = esp_table(lam)
    for k in range(7):
        assert esp_newton(lam, k) == pytest.approx(table[k], rel=1e-7, abs=1e-7 * (1.0 + np.max(np.abs(lam))) ** k)


def test_esp_linear_closed_form():
    poly = esp_linear(np.ones(3), np.array([1.0, 2.0, 3.0]), 2)
    np.testing.assert_allclose(poly.coef, [11.0, 12.0, 3.0])


def test_esp_linear_agrees_with_pointwise_values(rng):
    b = rng.standard_normal(5)
    x = rng.standard_normal(5)
    for k in range(6):
        poly = esp_linear(b, x, k)
        for t in (-1.5, 0.0, 0.7, 2.0):
            assert poly(t) == pytest.approx(esp_table(t * b + x)[k], abs=1e-10)


def test_spectrum_rejects_non_finite():
    with pytest.raises(DomainError):
        Spectrum([1.0, np.inf])


def test_three_routes_agree(random_matrices):
    for A in random_matrices:
        charpoly = sk_charpoly(A)
        scale_base = 1.0 + A.frobenius_norm()
        for k in range(A.n + 1):
            via_eigen = sk_matrix(A, k)
            tolerance = 1e-8 * scale_base ** k
            assert abs(minor_sum(A, k) - via_eigen) <= tolerance
            assert abs(charpoly[k] - via_eigen) <= tolerance


def test_second_order_formula(random_matrices):
    for A in random_matrices:
        off = float(np.sum(np.triu(A.dense, 1) ** 2))
        assert minor_sum(A, 2) == pytest.approx(diag_esp(A, 2) - off, abs=1e-9 * (1.0 + A.frobenius_norm()) ** 2)


def test_partials_match_finite_differences(rng):
    A = random_symmetric(4, rng)
    h = 1e-3
    for k in range(1, 5):
        for i in range(1, 5):
            for j in range(1, 5):
                bump = np.zeros((4, 4))
                bump[i - 1, j - 1] = h
                # determinants are affine in each single entry
                central = (principal_minor_sum(A.dense + bump, k) - principal_minor_sum(A.dense - bump, k)) / (2 * h)
                exact = sk_partial(A, k, i, j)
                assert exact == pytest.approx(central, abs=1e-6 * (1.0 + abs(exact)) * (1.0 + A.max_norm()) ** k)


def test_euler_relation(random_matrices):
    for A in random_matrices:
        for k in range(1, A.n + 1):
            lhs = float(np.sum(A.dense * sk_gradient(A, k)))
            assert lhs == pytest.approx(k * minor_sum(A, k), abs=1e-8 * (1.0 + A.frobenius_norm()) ** k)


def test_diagonal_partial_is_deleted_minor_sum(rng):
    A = random_symmetric(5, rng)
    for i in range(1, 6):
        assert sk_partial(A, 3, i, i) == pytest.approx(minor_sum(deleted(A, i), 2))
    assert sk_partial(A, 1, 2, 2) == 1.0
    assert sk_partial(A, 1, 1, 2) == 0.0


def test_order_checks():
    A = SymMatrix.identity(3)
    with pytest.raises(DomainError):
        sk_matrix(A, 4)
    with pytest.raises(DomainError):
        sk_partial(A, 0, 1, 1)
    with pytest.raises(DomainError):
        diag_esp(A, -1)


def test_minor_sum_warns_on_large_matrices(caplog):
    with caplog.at_level(logging.WARNING, logger="kpos_oracle.linalg.symfunc"):
        assert minor_sum(SymMatrix.identity(17), 1) == pytest.approx(17.0)
    assert "enumerates" in caplog.text


@seed(3)
@settings(max_examples=60, deadline=None)
@given(
    arrays(np.float64, 6, elements=st.floats(-3.0, 3.0)),
    st.floats(-2.0, 2.0),
    st.permutations(list(range(6))),
)
def test_esp_is_homogeneous_and_symmetric(lam, c, order):
    table = esp_table(lam)
    scaled = esp_table(c * lam)
    permuted = esp_table(lam[list(order)])
    for k in range(7):
        bound = 1e-10 * 4.0 ** k * 3.0 ** k
        assert scaled[k] == pytest.approx(c ** k * table[k], abs=bound)
        assert permuted[k] == pytest.approx(table[k], abs=bound)
