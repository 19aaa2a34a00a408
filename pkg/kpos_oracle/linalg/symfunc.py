"""
Elementary symmetric functions of vectors and of symmetric-matrix spectra.

Three independent routes compute S_k(A):
  * eigenvalues + coefficient recurrence (the public route),
  * sums of principal minors (brute-force oracle),
  * characteristic-polynomial coefficients by the Faddeev–LeVerrier trace
    recursion (eigenvalue-free).
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Union

import numpy as np
from numpy.polynomial import Polynomial

from ..config import MINOR_SUM_ADVISORY_N
from ..errors import DomainError
from .matrix import SymMatrix, deleted, eigen

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """A point λ ∈ ℝⁿ, usually the eigenvalues of a matrix"""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).reshape(-1)
        if not np.all(np.isfinite(vals)):
            raise DomainError("spectrum entries must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Spectrum({np.array2string(self.values, precision=6)})"


SpectrumLike = Union[Spectrum, np.ndarray, Iterable[float]]


def as_spectrum(lam: SpectrumLike) -> Spectrum:
    return lam if isinstance(lam, Spectrum) else Spectrum(np.asarray(lam, dtype=float))


@dataclass(frozen=True, eq=False)
class SymFunctionTable:
    """(S_0, S_1, ..., S_n) of one vector; s[0] is exactly 1"""

    n: int
    s: np.ndarray = field(repr=False)

    def __getitem__(self, k: int) -> float:
        if not 0 <= k <= self.n:
            return 0.0
        return float(self.s[k])

    def __len__(self) -> int:
        return self.n + 1

    def tolist(self) -> list:
        return self.s.tolist()


def esp_table(lam: SpectrumLike) -> SymFunctionTable:
    """Coefficients of ∏(1 + λ_i u), one multiply-accumulate pass per λ_i"""
    vals = as_spectrum(lam).values
    s = np.zeros(vals.size + 1)
    s[0] = 1.0
    for x in vals:
        s[1:] = s[1:] + x * s[:-1]
    s[0] = 1.0
    s.flags.writeable = False
    return SymFunctionTable(vals.size, s)


def esp(lam: SpectrumLike, k: int) -> float:
    return esp_table(lam)[k]


def esp_newton(lam: SpectrumLike, k: int) -> float:
    """S_k through Newton's identities on power sums"""
    vals = as_spectrum(lam).values
    if not 0 <= k <= vals.size:
        raise DomainError(f"order {k} outside 0..{vals.size}")
    power = [float(np.sum(vals ** i)) for i in range(k + 1)]
    e = [1.0]
    for m in range(1, k + 1):
        acc = 0.0
        for i in range(1, m + 1):
            acc += (-1) ** (i - 1) * e[m - i] * power[i]
        e.append(acc / m)
    return e[k]


def esp_linear(direction: np.ndarray, point: np.ndarray, k: int) -> Polynomial:
    """t ↦ S_k(t·direction + point) as a polynomial in t, exactly"""
    b = np.asarray(direction, dtype=float)
    x = np.asarray(point, dtype=float)
    if b.shape != x.shape:
        raise DomainError(f"direction {b.shape} and point {x.shape} differ in shape")
    if not 0 <= k <= x.size:
        raise DomainError(f"order {k} outside 0..{x.size}")
    # table[j] holds the t-coefficients (ascending) of S_j
    table = np.zeros((k + 1, k + 1))
    table[0, 0] = 1.0
    for bi, xi in zip(b, x):
        shifted = np.zeros_like(table)
        shifted[1:, :] += xi * table[:-1, :]
        shifted[1:, 1:] += bi * table[:-1, :-1]
        table = table + shifted
    return Polynomial(table[k])


def principal_minor_sum(matrix: np.ndarray, k: int) -> float:
    """E_k of any square array, entries treated as independent"""
    m = np.asarray(matrix, dtype=float)
    n = m.shape[0]
    if k == 0:
        return 1.0
    if not 1 <= k <= n:
        raise DomainError(f"order {k} outside 1..{n}")
    idx = np.array(list(combinations(range(n), k)), dtype=int)
    blocks = m[idx[:, :, None], idx[:, None, :]]
    return float(np.sum(np.linalg.det(blocks)))


def minor_sum(A: SymMatrix, k: int) -> float:
    """E_k(A): sum of the C(n,k) principal k×k minors. Brute-force oracle."""
    if A.n > MINOR_SUM_ADVISORY_N:
        logger.warning("minor_sum on n=%d enumerates %d minors", A.n, comb(A.n, k))
    return principal_minor_sum(A.dense, k)


def sk_matrix(A: SymMatrix, k: int) -> float:
    if not 0 <= k <= A.n:
        raise DomainError(f"order {k} outside 0..{A.n}")
    return esp_table(eigen(A).values)[k]


def sk_charpoly(A: SymMatrix) -> SymFunctionTable:
    """S_0..S_n of λ(A) as coefficients of det(tI + A), by the trace recursion"""
    a = A.dense
    n = A.n
    s = np.zeros(n + 1)
    s[0] = 1.0
    current = np.eye(n)
    for m in range(1, n + 1):
        product = a @ current
        s[m] = np.trace(product) / m
        current = s[m] * np.eye(n) - product
    s.flags.writeable = False
    return SymFunctionTable(n, s)


def sk_partial(A: SymMatrix, k: int, i: int, j: int) -> float:
    """∂E_k/∂a_ij with the n² entries as independent coordinates.

    Each minor det(A[J]) with i, j ∈ J contributes its (i, j) cofactor.
    """
    if not 1 <= k <= A.n:
        raise DomainError(f"order {k} outside 1..{A.n}")
    if not (1 <= i <= A.n and 1 <= j <= A.n):
        raise DomainError(f"index ({i},{j}) outside 1..{A.n}")
    if i == j:
        if k == 1:
            return 1.0
        return principal_minor_sum(deleted(A, i).dense, k - 1)
    if k == 1:
        return 0.0
    a = A.dense
    r0, c0 = i - 1, j - 1
    others = [m for m in range(A.n) if m not in (r0, c0)]
    if k - 2 > len(others):
        return 0.0
    total = 0.0
    for rest in combinations(others, k - 2):
        J = sorted(rest + (r0, c0))
        rows = [m for m in J if m != r0]
        cols = [m for m in J if m != c0]
        sign = -1.0 if (J.index(r0) + J.index(c0)) % 2 else 1.0
        block = a[np.ix_(rows, cols)]
        total += sign * (np.linalg.det(block) if block.size else 1.0)
    return float(total)


def sk_gradient(A: SymMatrix, k: int) -> np.ndarray:
    """Matrix of all partials S_k^{ij}(A)"""
    grad = np.zeros((A.n, A.n))
    for i in range(1, A.n + 1):
        for j in range(i, A.n + 1):
            grad[i - 1, j - 1] = sk_partial(A, k, i, j)
            grad[j - 1, i - 1] = grad[i - 1, j - 1]
    return grad


def diag_esp(A: SymMatrix, k: int) -> float:
    """S_k(diag(A))"""
    if not 0 <= k <= A.n:
        raise DomainError(f"order {k} outside 0..{A.n}")
    return esp_table(A.diagonal())[k]
