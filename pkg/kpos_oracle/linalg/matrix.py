"""
Dense symmetric matrices, principal submatrices and a cyclic Jacobi eigensolver
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Tuple

import numpy as np
from numba import njit

from ..errors import DomainError, NumericError

logger = logging.getLogger(__name__)

JACOBI_MAX_SWEEPS = 30
JACOBI_REL_TARGET = 1e-13
ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Real symmetric n×n matrix stored as its packed upper triangle.

    Reading (i, j) and (j, i) hits the same stored value, so symmetry is
    structural. Indices passed to ``entry`` are 1-based.
    """

    n: int
    packed: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"dimension must be >= 1, got {self.n}")
        packed = np.array(self.packed, dtype=float).reshape(-1)
        if packed.size != self.n * (self.n + 1) // 2:
            raise DomainError(f"packed length {packed.size} does not match n={self.n}")
        if not np.all(np.isfinite(packed)):
            raise DomainError("matrix entries must be finite")
        packed.flags.writeable = False
        object.__setattr__(self, "packed", packed)

    @classmethod
    def from_dense(cls, array, sym_tol: Optional[float] = None) -> "SymMatrix":
        """Build from a square array.

        With ``sym_tol`` set, asymmetry beyond it is rejected; otherwise the
        two triangles are averaged.
        """
        arr = np.asarray(array, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("matrix entries must be finite")
        if sym_tol is not None:
            gap = float(np.max(np.abs(arr - arr.T))) if arr.size else 0.0
            if gap > sym_tol:
                raise DomainError(f"matrix is not symmetric (max |a_ij - a_ji| = {gap:.3e})")
        sym = 0.5 * (arr + arr.T)
        n = arr.shape[0]
        return cls(n, sym[np.triu_indices(n)])

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls.from_dense(np.eye(n))

    @classmethod
    def diagonal_matrix(cls, values: Iterable[float]) -> "SymMatrix":
        return cls.from_dense(np.diag(np.asarray(list(values), dtype=float)))

    @cached_property
    def dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        iu = np.triu_indices(self.n)
        out[iu] = self.packed
        out.T[iu] = self.packed
        out.flags.writeable = False
        return out

    def entry(self, i: int, j: int) -> float:
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise DomainError(f"index ({i},{j}) outside 1..{self.n}")
        return float(self.dense[i - 1, j - 1])

    def diagonal(self) -> np.ndarray:
        return np.diag(self.dense).copy()

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.packed)))

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.dense))

    def off_diagonal_max(self) -> float:
        if self.n == 1:
            return 0.0
        off = self.dense - np.diag(np.diag(self.dense))
        return float(np.max(np.abs(off)))

    def is_diagonal(self, tol: float = 0.0) -> bool:
        return self.off_diagonal_max() <= tol

    def trace(self) -> float:
        return float(np.trace(self.dense))

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        if other.n != self.n:
            raise DomainError(f"dimension mismatch {self.n} vs {other.n}")
        return SymMatrix(self.n, self.packed + other.packed)

    def scaled(self, c: float) -> "SymMatrix":
        return SymMatrix(self.n, c * self.packed)

    def rows(self) -> list:
        return self.dense.tolist()


@dataclass(frozen=True)
class IndexSet:
    """Strictly increasing subset of [n], 1-based"""

    n: int
    members: Tuple[int, ...]

    def __post_init__(self):
        members = tuple(int(m) for m in self.members)
        if any(b <= a for a, b in zip(members, members[1:])):
            raise DomainError(f"index set must be strictly increasing: {members}")
        if members and (members[0] < 1 or members[-1] > self.n):
            raise DomainError(f"indices {members} outside 1..{self.n}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "IndexSet":
        return cls(n, tuple(sorted(set(members))))

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(n, tuple(range(1, n + 1)))

    @classmethod
    def without(cls, n: int, *removed: int) -> "IndexSet":
        """[n] minus the given indices, i.e. {removed}ᶜ"""
        return cls.of(n, removed).complement()

    def complement(self) -> "IndexSet":
        inside = set(self.members)
        return IndexSet(self.n, tuple(i for i in range(1, self.n + 1) if i not in inside))

    def zero_based(self) -> np.ndarray:
        return np.asarray(self.members, dtype=int) - 1

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)


@dataclass(frozen=True, eq=False)
class OrthogonalMatrix:
    n: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        q = np.array(self.entries, dtype=float)
        if q.shape != (self.n, self.n):
            raise DomainError(f"expected {self.n}x{self.n} orthogonal matrix, got {q.shape}")
        residual = orthogonality_residual(q)
        if residual > ORTHOGONALITY_TOL:
            raise NumericError("matrix is not orthogonal", residual)
        q.flags.writeable = False
        object.__setattr__(self, "entries", q)

    @classmethod
    def identity(cls, n: int) -> "OrthogonalMatrix":
        return cls(n, np.eye(n))

    @property
    def T(self) -> "OrthogonalMatrix":
        return OrthogonalMatrix(self.n, self.entries.T)


def orthogonality_residual(q: np.ndarray) -> float:
    return float(np.max(np.abs(q.T @ q - np.eye(q.shape[0])))) if q.size else 0.0


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    values: np.ndarray
    vectors: np.ndarray
    residual: float
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T


def principal_submatrix(A: SymMatrix, J: IndexSet) -> SymMatrix:
    """A[J]: keep the rows and columns listed in J"""
    if J.n != A.n:
        raise DomainError(f"index set lives in [{J.n}], matrix has n={A.n}")
    if len(J) == 0:
        raise DomainError("principal submatrix of an empty index set")
    idx = J.zero_based()
    return SymMatrix.from_dense(A.dense[np.ix_(idx, idx)])


def deleted(A: SymMatrix, *rows: int) -> SymMatrix:
    """A[{rows}ᶜ]"""
    return principal_submatrix(A, IndexSet.without(A.n, *rows))


@njit(cache=True)
def _jacobi_sweep(a, v):
    n = a.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            if apq == 0.0:
                continue
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
            if theta < 0.0:
                t = -t
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            for r in range(n):
                arp = a[r, p]
                arq = a[r, q]
                a[r, p] = c * arp - s * arq
                a[r, q] = s * arp + c * arq
            for r in range(n):
                apr = a[p, r]
                aqr = a[q, r]
                a[p, r] = c * apr - s * aqr
                a[q, r] = s * apr + c * aqr
            for r in range(n):
                vrp = v[r, p]
                vrq = v[r, q]
                v[r, p] = c * vrp - s * vrq
                v[r, q] = s * vrp + c * vrq


def _off_norm(a: np.ndarray) -> float:
    return float(math.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2)))


def eigen(A: SymMatrix, max_sweeps: int = JACOBI_MAX_SWEEPS, rel_target: float = JACOBI_REL_TARGET) -> EigenDecomposition:
    """Cyclic Jacobi: sweep until off(A) <= rel_target·‖A‖_F, at most ``max_sweeps`` times"""
    a = np.array(A.dense, dtype=float)
    v = np.eye(A.n)
    target = rel_target * float(np.linalg.norm(a))
    off = _off_norm(a)
    sweeps = 0
    while off > target:
        if sweeps == max_sweeps:
            raise NumericError(f"Jacobi did not converge in {max_sweeps} sweeps (n={A.n})", off)
        _jacobi_sweep(a, v)
        sweeps += 1
        off = _off_norm(a)
    order = np.argsort(-np.diag(a), kind="stable")
    logger.debug("Jacobi converged: n=%d sweeps=%d off=%.3e", A.n, sweeps, off)
    return EigenDecomposition(values=np.diag(a)[order].copy(), vectors=v[:, order], residual=off, sweeps=sweeps)


def conjugate(A: SymMatrix, W: OrthogonalMatrix) -> SymMatrix:
    """WᵀAW, re-symmetrized"""
    if W.n != A.n:
        raise DomainError(f"dimension mismatch: A is {A.n}x{A.n}, W is {W.n}x{W.n}")
    product = W.entries.T @ A.dense @ W.entries
    return SymMatrix.from_dense(product)


def border_reduce(A: SymMatrix, j: int) -> Tuple[OrthogonalMatrix, SymMatrix]:
    """Find W = P·(U ⊕ 1) with B = WᵀAW bordered-diagonal.

    P moves row/column j to the last slot and U diagonalizes A[{j}ᶜ], so
    B[{n}ᶜ] is diagonal and B(n, n) = a_jj.
    """
    if A.n < 2:
        raise DomainError("border reduction needs n >= 2")
    if not 1 <= j <= A.n:
        raise DomainError(f"row {j} outside 1..{A.n}")
    order = [i for i in range(A.n) if i != j - 1] + [j - 1]
    perm = np.eye(A.n)[:, order]
    rest = deleted(A, j)
    if rest.is_diagonal():
        block = np.eye(A.n - 1)
    else:
        block = eigen(rest).vectors
    w = np.eye(A.n)
    w[: A.n - 1, : A.n - 1] = block
    W = OrthogonalMatrix(A.n, perm @ w)
    B = conjugate(A, W)
    # exact zeros on the reduced block, a_jj carried over verbatim
    b = np.array(B.dense)
    head = np.diag(b)[: A.n - 1].copy()
    b[: A.n - 1, : A.n - 1] = np.diag(head)
    b[-1, -1] = A.dense[j - 1, j - 1]
    return W, SymMatrix.from_dense(b)


def zero_border(A: SymMatrix, j: int) -> SymMatrix:
    """A^{j,0}: clear row and column j except the diagonal entry"""
    if not 1 <= j <= A.n:
        raise DomainError(f"row {j} outside 1..{A.n}")
    b = np.array(A.dense)
    keep = b[j - 1, j - 1]
    b[j - 1, :] = 0.0
    b[:, j - 1] = 0.0
    b[j - 1, j - 1] = keep
    return SymMatrix.from_dense(b)


def random_symmetric(n: int, rng: np.random.Generator, bound: float = 5.0) -> SymMatrix:
    """Entries uniform in [-bound, bound]"""
    return SymMatrix.from_dense(_upper_to_full(rng.uniform(-bound, bound, size=(n, n))))


def _upper_to_full(raw: np.ndarray) -> np.ndarray:
    upper = np.triu(raw)
    return upper + np.triu(raw, 1).T

