"""
The derivation operator D_A on p-vectors.

Basis: e_{i_1} ∧ ... ∧ e_{i_p} over increasing p-tuples in lexicographic
order. D_A(v_1 ∧ ... ∧ v_p) = Σ_m v_1 ∧ ... ∧ A v_m ∧ ... ∧ v_p, so in that
basis

  (I, I)  = Σ_{i ∈ I} a_ii
  (I, J)  = (-1)^{pos(i in I) + pos(j in J)} · a_ij   when I \\ J = {i}, J \\ I = {j}
  (I, J)  = 0                                        when |I ∩ J| < p - 1

pos() is the 0-based slot of the index inside its tuple.
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..config import MAX_WEDGE_DIM
from ..errors import DomainError
from .matrix import SymMatrix
from .symfunc import SpectrumLike, as_spectrum

logger = logging.getLogger(__name__)

Tuple_ = Tuple[int, ...]


@dataclass(frozen=True)
class PIndex:
    n: int
    p: int
    tuple: Tuple_

    def __post_init__(self):
        _check_tuple(self.n, self.p, self.tuple)

    @property
    def rank(self) -> int:
        return lex_rank(self.tuple, self.n)

    @classmethod
    def from_rank(cls, n: int, p: int, rank: int) -> "PIndex":
        return cls(n, p, lex_unrank(rank, n, p))


def _check_tuple(n: int, p: int, t: Sequence[int]) -> None:
    if len(t) != p:
        raise DomainError(f"expected a {p}-tuple, got {tuple(t)}")
    if any(b <= a for a, b in zip(t, t[1:])):
        raise DomainError(f"tuple {tuple(t)} is not strictly increasing")
    if t and (t[0] < 1 or t[-1] > n):
        raise DomainError(f"tuple {tuple(t)} outside 1..{n}")


def lex_rank(t: Sequence[int], n: int) -> int:
    """Position of an increasing tuple among all C(n, len(t)) tuples in lex order"""
    t = tuple(int(x) for x in t)
    p = len(t)
    _check_tuple(n, p, t)
    rank = 0
    prev = 0
    for slot, value in enumerate(t):
        for skipped in range(prev + 1, value):
            rank += comb(n - skipped, p - slot - 1)
        prev = value
    return rank


def lex_unrank(r: int, n: int, p: int) -> Tuple_:
    if not 0 <= p <= n:
        raise DomainError(f"grade {p} outside 0..{n}")
    total = comb(n, p)
    if not 0 <= r < total:
        raise DomainError(f"rank {r} outside 0..{total - 1}")
    out: List[int] = []
    value = 0
    for slot in range(p):
        value += 1
        while True:
            block = comb(n - value, p - slot - 1)
            if r < block:
                break
            r -= block
            value += 1
        out.append(value)
    return tuple(out)


def wedge_basis(n: int, p: int) -> List[Tuple_]:
    return list(combinations(range(1, n + 1), p))


@dataclass(frozen=True, eq=False)
class DerivationMatrix:
    n: int
    p: int
    matrix: SymMatrix

    @property
    def dim(self) -> int:
        return self.matrix.n


def _check_grade(n: int, p: int) -> int:
    if not 1 <= p <= n:
        raise DomainError(f"grade {p} outside 1..{n}")
    dim = comb(n, p)
    if dim > MAX_WEDGE_DIM:
        raise DomainError(f"C({n},{p}) = {dim} exceeds {MAX_WEDGE_DIM}")
    return dim


def derivation_matrix(A: SymMatrix, p: int) -> DerivationMatrix:
    dim = _check_grade(A.n, p)
    a = A.dense
    basis = wedge_basis(A.n, p)
    rank_of: Dict[Tuple_, int] = {t: r for r, t in enumerate(basis)}
    out = np.zeros((dim, dim))
    for col, J in enumerate(basis):
        members = set(J)
        out[col, col] = sum(a[j - 1, j - 1] for j in J)
        for pos_j, j in enumerate(J):
            for i in range(1, A.n + 1):
                if i in members or a[i - 1, j - 1] == 0.0:
                    continue
                I = tuple(sorted((members - {j}) | {i}))
                sign = -1.0 if (I.index(i) + pos_j) % 2 else 1.0
                out[rank_of[I], col] += sign * a[i - 1, j - 1]
    logger.debug("derivation matrix n=%d p=%d dim=%d", A.n, p, dim)
    return DerivationMatrix(A.n, p, SymMatrix.from_dense(out, sym_tol=0.0))


def lambda_brackets(lam: SpectrumLike, p: int) -> np.ndarray:
    """(λ_{i_1} + ... + λ_{i_p}) over increasing p-tuples, lex order"""
    vals = as_spectrum(lam).values
    _check_grade(vals.size, p)
    idx = np.array(list(combinations(range(vals.size), p)), dtype=int)
    return vals[idx].sum(axis=1)
