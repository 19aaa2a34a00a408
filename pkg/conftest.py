import numpy as np
import pytest

from kpos_oracle.config import DEFAULT_TOLERANCE
from kpos_oracle.linalg.matrix import SymMatrix, random_symmetric
from kpos_oracle.sampling import rng_for, sample_matrix

collect_ignore = ["examples"]

SIZES = (2, 3, 4, 5, 6)


@pytest.fixture
def tol():
    return DEFAULT_TOLERANCE


@pytest.fixture
def rng():
    return rng_for(12345, 0)


@pytest.fixture
def random_matrices(rng):
    return [random_symmetric(n, rng) for n in SIZES for _ in range(4)]


@pytest.fixture(scope="session")
def k_positive_samples():
    """(n, k, A) with A sampled k-positive, a few per level"""
    samples = []
    for n in (4, 5, 6):
        for k in range(1, n + 1):
            for i in range(2):
                samples.append((n, k, sample_matrix(n, k, rng_for(99, 100 * n + 10 * k + i))))
    return samples


@pytest.fixture
def pd_matrix():
    """A fixed positive definite 4x4 matrix with every off-diagonal entry nonzero"""
    m = np.array([
        [4.0, 1.0, 0.5, 0.2],
        [1.0, 3.0, 0.3, 0.4],
        [0.5, 0.3, 2.0, 0.1],
        [0.2, 0.4, 0.1, 1.5],
    ])
    return SymMatrix.from_dense(m)
