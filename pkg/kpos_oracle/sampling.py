"""
Seedable generators for cone points, Haar rotations and k-positive matrices.

Trial i of a run draws from PCG64 seeded by SeedSequence(entropy=master_seed,
spawn_key=(i,)), so a trial's output depends only on (master_seed, i).
"""
import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Iterator, Tuple, Union

import numpy as np
from tenacity import RetryError, retry, retry_if_exception_type, stop_after_attempt

from .cones import ConeQuery, gamma_member, k_positive, max_level
from .config import DEFAULT_TOLERANCE, MAX_N, REJECTION_BUDGET, ToleranceConfig
from .errors import DomainError, SamplingError
from .linalg.derivation import lambda_brackets
from .linalg.matrix import OrthogonalMatrix, SymMatrix, conjugate
from .linalg.symfunc import Spectrum, esp_table
from .reports import FORMAT_VERSION

logger = logging.getLogger(__name__)

NEAR_DIAGONAL_DELTA = 1e-3
NEAR_BOUNDARY_SHIFT = 1e-4
SAFETY_FACTOR = 10.0
BISECTION_STEPS = 80

SeedLike = Union[int, np.random.Generator]


class Profile(str, Enum):
    GENERIC = "generic"
    STRICT = "strictly-k-not-k+1"
    NEAR_BOUNDARY = "near-boundary"
    NEAR_DIAGONAL = "near-diagonal"


class SampleRejected(Exception):
    """One draw missed its certificate; the retry loop draws again"""


@dataclass(frozen=True)
class SampleSpec:
    n: int
    k: int
    count: int = 1
    master_seed: int = 0
    profile: Profile = Profile.GENERIC

    def __post_init__(self):
        object.__setattr__(self, "profile", Profile(self.profile))
        if not 1 <= self.n <= MAX_N:
            raise DomainError(f"n={self.n} outside 1..{MAX_N}")
        if not 1 <= self.k <= self.n:
            raise DomainError(f"k={self.k} outside 1..{self.n}")
        if self.count < 1:
            raise DomainError("sample count must be at least 1")
        if not 0 <= self.master_seed < 2**64:
            raise DomainError("master seed must fit in 64 bits")
        if self.profile is Profile.STRICT and self.k >= self.n:
            raise DomainError(f"profile {self.profile.value} needs k < n")


def rng_for(master_seed: int, trial_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(trial_index,))
    return np.random.Generator(np.random.PCG64(seq))


def _as_rng(seed: SeedLike) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else rng_for(int(seed), 0)


def haar_orthogonal(n: int, seed: SeedLike) -> OrthogonalMatrix:
    """QR of a Gaussian matrix with R's diagonal signs folded back into Q"""
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")
    rng = _as_rng(seed)
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return OrthogonalMatrix(n, q * signs)


def _member(point: np.ndarray, k: int, tol: ToleranceConfig) -> bool:
    verdict = gamma_member(point, ConeQuery(point.size, k, tol))
    return verdict.member and verdict.margin > SAFETY_FACTOR * tol.eps_rel


def cone_threshold(mu: np.ndarray, k: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> float:
    """Smallest t (to bisection accuracy) with μ + t·1 ∈ Γ_k(n)"""
    lo = -(float(np.max(np.abs(mu))) + 1.0)
    hi = 1.0
    while not _member(mu + hi, k, tol):
        hi *= 2.0
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if _member(mu + mid, k, tol):
            hi = mid
        else:
            lo = mid
    return hi


@retry(stop=stop_after_attempt(REJECTION_BUDGET), retry=retry_if_exception_type(SampleRejected))
def _draw_gamma(n: int, k: int, rng: np.random.Generator, profile: Profile, tol: ToleranceConfig) -> np.ndarray:
    mu = 2.0 * rng.standard_normal(n)
    spread = 1.0 + float(np.std(mu))
    t_k = cone_threshold(mu, k, tol)
    if profile is Profile.STRICT:
        t_next = cone_threshold(mu, k + 1, tol)
        if t_next - t_k <= SAFETY_FACTOR * tol.eps_rel * spread:
            raise SampleRejected()
        lam = mu + rng.uniform(t_k, t_next)
        scale = 1.0 + float(np.max(np.abs(lam)))
        if esp_table(lam)[k + 1] >= -SAFETY_FACTOR * tol.eps_rel * scale ** (k + 1):
            raise SampleRejected()
    elif profile is Profile.NEAR_BOUNDARY:
        lam = mu + t_k + NEAR_BOUNDARY_SHIFT * spread * rng.uniform(0.5, 1.5)
    else:
        lam = mu + t_k + rng.exponential(1.0) * spread
    if not _member(lam, k, tol):
        raise SampleRejected()
    return lam


def sample_gamma(
    n: int,
    k: int,
    seed: SeedLike,
    profile: Profile = Profile.GENERIC,
    tol: ToleranceConfig = DEFAULT_TOLERANCE,
) -> Spectrum:
    """λ ∈ Γ_k(n) with margin above 10·eps_rel, by shifting a Gaussian along (1, ..., 1)"""
    if not 1 <= k <= n:
        raise DomainError(f"k={k} outside 1..{n}")
    profile = Profile(profile)
    if profile is Profile.STRICT and k >= n:
        raise DomainError("strict profile needs k < n")
    try:
        return Spectrum(_draw_gamma(n, k, _as_rng(seed), profile, tol))
    except RetryError as exc:
        raise SamplingError(f"no {profile.value} point of Gamma_{k}({n}) in {REJECTION_BUDGET} draws") from exc


@retry(stop=stop_after_attempt(REJECTION_BUDGET), retry=retry_if_exception_type(SampleRejected))
def _draw_matrix(n: int, k: int, rng: np.random.Generator, profile: Profile, tol: ToleranceConfig) -> SymMatrix:
    if profile is Profile.NEAR_DIAGONAL:
        lam = _draw_gamma(n, k, rng, Profile.GENERIC, tol)
        noise = np.triu(rng.uniform(-1.0, 1.0, size=(n, n)), 1)
        noise = NEAR_DIAGONAL_DELTA * float(np.max(np.abs(lam))) * (noise + noise.T)
        A = SymMatrix.from_dense(np.diag(lam) + noise)
    else:
        lam = _draw_gamma(n, k, rng, profile, tol)
        W = haar_orthogonal(n, rng)
        A = conjugate(SymMatrix.diagonal_matrix(lam), W)
    verdict = k_positive(A, ConeQuery(n, k, tol))
    if not verdict.member:
        raise SampleRejected()
    if profile is Profile.STRICT and max_level(A, tol) != k:
        raise SampleRejected()
    return A


def sample_matrix(
    n: int,
    k: int,
    seed: SeedLike,
    profile: Profile = Profile.GENERIC,
    tol: ToleranceConfig = DEFAULT_TOLERANCE,
) -> SymMatrix:
    try:
        return _draw_matrix(n, k, _as_rng(seed), Profile(profile), tol)
    except RetryError as exc:
        raise SamplingError(f"no {Profile(profile).value} {k}-positive {n}x{n} matrix in {REJECTION_BUDGET} draws") from exc


def sample_one(spec: SampleSpec, trial_index: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> SymMatrix:
    return sample_matrix(spec.n, spec.k, rng_for(spec.master_seed, trial_index), spec.profile, tol)


def sample_pair(spec: SampleSpec, trial_index: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> Tuple[SymMatrix, SymMatrix]:
    """Two k-positive matrices from one trial stream, for two-matrix statements"""
    rng = rng_for(spec.master_seed, trial_index)
    return sample_matrix(spec.n, spec.k, rng, spec.profile, tol), sample_matrix(spec.n, spec.k, rng, spec.profile, tol)


def sample_k_positive(spec: SampleSpec, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> list:
    return [A for _, A in iter_samples(spec, tol)]


def iter_samples(spec: SampleSpec, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> Iterator[Tuple[int, SymMatrix]]:
    for i in range(spec.count):
        yield i, sample_one(spec, i, tol)


def sample_product_cone(n: int, p: int, seed: SeedLike) -> Spectrum:
    """λ with every p-fold coordinate sum positive"""
    if not 1 <= p <= n:
        raise DomainError(f"p={p} outside 1..{n}")
    rng = _as_rng(seed)
    mu = 2.0 * rng.standard_normal(n)
    lowest = float(np.min(lambda_brackets(mu, p)))
    shift = -lowest / p + rng.exponential(1.0) * (1.0 + float(np.std(mu)))
    return Spectrum(mu + shift)


def sample_product_matrix(n: int, p: int, seed: SeedLike) -> SymMatrix:
    rng = _as_rng(seed)
    lam = sample_product_cone(n, p, rng)
    return conjugate(SymMatrix.diagonal_matrix(lam.values), haar_orthogonal(n, rng))


def dump_samples(spec: SampleSpec, sink: Union[str, Path, IO[str]], tol: ToleranceConfig = DEFAULT_TOLERANCE) -> int:
    """Write one JSON line per sampled matrix; returns the number written"""
    if isinstance(sink, (str, Path)):
        with open(sink, "w") as handle:
            return dump_samples(spec, handle, tol)
    written = 0
    for i, A in iter_samples(spec, tol):
        record = {
            "format_version": FORMAT_VERSION,
            "n": spec.n,
            "k": spec.k,
            "profile": spec.profile.value,
            "master_seed": spec.master_seed,
            "trial_index": i,
            "matrix": A.rows(),
        }
        sink.write(json.dumps(record) + "\n")
        sink.flush()
        written += 1
    logger.info("wrote %d %s samples (n=%d, k=%d)", written, spec.profile.value, spec.n, spec.k)
    return written
