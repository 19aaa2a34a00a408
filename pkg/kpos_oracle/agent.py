"""
Verification agent: runs statement suites over supplied or sampled matrices
"""
import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Callable, List, Optional, Sequence, TypeVar

from .config import DEFAULT_TOLERANCE, ToleranceConfig
from .errors import DomainError, NumericError, SamplingError
from .family_mapper import FamilyMapper
from .hyperbolic import conjecture_check
from .inequalities import full_suite
from .linalg.matrix import SymMatrix
from .reports import InequalityReport
from .sampling import Profile, SampleSpec, rng_for, sample_pair
from .transfer import ROUTE_CHECK_DIM, pcor_check, spectrum_transfer_check

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass
class RunResult:
    """Reports in trial order plus the trials that could not be sampled"""

    reports: List[InequalityReport] = field(default_factory=list)
    failures: int = 0
    trials: int = 0

    @property
    def candidates(self) -> List[InequalityReport]:
        return [r for r in self.reports if r.is_candidate]


class VerificationAgent:
    """Dispatches independent trials to a thread pool; results keep trial order"""

    def __init__(self, tol: ToleranceConfig = DEFAULT_TOLERANCE, threads: int = 1,
                 family_mapper: Optional[FamilyMapper] = None):
        self.tol = tol
        self.threads = threads
        self.family_mapper = family_mapper or FamilyMapper()
        self._executor = ThreadPoolExecutor(max_workers=threads)

    async def _run_trials(self, fn: Callable[[int], T], count: int) -> List[T]:
        loop = asyncio.get_running_loop()
        futures = [loop.run_in_executor(self._executor, fn, i) for i in range(count)]
        return await asyncio.gather(*futures)

    def _default_grades(self, n: int) -> List[int]:
        return [p for p in range(1, n + 1) if comb(n, p) <= ROUTE_CHECK_DIM]

    def _derivation_reports(self, A: SymMatrix, k_values: Sequence[int], p_values: Sequence[int]) -> List[InequalityReport]:
        reports = []
        for p in p_values:
            reports.append(spectrum_transfer_check(A, p, self.tol))
            for k in k_values:
                if k <= comb(A.n, p):
                    reports.append(pcor_check(A, p, k, self.tol))
        return reports

    async def check_matrix(self, A: SymMatrix, k_values: Optional[Sequence[int]] = None,
                           p_values: Optional[Sequence[int]] = None,
                           partner: Optional[SymMatrix] = None) -> List[InequalityReport]:
        """Every statement on one supplied matrix; D and B default to the identity"""
        ks = [k for k in (k_values or range(1, A.n + 1)) if k <= A.n]
        ps = [p for p in (p_values or self._default_grades(A.n)) if p <= A.n]

        def job(_: int) -> List[InequalityReport]:
            reports = []
            for k in ks:
                reports.extend(full_suite(A, k, partner, self.tol))
            reports.extend(self._derivation_reports(A, ks, ps))
            return reports

        (reports,) = await self._run_trials(job, 1)
        return reports

    async def sweep(self, n_values: Sequence[int], k_values: Optional[Sequence[int]], count: int,
                    seed: int, profile: Profile = Profile.GENERIC,
                    p_values: Optional[Sequence[int]] = None) -> RunResult:
        """Sampled k-positive pairs (A, B) for every (n, k); trial indices run across the whole grid"""
        profile = Profile(profile)
        grid = []
        for n in n_values:
            for k in (k_values or range(1, n + 1)):
                if k > n or (profile is Profile.STRICT and k >= n):
                    logger.debug("sweep skips n=%d k=%d for profile %s", n, k, profile.value)
                    continue
                grid.extend((n, k) for _ in range(count))
        if not grid:
            return RunResult()

        def trial(index: int) -> Optional[List[InequalityReport]]:
            n, k = grid[index]
            spec = SampleSpec(n, k, master_seed=seed, profile=profile)
            try:
                A, B = sample_pair(spec, index, self.tol)
            except SamplingError as exc:
                logger.warning("trial %d (n=%d, k=%d): %s", index, n, k, exc)
                return None
            reports = full_suite(A, k, B, self.tol)
            if p_values:
                reports.extend(self._derivation_reports(A, [k], [p for p in p_values if p <= n]))
            provenance = {"seed": seed, "trial_index": index, "profile": profile.value}
            for report in reports:
                report.provenance = {**provenance, **report.provenance}
                if report.is_candidate:
                    report.witness["matrix"] = A.rows()
            return reports

        logger.info("sweeping %d trials over n=%s (%s)", len(grid), list(n_values), profile.value)
        outcomes = await self._run_trials(trial, len(grid))
        result = RunResult(trials=len(grid))
        for outcome in outcomes:
            if outcome is None:
                result.failures += 1
            else:
                result.reports.extend(outcome)
        logger.info("sweep done: %d checks, %d sampling failures", len(result.reports), result.failures)
        return result

    async def conjecture_search(self, family: str, n_values: Sequence[int], levels: Optional[Sequence[int]],
                                count: int, seed: int) -> RunResult:
        """conjecture_check over matrices sampled inside each polynomial's cone"""
        plan = []
        for n in n_values:
            for level, polynomial, fam in self.family_mapper.map_family(family, n, list(levels) if levels else None):
                plan.extend((n, level, polynomial, fam) for _ in range(count))
        if not plan:
            return RunResult()

        def trial(index: int) -> Optional[InequalityReport]:
            n, level, polynomial, fam = plan[index]
            rng = rng_for(seed, index)
            try:
                A = fam.sample(n, level, rng)
                report = conjecture_check(
                    polynomial, A, self.tol,
                    provenance={"seed": seed, "trial_index": index, "family": fam.name, fam.level_name: level},
                )
            except (SamplingError, NumericError, DomainError) as exc:
                logger.warning("trial %d (%s, n=%d): %s", index, polynomial.name, n, exc)
                return None
            if report.is_candidate:
                report.witness["matrix"] = A.rows()
            return report

        logger.info("conjecture search: family %s, %d trials", family, len(plan))
        outcomes = await self._run_trials(trial, len(plan))
        result = RunResult(trials=len(plan))
        for outcome in outcomes:
            if outcome is None:
                result.failures += 1
            else:
                result.reports.append(outcome)
        return result

    async def cleanup(self):
        """Shut the worker pool down"""
        self._executor.shutdown(wait=True)
