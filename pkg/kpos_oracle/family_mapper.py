"""
Polynomial families for the conjecture search.

A family turns (n, level) into a symmetric hyperbolic polynomial on ℝⁿ and
knows how to draw matrices whose spectrum lies in its Gårding cone.
"""
import logging
import re
from dataclasses import dataclass
from math import comb
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .config import MAX_WEDGE_DIM
from .errors import DomainError
from .hyperbolic import HyperbolicPolynomial, make_diagonal_detminor_poly, make_product_poly, make_sk_poly
from .linalg.matrix import SymMatrix
from .sampling import sample_matrix, sample_product_matrix

logger = logging.getLogger(__name__)

Builder = Callable[[int, int], HyperbolicPolynomial]
Sampler = Callable[[int, int, np.random.Generator], SymMatrix]


@dataclass(frozen=True)
class ConjectureFamily:
    """One registered family; ``level`` is k for S_k-like families and p for products"""

    name: str
    level_name: str
    build: Builder
    sample: Sampler
    levels: Callable[[int], List[int]]
    description: str = ""


def _k_levels(n: int) -> List[int]:
    return list(range(1, n + 1))


def _p_levels(n: int) -> List[int]:
    return [p for p in range(1, n + 1) if comb(n, p) <= MAX_WEDGE_DIM]


_REGISTRY: Dict[str, ConjectureFamily] = {}


def register_family(family: ConjectureFamily) -> ConjectureFamily:
    """Add a family under its name; later registrations replace earlier ones"""
    if family.name in _REGISTRY:
        logger.info("replacing conjecture family %s", family.name)
    _REGISTRY[family.name] = family
    return family


register_family(ConjectureFamily(
    name="sk",
    level_name="k",
    build=make_sk_poly,
    sample=lambda n, k, rng: sample_matrix(n, k, rng),
    levels=_k_levels,
    description="elementary symmetric S_k, direction (1, ..., 1)",
))
register_family(ConjectureFamily(
    name="detminor",
    level_name="k",
    build=make_diagonal_detminor_poly,
    sample=lambda n, k, rng: sample_matrix(n, k, rng),
    levels=_k_levels,
    description="principal-minor sum P_k restricted to diagonal matrices",
))
register_family(ConjectureFamily(
    name="product-p",
    level_name="p",
    build=make_product_poly,
    sample=sample_product_matrix,
    levels=_p_levels,
    description="product of all p-fold coordinate sums",
))


class FamilyMapper:
    """Resolves a --family value plus level ranges to concrete polynomials"""

    # "product-3" pins p in the family name itself
    _PINNED = re.compile(r"^(?P<base>[a-z]+)-(?P<level>\d+)$")

    def __init__(self, registry: Optional[Dict[str, ConjectureFamily]] = None):
        self.registry = registry if registry is not None else _REGISTRY

    def names(self) -> List[str]:
        return sorted(self.registry)

    def resolve(self, name: str) -> Tuple[ConjectureFamily, Optional[int]]:
        if name in self.registry:
            return self.registry[name], None
        match = self._PINNED.match(name)
        if match:
            for family in self.registry.values():
                if family.name.startswith(match.group("base") + "-"):
                    return family, int(match.group("level"))
        raise DomainError(f"unknown family {name!r}; known: {', '.join(self.names())}")

    def map_family(self, name: str, n: int, levels: Optional[List[int]] = None) -> List[Tuple[int, HyperbolicPolynomial, ConjectureFamily]]:
        """(level, polynomial, family) for every level that fits n"""
        family, pinned = self.resolve(name)
        allowed = family.levels(n)
        wanted = [pinned] if pinned is not None else (levels or allowed)
        out = []
        for level in wanted:
            if level not in allowed:
                logger.debug("skipping %s=%d for n=%d", family.level_name, level, n)
                continue
            out.append((level, family.build(n, level), family))
        return out