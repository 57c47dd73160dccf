"""The dependency type, its exact check and the exhaustive oracle."""

import itertools
import logging
import math
from collections.abc import Iterator

import numpy as np
from pydantic import BaseModel, Field

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import KLinInstance, SparseVec
from klin_refute.internal.models import DEFAULT_EXHAUSTIVE_CAP, ResourceCapError, ValidationError

log = logging.getLogger(__name__)


class Dependency(BaseModel):
    """Coefficients ``α_v`` with ``Σ α_v·v = 0``.

    Stored as ``(position, α)`` pairs sorted by position.
    """

    terms: list[tuple[int, int]] = Field(..., min_length=2)

    @property
    def length(self) -> int:
        """Number of vectors taking part."""
        return len(self.terms)

    @property
    def positions(self) -> list[int]:
        """Equation positions, ascending."""
        return [p for p, _ in self.terms]

    def render(self, spec: GroupSpec) -> list[str]:
        """``position coefficient`` lines in instance-file element syntax."""
        return [f"{p} {spec.format_element(a)}" for p, a in self.terms]


def combine(inst: KLinInstance, terms: list[tuple[int, int]] | Dependency) -> SparseVec:
    """``Σ α_v·v`` over the given terms."""
    if isinstance(terms, Dependency):
        terms = terms.terms
    spec = inst.spec
    acc: dict[int, int] = {}
    for pos, alpha in terms:
        for i, c in inst.equations[pos].lhs.items():
            acc[i] = int(spec.add_table[acc.get(i, 0), spec.mul_table[alpha, c]])
    return SparseVec.from_mapping(inst.n, acc)


def verify_dependency(inst: KLinInstance, dep: Dependency) -> bool:
    """Exact check that the terms are distinct, nonzero and sum to the zero vector.

    Raises:
        ValidationError: A position is outside the instance.
    """
    positions = dep.positions
    if any(not 0 <= p < inst.m for p in positions):
        raise ValidationError(f"dependency refers to positions outside [0, {inst.m})")
    if len(set(positions)) != len(positions):
        return False
    if any(not 0 < a < inst.spec.order for _, a in dep.terms):
        return False
    return combine(inst, dep).wt == 0


def exhaustive_cost(m: int, max_size: int, units: int) -> int:
    """``Σ_{s<=max_size} C(m,s)·units^s``, the number of candidates the oracle may inspect."""
    return sum(math.comb(m, s) * units**s for s in range(2, max_size + 1))


def _coefficient_grid(units: np.ndarray, size: int, normalise: bool) -> np.ndarray:
    """All coefficient vectors of the given size, with leading coefficient 1 if ``normalise``."""
    if not normalise:
        return np.asarray(list(itertools.product(units.tolist(), repeat=size)), dtype=np.int64)
    rest = list(itertools.product(units.tolist(), repeat=size - 1))
    grid = np.ones((len(rest), size), dtype=np.int64)
    if size > 1:
        grid[:, 1:] = np.asarray(rest, dtype=np.int64)
    return grid


CombinationSums = Iterator[tuple[tuple[int, ...], np.ndarray, np.ndarray]]


def combination_sums(inst: KLinInstance, size: int) -> CombinationSums:
    """``(positions, coefficient grid, dense sums)`` for every subset of exactly ``size`` vectors.

    Subsets come in lexicographic order. Over a field coefficients are normalised to a leading 1.
    """
    if inst.m < size:
        return
    spec = inst.spec
    dense = np.stack([v.dense() for v in inst.vectors])
    grid = _coefficient_grid(spec.units, size, spec.is_field)
    for subset in itertools.combinations(range(inst.m), size):
        acc = np.zeros((grid.shape[0], inst.n), dtype=np.int64)
        for j, pos in enumerate(subset):
            acc = spec.add_table[acc, spec.mul_table[grid[:, j][:, None], dense[pos][None, :]]]
        yield subset, grid, acc


def zero_combinations(
    inst: KLinInstance,
    size: int,
) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """``(positions, coefficients)`` for every zero combination of exactly ``size`` vectors."""
    for subset, grid, acc in combination_sums(inst, size):
        for row in np.flatnonzero(~acc.any(axis=1)):
            yield subset, grid[row]


def find_dependency_exhaustive(
    inst: KLinInstance,
    max_size: int,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
) -> Dependency | None:
    """The smallest dependency of at most ``max_size`` vectors, or None when there is none.

    Raises:
        ValidationError: ``max_size < 2``.
        ResourceCapError: The candidate count exceeds ``cap``.
    """
    if max_size < 2:
        raise ValidationError(f"dependencies have at least two vectors, got max_size={max_size}")
    max_size = min(max_size, inst.m)
    cost = exhaustive_cost(inst.m, max_size, len(inst.spec.units))
    if cost > cap:
        raise ResourceCapError("dependency candidates", cost, cap)
    for size in range(2, max_size + 1):
        for subset, coeffs in zero_combinations(inst, size):
            dep = Dependency(terms=[(p, int(a)) for p, a in zip(subset, coeffs, strict=True)])
            log.debug("exhaustive dependency", extra={"size": size, "positions": list(subset)})
            return dep
    return None
