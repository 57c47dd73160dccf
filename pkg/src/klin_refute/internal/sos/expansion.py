"""Exhaustive oracles over small vector sets: expansion and refutations."""

import logging

import numpy as np
from pydantic import BaseModel

from klin_refute.internal.deps import combination_sums, exhaustive_cost
from klin_refute.internal.instance import KLinInstance
from klin_refute.internal.models import DEFAULT_EXHAUSTIVE_CAP, ResourceCapError, ValidationError

log = logging.getLogger(__name__)


class ExpansionResult(BaseModel):
    """Outcome of an expansion check; ``witness`` is the first violating combination."""

    expands: bool
    ell: int
    beta: float
    witness: list[tuple[int, int]] | None = None
    weight: int | None = None


class Refutation(BaseModel):
    """Coefficients with ``Σ α_v·v = 0`` and ``Σ α_v·b_v ≠ 0``."""

    terms: list[tuple[int, int]]
    rhs: int

    @property
    def length(self) -> int:
        """Number of equations combined."""
        return len(self.terms)


def _cost(inst: KLinInstance, max_size: int, cap: int) -> None:
    units = len(inst.spec.units)
    cost = exhaustive_cost(inst.m, max_size, units) + inst.m * units
    if cost > cap:
        raise ResourceCapError("combination candidates", cost, cap)


def expansion_check(
    inst: KLinInstance,
    ell: int,
    beta: float,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
) -> ExpansionResult:
    """Whether every combination of ``s <= ell`` vectors has weight above ``β·s``.

    Coefficients range over nonzero elements and right-hand sides are ignored. Subsets are
    scanned by size, then lexicographically.

    Raises:
        ValidationError: ``ell < 1`` or ``beta < 0``.
        ResourceCapError: The candidate count exceeds ``cap``.
    """
    if ell < 1 or beta < 0:
        raise ValidationError(f"need ell >= 1 and beta >= 0, got ell={ell}, beta={beta}")
    ell = min(ell, inst.m)
    _cost(inst, ell, cap)
    for size in range(1, ell + 1):
        for subset, grid, acc in combination_sums(inst, size):
            weights = np.count_nonzero(acc, axis=1)
            bad = np.flatnonzero(weights <= beta * size)
            if bad.size:
                row = int(bad[0])
                terms = [(p, int(a)) for p, a in zip(subset, grid[row], strict=True)]
                log.debug("expansion violated", extra={"size": size, "weight": int(weights[row])})
                return ExpansionResult(
                    expands=False,
                    ell=ell,
                    beta=beta,
                    witness=terms,
                    weight=int(weights[row]),
                )
    return ExpansionResult(expands=True, ell=ell, beta=beta)


def find_refutation_exhaustive(
    inst: KLinInstance,
    max_size: int,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
) -> Refutation | None:
    """The smallest refutation of at most ``max_size`` equations, or None.

    A single equation with an empty left-hand side and nonzero right-hand side is a refutation of
    size one.

    Raises:
        ValidationError: ``max_size < 1``.
        ResourceCapError: The candidate count exceeds ``cap``.
    """
    if max_size < 1:
        raise ValidationError(f"max_size must be at least 1, got {max_size}")
    spec = inst.spec
    max_size = min(max_size, inst.m)
    _cost(inst, max_size, cap)
    rhs = np.asarray([eq.rhs for eq in inst.equations], dtype=np.int64)
    for size in range(1, max_size + 1):
        for subset, grid, acc in combination_sums(inst, size):
            for row in np.flatnonzero(~acc.any(axis=1)).tolist():
                total = 0
                for pos, a in zip(subset, grid[row].tolist(), strict=True):
                    total = int(spec.add_table[total, spec.mul_table[a, rhs[pos]]])
                if total:
                    terms = [(p, int(a)) for p, a in zip(subset, grid[row], strict=True)]
                    log.debug("refutation found", extra={"size": size, "positions": list(subset)})
                    return Refutation(terms=terms, rhs=total)
    log.debug("no refutation", extra={"max_size": max_size})
    return None
