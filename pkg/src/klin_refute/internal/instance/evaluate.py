"""Exact value and advantage-polynomial evaluation."""

import logging
from collections.abc import Iterator, Sequence
from fractions import Fraction

import numpy as np

from klin_refute.internal.models import (
    DEFAULT_BRUTE_FORCE_CAP,
    DimensionError,
    ResourceCapError,
    ValidationError,
)

from .model import KLinInstance

log = logging.getLogger(__name__)

CHUNK = 1 << 16


def _as_assignment(inst: KLinInstance, x: Sequence[int] | np.ndarray) -> np.ndarray:
    arr = np.asarray(x, dtype=np.int64)
    if arr.shape != (inst.n,):
        raise DimensionError(f"assignment has shape {arr.shape}, expected ({inst.n},)")
    if np.any((arr < 0) | (arr >= inst.spec.order)):
        raise ValidationError("assignment has a value outside the domain")
    return arr


def satisfied(inst: KLinInstance, x: Sequence[int] | np.ndarray) -> np.ndarray:
    """Boolean mask of satisfied equations at ``x``."""
    arr = _as_assignment(inst, x)
    return np.fromiter(
        (inst.spec.dot(eq.lhs.indices, eq.lhs.values, arr) == eq.rhs for eq in inst.equations),
        dtype=bool,
        count=inst.m,
    )


def val_at(inst: KLinInstance, x: Sequence[int] | np.ndarray) -> Fraction:
    """Fraction of equations satisfied by ``x``."""
    if inst.m == 0:
        raise ValidationError("value of an empty instance is undefined")
    return Fraction(int(satisfied(inst, x).sum()), inst.m)


def iter_assignments(order: int, n: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """All of ``[0, order)^n`` in lexicographic order, as ``(rows, n)`` blocks."""
    total = order**n
    powers = order ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        r = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield (r[:, None] // powers[None, :]) % order


def brute_force_val(
    inst: KLinInstance,
    cap: int = DEFAULT_BRUTE_FORCE_CAP,
) -> tuple[Fraction, tuple[int, ...]]:
    """Exact maximum value and its lexicographically first maximizer."""
    if inst.m == 0:
        raise ValidationError("value of an empty instance is undefined")
    size = inst.spec.order**inst.n
    if size > cap:
        raise ResourceCapError("assignment space", size, cap)
    spec = inst.spec
    best, best_x = -1, np.zeros(inst.n, dtype=np.int64)
    for block in iter_assignments(spec.order, inst.n):
        counts = np.zeros(block.shape[0], dtype=np.int64)
        for eq in inst.equations:
            acc = np.zeros(block.shape[0], dtype=np.int64)
            for i, c in eq.lhs.items():
                acc = spec.add_table[acc, spec.mul_table[c, block[:, i]]]
            counts += acc == eq.rhs
        j = int(np.argmax(counts))
        if counts[j] > best:
            best, best_x = int(counts[j]), block[j].copy()
            if best == inst.m:
                break
    return Fraction(best, inst.m), tuple(int(c) for c in best_x)


def phi_advantage(inst: KLinInstance, x: Sequence[int] | np.ndarray) -> complex:
    """``Φ(x) = (1/(|H||G|)) Σ_v Σ_{β≠0} χ_β(b_v)·conj(χ_{βv}(x))``."""
    arr = _as_assignment(inst, x)
    if inst.m == 0:
        return 0j
    spec = inst.spec
    betas = spec.units
    total = 0j
    for eq in inst.equations:
        s = spec.dot(eq.lhs.indices, eq.lhs.values, arr)
        exps = spec.phase_table[spec.mul_table[betas, eq.rhs]] - spec.phase_table[
            spec.mul_table[betas, s]
        ]
        total += np.exp(2j * np.pi * (exps % spec.exponent) / spec.exponent).sum()
    return complex(total / (inst.m * spec.order))
