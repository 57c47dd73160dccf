"""Local degrees of odd-arity Kikuchi matrices."""

import dataclasses

import numpy as np

from klin_refute.internal.models import ValidationError

from .matrix import KikuchiMatrix, MatrixKind


@dataclasses.dataclass(frozen=True)
class LocalDegreeStats:
    """``counts[(U, v, b)]``: number of distinct partners of member ``v`` at vertex ``U``.

    Side ``b = 0`` counts partners ``v'`` of labels ``(v, v', ·)``; side ``b = 1`` counts
    partners ``v`` of labels ``(v, v', ·)`` keyed by ``v'``.
    """

    counts: dict[tuple[int, int, int], int]

    @property
    def max(self) -> int:
        """Largest local degree, 0 for an empty matrix."""
        return max(self.counts.values(), default=0)


def partner_triples(A: KikuchiMatrix) -> np.ndarray:
    """Distinct (row, v, v') triples present in the matrix."""
    if A.nnz == 0:
        return np.zeros((0, 3), dtype=np.int64)
    return np.unique(np.stack([A.rows, A.eq_a, A.eq_b], axis=1), axis=0)


def local_degrees(A: KikuchiMatrix) -> LocalDegreeStats:
    """Exact local degrees by a scan of the edge labels.

    Raises:
        ValidationError: The matrix is not odd-arity.
    """
    if A.kind != MatrixKind.odd:
        raise ValidationError(f"local degrees are defined for odd matrices, got {A.kind.value}")
    triples = partner_triples(A)
    counts: dict[tuple[int, int, int], int] = {}
    for side, col in ((0, 1), (1, 2)):
        if triples.size == 0:
            break
        keys, freq = np.unique(triples[:, [0, col]], axis=0, return_counts=True)
        for (u, v), c in zip(keys, freq, strict=True):
            counts[(int(u), int(v), side)] = int(c)
    return LocalDegreeStats(counts)
