"""Edge deletion for odd-arity Kikuchi matrices.

First every vertex keeps at most η partners per (member, side), dropping the highest-numbered
partners. Then every (v, v', β) type is trimmed to the smallest surviving type count. Each edge is
deleted together with its mirror, so the result stays Hermitian.
"""

import collections
import dataclasses
import logging
import math

import numpy as np

from klin_refute.internal.kikuchi import KikuchiMatrix, MatrixKind
from klin_refute.internal.models import ValidationError

log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class EdgeDeletion:
    """The trimmed matrix, the deleted fraction ρ and per-key partner trims."""

    matrix: KikuchiMatrix
    rho: float
    retained_per_type: int
    trimmed: dict[tuple[int, int, int], int]


def default_eta(k: int, eps: float) -> int:
    """``η = 3^k·⌈ε⁻²⌉``."""
    return 3**k * math.ceil(eps**-2)


def _mirrors(A: KikuchiMatrix) -> np.ndarray:
    index = {
        key: e
        for e, key in enumerate(
            zip(A.rows.tolist(), A.eq_a.tolist(), A.eq_b.tolist(), A.betas.tolist(), strict=True),
        )
    }
    neg = A.spec.neg_table
    return np.asarray(
        [
            index[(int(c), int(a), int(b), int(neg[beta]))]
            for c, a, b, beta in zip(A.cols, A.eq_a, A.eq_b, A.betas, strict=True)
        ],
        dtype=np.int64,
    )


def edge_delete(A: KikuchiMatrix, eta: int) -> EdgeDeletion:
    """Bound local degrees by ``eta`` and equalise the per-type edge counts.

    Raises:
        ValidationError: ``eta < 1`` or the matrix is not odd-arity.
    """
    if eta < 1:
        raise ValidationError(f"η must be at least 1, got {eta}")
    if A.kind != MatrixKind.odd:
        raise ValidationError(f"edge deletion applies to odd matrices, got {A.kind.value}")
    if A.nnz == 0:
        return EdgeDeletion(A, 0.0, 0, {})
    mirror = _mirrors(A)
    alive = np.ones(A.nnz, dtype=bool)
    rows, eq_a, eq_b = A.rows.tolist(), A.eq_a.tolist(), A.eq_b.tolist()
    trimmed: dict[tuple[int, int, int], int] = {}

    def kill(e: int) -> None:
        alive[e] = False
        alive[mirror[e]] = False

    for side in (0, 1):
        own, other = (eq_a, eq_b) if side == 0 else (eq_b, eq_a)
        groups: dict[tuple[int, int], dict[int, list[int]]] = collections.defaultdict(
            lambda: collections.defaultdict(list),
        )
        for e in np.flatnonzero(alive).tolist():
            groups[(rows[e], own[e])][other[e]].append(e)
        for (u, v), partners in sorted(groups.items()):
            live = sorted(p for p, edges in partners.items() if any(alive[e] for e in edges))
            if len(live) <= eta:
                continue
            drop = live[eta:]
            trimmed[(u, v, side)] = len(drop)
            for p in drop:
                for e in partners[p]:
                    if alive[e]:
                        kill(e)

    types: dict[tuple[int, int, int], list[int]] = collections.defaultdict(list)
    for e, key in enumerate(zip(eq_a, eq_b, A.betas.tolist(), strict=True)):
        types[key].append(e)
    counts = {key: int(alive[edges].sum()) for key, edges in types.items()}
    target = min(counts.values())
    for key in sorted(types):
        edges = types[key]
        for e in reversed(edges):
            if counts[key] <= target:
                break
            if not alive[e]:
                continue
            m = int(mirror[e])
            kill(e)
            counts[key] -= 1
            mkey = (eq_a[m], eq_b[m], int(A.betas[m]))
            counts[mkey] -= 1

    rho = 1 - target / A.delta
    log.debug(
        "edge deletion",
        extra={"eta": eta, "rho": rho, "deleted": int((~alive).sum()), "trimmed": len(trimmed)},
    )
    return EdgeDeletion(A.select(alive), rho, target, trimmed)
