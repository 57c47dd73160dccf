"""Regularity decomposition of a bare vector set, used by the odd dependency search."""

import logging
import math
from collections.abc import Mapping

from klin_refute.internal.instance import KLinInstance, SparseVec
from klin_refute.internal.models import DomainMismatchError, ValidationError
from klin_refute.internal.refute import BipartiteDecomposition, Bucket, Member, fill_levels

log = logging.getLogger(__name__)


def vector_thresholds(n: int, k: int, ell: int, units: int) -> dict[int, int]:
    """``τ_t = ⌈max(2, (n|F*|/ℓ)^{k/2-t})⌉`` for ``t = 1..k-1``."""
    base = n * units / ell
    return {t: math.ceil(max(2.0, base ** (k / 2 - t))) for t in range(1, k)}


def vector_decompose(
    inst: KLinInstance,
    ell: int,
    thresholds: Mapping[int, int] | None = None,
) -> list[BipartiteDecomposition]:
    """Split the vectors into levels ``t = k-1, ..., 1`` and a garbage part ``t = 0``.

    Levels are filled greedily as in the refutation decomposition; whatever is left forms one
    leftover bucket at ``t = 0`` with the zero prefix.

    Raises:
        DomainMismatchError: The domain is not a field.
        ValidationError: A vector is not exactly k-sparse, or a threshold is below 1.
    """
    spec, k = inst.spec, inst.k
    if not spec.is_field:
        raise DomainMismatchError(f"vector_decompose needs a field, got {spec.describe()}")
    if any(v.wt != k for v in inst.vectors):
        raise ValidationError("vector_decompose needs every vector exactly k-sparse")
    tau = vector_thresholds(inst.n, k, ell, spec.order - 1) | dict(thresholds or {})
    if any(tau[t] < 1 for t in tau):
        raise ValidationError(f"thresholds must be positive, got {tau}")

    assigned: set[int] = set()
    levels = fill_levels(inst, tau, range(k - 1, 0, -1), assigned)
    out = [BipartiteDecomposition(t, tau[t], tuple(levels[t])) for t in range(k - 1, 0, -1)]
    garbage = tuple(Member(p, 1) for p in range(inst.m) if p not in assigned)
    out.append(
        BipartiteDecomposition(
            0,
            0,
            (Bucket(SparseVec.zero(inst.n), garbage, leftover=True),) if garbage else (),
        ),
    )
    log.debug(
        "vector decomposition",
        extra={"sizes": {d.t: d.size for d in out}, "garbage": len(garbage)},
    )
    return out
