"""Brute-force refutation over all ℓ-subsets of the variables.

For every ``S`` of size ℓ the equations supported inside ``S`` are solved exactly over ``G^S``.
Each equation of weight ``w`` lies in ``C(n-w, ℓ-w)`` subsets and is counted with weight
``1/C(n-w, ℓ-w)``, so the average of the per-subset optima bounds ``val(I)`` from above. For
exactly k-sparse instances this is the normalisation by ``C(n-k, ℓ-k)``.
"""

import logging
import math
import time
from collections.abc import Iterator
from enum import Enum
from fractions import Fraction

import numpy as np

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import Equation, KLinInstance, iter_assignments
from klin_refute.internal.kikuchi import unrank_subset
from klin_refute.internal.models import (
    Caps,
    Certificate,
    CertificateKind,
    CertificateParams,
    NoCertificateError,
    ResourceCapError,
    TrailStage,
    ValidationError,
)

log = logging.getLogger(__name__)


class SimpleVariant(str, Enum):
    """Defines how sparse subsets are treated.

    Can either be
    - random: every subset is solved.
    - semirandom: subsets holding fewer than ``(ε/2C)|H|`` equations are given value 1.
    """

    random = "random"
    semirandom = "semirandom"


def simple_constant(n: int, k: int, ell: int) -> Fraction:
    """``C = C(n, ℓ) / C(n, ℓ-k)``."""
    return Fraction(math.comb(n, ell), math.comb(n, ell - k))


def subset_buckets(inst: KLinInstance, ell: int) -> Iterator[tuple[tuple[int, ...], list[int]]]:
    """``(S, positions of equations with supp(v) ⊆ S)`` for every ℓ-subset, in colex order."""
    for r in range(math.comb(inst.n, ell)):
        subset = unrank_subset(r, inst.n, ell)
        members = set(subset)
        yield subset, [p for p, eq in enumerate(inst.equations) if eq.lhs.support <= members]


def _best_on_subset(
    subset: tuple[int, ...],
    eqs: list[Equation],
    weights: list[int],
    spec: GroupSpec,
) -> int:
    """Largest weighted count of satisfied equations over all assignments to ``subset``."""
    local = {i: j for j, i in enumerate(subset)}
    best = 0
    for block in iter_assignments(spec.order, len(subset)):
        score = np.zeros(block.shape[0], dtype=np.int64)
        for eq, w in zip(eqs, weights, strict=True):
            acc = np.zeros(block.shape[0], dtype=np.int64)
            for i, c in eq.lhs.items():
                acc = spec.add_table[acc, spec.mul_table[c, block[:, local[i]]]]
            score += w * (acc == eq.rhs)
        best = max(best, int(score.max()))
    return best


def simple_refute(
    inst: KLinInstance,
    ell: int,
    variant: SimpleVariant | str = SimpleVariant.random,
    eps: float = 0.5,
    caps: Caps | None = None,
) -> Certificate:
    """Certify ``val(I)`` by averaging exact optima over all ℓ-subsets.

    Raises:
        ValidationError: ``ℓ`` is outside ``[k, n]``.
        NoCertificateError: The instance has no equations.
        ResourceCapError: ``|G|^ℓ`` exceeds the brute-force cap.
    """
    variant = SimpleVariant(variant)
    caps = caps or Caps()
    n, k, spec = inst.n, inst.k, inst.spec
    if not k <= ell <= n:
        raise ValidationError(f"the simple refuter needs k <= ℓ <= n, got ℓ={ell}")
    if inst.m == 0:
        raise NoCertificateError("instance has no equations")
    local_size = spec.order**ell
    if local_size > caps.brute_force:
        raise ResourceCapError("local assignment space", local_size, caps.brute_force)

    start = time.perf_counter()
    # weight 1/C(n-w, ℓ-w) scaled to integers by the common multiple
    counts = [math.comb(n - eq.lhs.wt, ell - eq.lhs.wt) for eq in inst.equations]
    denom = math.lcm(*counts)
    weights = [denom // c for c in counts]

    constant = simple_constant(n, k, ell)
    cutoff = Fraction(eps) / (2 * constant) * inst.m
    total = 0
    solved = sparse = 0
    for subset, positions in subset_buckets(inst, ell):
        if not positions:
            continue
        w = [weights[p] for p in positions]
        if variant == SimpleVariant.semirandom and len(positions) < cutoff:
            sparse += 1
            total += sum(w)
            continue
        solved += 1
        total += _best_on_subset(subset, [inst.equations[p] for p in positions], w, spec)

    exact = Fraction(total, denom * inst.m)
    raw = float(exact)
    elapsed = (time.perf_counter() - start) * 1000
    log.info(
        "simple certificate",
        extra={"alg_val": raw, "ell": ell, "variant": variant.value, "elapsed_ms": elapsed},
    )
    if raw > 1:
        log.warning("alg-val clipped", extra={"raw_alg_val": raw})
    return Certificate(
        kind=CertificateKind.simple,
        alg_val=min(raw, 1.0),
        raw_alg_val=raw,
        params=CertificateParams(ell=ell, eps=eps, variant=variant.value, pipeline="simple"),
        trail=[
            TrailStage(
                name="simple",
                values={
                    "subsets": math.comb(n, ell),
                    "solved": solved,
                    "sparse": sparse,
                    "constant": f"{constant.numerator}/{constant.denominator}",
                    "normalisation": math.comb(n - k, ell - k),
                    "exact": f"{exact.numerator}/{exact.denominator}",
                },
            ),
        ],
        instance_digest=inst.digest,
    )
