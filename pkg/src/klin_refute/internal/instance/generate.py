"""Seeded instance generators."""

from collections.abc import Sequence

import numpy as np

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.models import ValidationError

from .model import Equation, KLinInstance, SparseVec


def _random_vector(
    rng: np.random.Generator,
    spec: GroupSpec,
    n: int,
    k: int,
    width: int | None = None,
) -> SparseVec:
    support = np.sort(rng.choice(width if width is not None else n, size=k, replace=False))
    values = rng.choice(spec.nonzero, size=k)
    return SparseVec(n, tuple(int(i) for i in support), tuple(int(c) for c in values))


def _check_shape(n: int, k: int, m: int) -> None:
    if not 1 <= k <= n:
        raise ValidationError(f"need 1 <= k <= n, got k={k}, n={n}")
    if m < 1:
        raise ValidationError(f"need m >= 1, got {m}")


def gen_random(spec: GroupSpec, n: int, k: int, m: int, seed: int) -> KLinInstance:
    """Uniform k-sparse left-hand sides, nonzero uniform coefficients, uniform right-hand sides."""
    _check_shape(n, k, m)
    rng = np.random.default_rng(seed)
    equations = []
    for _ in range(m):
        lhs = _random_vector(rng, spec, n, k)
        equations.append(Equation(lhs, int(rng.integers(spec.order))))
    return KLinInstance(spec, n, k, tuple(equations), seed=seed, source="random")


def gen_semirandom(
    lhs: Sequence[SparseVec],
    spec: GroupSpec,
    seed: int,
    k: int | None = None,
) -> KLinInstance:
    """Fresh uniform right-hand sides for arbitrary left-hand sides."""
    if not lhs:
        raise ValidationError("semirandom generation needs at least one left-hand side")
    n = lhs[0].n
    k = k if k is not None else max(v.wt for v in lhs)
    rng = np.random.default_rng(seed)
    equations = tuple(Equation(v, int(rng.integers(spec.order))) for v in lhs)
    return KLinInstance(spec, n, k, equations, seed=seed, source="semirandom")


def clustered_lhs(
    spec: GroupSpec,
    n: int,
    k: int,
    m: int,
    width: int,
    seed: int,
) -> list[SparseVec]:
    """Left-hand sides whose supports all lie inside the first ``width`` coordinates."""
    _check_shape(n, k, m)
    if not k <= width <= n:
        raise ValidationError(f"need k <= width <= n, got width={width}")
    rng = np.random.default_rng(seed)
    return [_random_vector(rng, spec, n, k, width=width) for _ in range(m)]


def gen_planted(spec: GroupSpec, n: int, k: int, m: int, seed: int) -> KLinInstance:
    """Random left-hand sides with right-hand sides satisfied by a hidden assignment."""
    _check_shape(n, k, m)
    rng = np.random.default_rng(seed)
    hidden = rng.integers(spec.order, size=n)
    equations = []
    for _ in range(m):
        lhs = _random_vector(rng, spec, n, k)
        equations.append(Equation(lhs, spec.dot(lhs.indices, lhs.values, hidden)))
    return KLinInstance(spec, n, k, tuple(equations), seed=seed, source="planted")
