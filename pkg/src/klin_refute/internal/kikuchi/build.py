"""Constructive edge enumeration for the even-field, even-group and odd Kikuchi matrices.

Each label enumerates exactly its Δ ordered pairs: a split of the label's support between the two
endpoints, a shared outside support and the shared outside values.
"""

import dataclasses
import itertools
import math
from collections.abc import Iterable, Sequence

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import KLinInstance, SparseVec
from klin_refute.internal.models import (
    DEFAULT_VERTEX_CAP,
    DomainMismatchError,
    ValidationError,
)

from .matrix import EdgeBuffer, KikuchiMatrix, MatrixKind
from .vertices import VertexSpace


@dataclasses.dataclass(frozen=True)
class GroupRow:
    """One equation over a position set; zero coefficients are allowed at padded positions."""

    positions: tuple[int, ...]
    values: tuple[int, ...]
    rhs: int


@dataclasses.dataclass(frozen=True)
class OddBucket:
    """One bucket of a bipartite decomposition, as the odd builder consumes it.

    ``residuals[j]`` is ``βv_j - u`` for the j-th scaled member and ``rhs[j]`` its scaled
    right-hand side; ``members[j]`` is the member's global index.
    """

    members: tuple[int, ...]
    residuals: tuple[SparseVec, ...]
    rhs: tuple[int, ...]


def even_delta(s: int, n: int, ell: int, radix: int) -> int:
    """Pairs per label for a support of size ``s``.

    ``C(s,s/2)·C(n-s,ℓ-s/2)·radix^(ℓ-s/2)``
    """
    half = s // 2
    if ell < half:
        return 0
    return math.comb(s, half) * math.comb(n - s, ell - half) * radix ** (ell - half)


def odd_delta(w: int, n: int, ell: int, units: int) -> int:
    """Pairs per (v, v', β) type when the residuals have weight ``w``."""
    if ell < w:
        return 0
    lo, hi = w // 2, w - w // 2
    split = (2 if w % 2 else 1) * math.comb(w, lo) * math.comb(w, hi)
    return split * math.comb(2 * n - 2 * w, ell - w) * units ** (ell - w)


def _vertex(space: VertexSpace, entries: dict[int, int]) -> int:
    support = tuple(sorted(entries))
    return space.rank(support, tuple(entries[i] for i in support))


def _check_even_range(k: int, n: int, ell: int) -> None:
    if k % 2:
        raise ValidationError(f"even Kikuchi matrices need even k, got k={k}")
    if not k // 2 <= ell <= n - k // 2:
        raise ValidationError(f"ℓ={ell} outside [{k // 2}, {n - k // 2}]")


def _enumerate_even(
    buf: EdgeBuffer,
    space: VertexSpace,
    spec: GroupSpec,
    rows: Sequence[GroupRow],
    outside_values: Sequence[int],
    labels: Sequence[int],
) -> None:
    n, ell = space.n, space.ell
    mul, neg = spec.mul_table, spec.neg_table
    for label, row in zip(labels, rows, strict=True):
        s = len(row.positions)
        half = s // 2
        taken = set(row.positions)
        outside = [i for i in range(n) if i not in taken]
        out_sets = list(itertools.combinations(outside, ell - half))
        out_vals = list(itertools.product(outside_values, repeat=ell - half))
        splits = list(itertools.combinations(range(s), half))
        for beta in spec.units:
            beta = int(beta)
            z = [int(mul[beta, c]) for c in row.values]
            g = int(mul[beta, row.rhs])
            for a_idx in splits:
                b_idx = [j for j in range(s) if j not in a_idx]
                left = {row.positions[j]: z[j] for j in a_idx}
                right = {row.positions[j]: int(neg[z[j]]) for j in b_idx}
                for out in out_sets:
                    for vals in out_vals:
                        shared = dict(zip(out, vals, strict=True))
                        buf.add(
                            _vertex(space, left | shared),
                            _vertex(space, right | shared),
                            g,
                            label,
                            -1,
                            beta,
                        )


def build_even_field(
    inst: KLinInstance,
    ell: int,
    cap: int = DEFAULT_VERTEX_CAP,
) -> KikuchiMatrix:
    """Even-arity Kikuchi matrix over a field.

    ``U → V`` with label ``(v, β)`` when ``U - V = βv`` and ``supp(U) ⊕ supp(V) = supp(v)``;
    the entry is ``χ_β(b_v)``.

    Raises:
        DomainMismatchError: The domain is not a field.
        ValidationError: k is odd, an equation is not exactly k-sparse, or ℓ is out of range.
        ResourceCapError: N exceeds ``cap``.
    """
    spec, n, k = inst.spec, inst.n, inst.k
    if not spec.is_field:
        raise DomainMismatchError(f"build_even_field needs a field, got {spec.describe()}")
    _check_even_range(k, n, ell)
    if any(eq.lhs.wt != k for eq in inst.equations):
        raise ValidationError("even-field matrices need every equation exactly k-sparse")
    space = VertexSpace.even_field(n, ell, spec.order)
    space.check_cap(cap)

    rows = [GroupRow(eq.lhs.indices, eq.lhs.values, eq.rhs) for eq in inst.equations]
    buf = EdgeBuffer()
    _enumerate_even(buf, space, spec, rows, [int(c) for c in spec.nonzero], range(inst.m))
    delta = even_delta(k, n, ell, spec.order - 1)
    return buf.freeze(MatrixKind.even_field, spec, space, delta, inst.m * (spec.order - 1))


def group_rows(inst: KLinInstance) -> list[GroupRow]:
    """Position-set rows for the group matrix; odd supports get one zero-coefficient position.

    The padding position is the smallest coordinate outside the support.
    """
    out = []
    for eq in inst.equations:
        entries = dict(eq.lhs.items())
        if len(entries) % 2:
            pad = next(i for i in range(inst.n) if i not in entries)
            entries[pad] = 0
        positions = tuple(sorted(entries))
        out.append(GroupRow(positions, tuple(entries[i] for i in positions), eq.rhs))
    return out


def build_group_rows(
    rows: Sequence[GroupRow],
    spec: GroupSpec,
    n: int,
    ell: int,
    cap: int = DEFAULT_VERTEX_CAP,
    labels: Iterable[int] | None = None,
) -> KikuchiMatrix:
    """Group Kikuchi matrix over pairs (U, S) for rows that share one even support size.

    ``(U,S) → (V,T)`` with label ``(v, β)`` when ``U - V = βv`` and ``S ⊕ T`` is the position
    set of ``v``; β ranges over ``G∖{0}``.
    """
    sizes = {len(r.positions) for r in rows}
    if len(sizes) > 1:
        raise ValidationError(f"group rows mix support sizes {sorted(sizes)}")
    s = sizes.pop() if sizes else 2
    _check_even_range(s, n, ell)
    space = VertexSpace.even_group(n, ell, spec.order)
    space.check_cap(cap)
    labels = list(labels) if labels is not None else list(range(len(rows)))

    buf = EdgeBuffer()
    _enumerate_even(buf, space, spec, rows, list(range(spec.order)), labels)
    delta = even_delta(s, n, ell, spec.order)
    return buf.freeze(MatrixKind.even_group, spec, space, delta, len(rows) * (spec.order - 1))


def build_even_group(
    inst: KLinInstance,
    ell: int,
    cap: int = DEFAULT_VERTEX_CAP,
) -> KikuchiMatrix:
    """Group Kikuchi matrix of an instance whose padded supports all have the same size.

    Raises:
        ValidationError: Supports of different (padded) sizes, or ℓ out of range.
        ResourceCapError: N exceeds ``cap``.
    """
    if inst.k % 2:
        raise ValidationError(f"even Kikuchi matrices need even k, got k={inst.k}")
    return build_group_rows(group_rows(inst), inst.spec, inst.n, ell, cap)


def build_odd(
    buckets: Sequence[OddBucket],
    spec: GroupSpec,
    n: int,
    k: int,
    ell: int,
    t: int,
    cap: int = DEFAULT_VERTEX_CAP,
) -> KikuchiMatrix:
    """Odd-arity Kikuchi matrix of one decomposition level.

    For each bucket, each ordered pair ``j ≠ j'`` and each β, ``(U¹,U²) → (V¹,V²)`` when
    ``U¹ - V¹ = βr_j`` and ``U² - V² = -βr_j'`` with the support rule on each copy, and the
    weight of ``U¹`` restricted to ``supp(r_j)`` is ``⌊w/2⌋`` or ``⌈w/2⌉``
    for ``w = k - t``.
    The entry is ``χ_β(b_j)·conj(χ_β(b_j'))``.

    Raises:
        ValidationError: A residual does not have weight ``k - t``.
        ResourceCapError: N exceeds ``cap``.
    """
    if not spec.is_field:
        raise DomainMismatchError(f"build_odd needs a field, got {spec.describe()}")
    w = k - t
    if not 1 <= t < k:
        raise ValidationError(f"odd Kikuchi level t={t} must lie in [1, {k - 1}]")
    if any(r.wt != w for b in buckets for r in b.residuals):
        raise ValidationError(
            f"decomposition inconsistent with t={t}: residuals must be {w}-sparse",
        )
    space = VertexSpace.odd_pair(n, ell, spec.order)
    space.check_cap(cap)
    mul, neg, add = spec.mul_table, spec.neg_table, spec.add_table
    units = [int(b) for b in spec.units]
    splits = sorted({w // 2, w - w // 2})

    buf = EdgeBuffer()
    num_labels = 0
    for bucket in buckets:
        size = len(bucket.members)
        num_labels += size * (size - 1) * len(units)
        for j, jp in itertools.permutations(range(size), 2):
            first, second = bucket.residuals[j], bucket.residuals[jp]
            taken = set(first.indices) | {i + n for i in second.indices}
            outside = [i for i in range(2 * n) if i not in taken]
            out_sets = list(itertools.combinations(outside, ell - w)) if ell >= w else []
            out_vals = list(itertools.product(units, repeat=max(ell - w, 0)))
            for beta in units:
                z1 = [int(mul[beta, c]) for c in first.values]
                z2 = [int(neg[mul[beta, c]]) for c in second.values]
                g = int(
                    add[mul[beta, bucket.rhs[j]], neg[mul[beta, bucket.rhs[jp]]]],
                )
                for a in splits:
                    for a_idx in itertools.combinations(range(w), a):
                        a_rest = [i for i in range(w) if i not in a_idx]
                        left1 = {first.indices[i]: z1[i] for i in a_idx}
                        right1 = {first.indices[i]: int(neg[z1[i]]) for i in a_rest}
                        for b_idx in itertools.combinations(range(w), w - a):
                            b_rest = [i for i in range(w) if i not in b_idx]
                            left = left1 | {second.indices[i] + n: z2[i] for i in b_idx}
                            right = right1 | {
                                second.indices[i] + n: int(neg[z2[i]]) for i in b_rest
                            }
                            for out in out_sets:
                                for vals in out_vals:
                                    shared = dict(zip(out, vals, strict=True))
                                    buf.add(
                                        _vertex(space, left | shared),
                                        _vertex(space, right | shared),
                                        g,
                                        bucket.members[j],
                                        bucket.members[jp],
                                        beta,
                                    )
    delta = odd_delta(w, n, ell, len(units))
    return buf.freeze(MatrixKind.odd, spec, space, delta, num_labels)
