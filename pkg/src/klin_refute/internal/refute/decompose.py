"""Regularity decomposition of a k-LIN instance into bipartite pieces.

Level ``t`` groups equations that, after scaling, share a t-sparse prefix ``u``. Levels are
filled greedily from ``t = k`` down to ``t = 1``; what remains is bucketed by its first nonzero
coordinate.
"""

import collections
import dataclasses
import itertools
import logging
import math
from collections.abc import Iterable, Mapping

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import Equation, KLinInstance, SparseVec, vec_scale
from klin_refute.internal.kikuchi import OddBucket
from klin_refute.internal.models import DomainMismatchError, Report, ValidationError

log = logging.getLogger(__name__)

PrefixKey = tuple[tuple[int, ...], tuple[int, ...]]


@dataclasses.dataclass(frozen=True)
class Member:
    """An equation position together with the scalar β applied to it."""

    position: int
    scalar: int


@dataclasses.dataclass(frozen=True)
class Bucket:
    """Members sharing the prefix ``u``; ``leftover`` marks first-coordinate buckets."""

    prefix: SparseVec
    members: tuple[Member, ...]
    leftover: bool = False


@dataclasses.dataclass(frozen=True)
class BipartiteDecomposition:
    """All buckets of one level ``t`` with the threshold ``τ_t`` used to form them."""

    t: int
    threshold: int
    buckets: tuple[Bucket, ...]

    @property
    def size(self) -> int:
        """``|H^(t)|``, the number of members."""
        return sum(len(b.members) for b in self.buckets)

    @property
    def prefixes(self) -> int:
        """``|U^(t)|``, the number of buckets."""
        return len(self.buckets)

    def scaled(self, inst: KLinInstance) -> list[list[Equation]]:
        """Scaled member equations, bucket by bucket."""
        spec = inst.spec
        return [
            [
                Equation(
                    vec_scale(inst.equations[m.position].lhs, m.scalar, spec),
                    int(spec.mul_table[m.scalar, inst.equations[m.position].rhs]),
                )
                for m in b.members
            ]
            for b in self.buckets
        ]

    def odd_buckets(self, inst: KLinInstance) -> list[OddBucket]:
        """Buckets in the form the odd Kikuchi builder consumes; member ids are positions."""
        out = []
        for bucket, eqs in zip(self.buckets, self.scaled(inst), strict=True):
            keep = [i for i in range(inst.n) if i not in bucket.prefix.support]
            out.append(
                OddBucket(
                    members=tuple(m.position for m in bucket.members),
                    residuals=tuple(eq.lhs.restrict(keep) for eq in eqs),
                    rhs=tuple(eq.rhs for eq in eqs),
                ),
            )
        return out


def default_thresholds(n: int, k: int, ell: int, eps: float, units: int) -> dict[int, int]:
    """``τ_t = ⌈max(1, (n|F*|/ℓ)^{k/2-t})·4k²ε⁻²⌉`` for ``t = 1..k``."""
    base = n * units / ell
    return {
        t: math.ceil(max(1.0, base ** (k / 2 - t)) * 4 * k * k / (eps * eps))
        for t in range(1, k + 1)
    }


def _prefix_key(v: SparseVec, subset: tuple[int, ...], spec: GroupSpec) -> tuple[PrefixKey, int]:
    scalar = spec.inverse(v.get(subset[0]))
    return (subset, tuple(int(spec.mul_table[scalar, v.get(i)]) for i in subset)), scalar


def fill_levels(
    inst: KLinInstance,
    tau: Mapping[int, int],
    levels: Iterable[int],
    assigned: set[int],
) -> dict[int, list[Bucket]]:
    """Greedy bucket filling for the given levels, in order.

    At each level the prefix shared by the most unassigned equations is taken while at least
    ``τ_t`` share it; ties go to the smallest prefix and members are taken by position.
    ``assigned`` is updated in place.
    """
    spec = inst.spec
    out: dict[int, list[Bucket]] = {}
    for t in levels:
        members: dict[PrefixKey, list[Member]] = collections.defaultdict(list)
        pos_keys: dict[int, list[PrefixKey]] = collections.defaultdict(list)
        for pos, eq in enumerate(inst.equations):
            if pos in assigned:
                continue
            for subset in itertools.combinations(eq.lhs.indices, t):
                key, scalar = _prefix_key(eq.lhs, subset, spec)
                members[key].append(Member(pos, scalar))
                pos_keys[pos].append(key)
        counts = {key: len(lst) for key, lst in members.items()}

        buckets: list[Bucket] = []
        while counts:
            best = min(counts, key=lambda q: (-counts[q], q))
            if counts[best] < tau[t]:
                break
            chosen = tuple(m for m in members[best] if m.position not in assigned)[: tau[t]]
            for m in chosen:
                assigned.add(m.position)
                for key in pos_keys[m.position]:
                    counts[key] -= 1
            subset, values = best
            buckets.append(Bucket(SparseVec(inst.n, subset, values), chosen))
        out[t] = buckets
    return out


def regular_decompose(
    inst: KLinInstance,
    ell: int,
    eps: float,
    thresholds: Mapping[int, int] | None = None,
) -> list[tuple[KLinInstance, BipartiteDecomposition]]:
    """Split the instance into levels ``t = k, ..., 1``.

    Levels are filled by ``fill_levels``; unassigned equations are bucketed by their first
    nonzero coordinate into level 1.

    Args:
        inst: An instance over a field with every equation exactly k-sparse.
        ell: Kikuchi level, used by the default thresholds.
        eps: Target advantage, used by the default thresholds.
        thresholds: Overrides for individual ``τ_t``.

    Returns:
        One ``(I^(t), decomposition)`` pair per level, highest ``t`` first. ``I^(t)`` holds the
        scaled member equations in bucket order.
    """
    spec, k = inst.spec, inst.k
    if not spec.is_field:
        raise DomainMismatchError(f"regular_decompose needs a field, got {spec.describe()}")
    if any(eq.lhs.wt != k for eq in inst.equations):
        raise ValidationError("regular_decompose needs every equation exactly k-sparse")
    tau = default_thresholds(inst.n, k, ell, eps, spec.order - 1) | dict(thresholds or {})
    if any(tau[t] < 1 for t in tau):
        raise ValidationError(f"thresholds must be positive, got {tau}")

    assigned: set[int] = set()
    levels = fill_levels(inst, tau, range(k, 0, -1), assigned)

    leftovers: dict[int, list[Member]] = collections.defaultdict(list)
    for pos, eq in enumerate(inst.equations):
        if pos not in assigned:
            i = eq.lhs.indices[0]
            leftovers[i].append(Member(pos, spec.inverse(eq.lhs.get(i))))
    for i in sorted(leftovers):
        prefix = SparseVec(inst.n, (i,), (1,))
        levels[1].append(Bucket(prefix, tuple(leftovers[i]), leftover=True))

    out = []
    for t in range(k, 0, -1):
        decomp = BipartiteDecomposition(t, tau[t], tuple(levels[t]))
        eqs = [eq for bucket in decomp.scaled(inst) for eq in bucket]
        out.append((inst.with_equations(eqs), decomp))
        log.debug(
            "decomposition level",
            extra={"t": t, "tau": tau[t], "buckets": decomp.prefixes, "members": decomp.size},
        )
    return out


def audit_decomposition(
    inst: KLinInstance,
    levels: list[tuple[KLinInstance, BipartiteDecomposition]],
) -> Report:
    """Independent re-check of the decomposition guarantees.

    Checks the partition, the prefix property of every scaled member, the bucket size rules,
    the prefix-count bound and regularity of each level against every higher threshold. The
    prefix-count bound for ``t = 1`` relies on ``n·τ_1 <= |H|``; below that density only the
    higher levels are counted and the detail records the skip.
    """
    spec, k, m = inst.spec, inst.k, inst.m
    report = Report(subject="decomposition")
    decomps = {d.t: d for _, d in levels}
    tau = {t: d.threshold for t, d in decomps.items()}

    seen = collections.Counter(
        mem.position for d in decomps.values() for b in d.buckets for mem in b.members
    )
    report.add(
        "partition",
        sorted(seen) == list(range(m)) and all(c == 1 for c in seen.values()),
        f"{len(seen)} of {m} positions",
    )

    bad_prefix = []
    for d in decomps.values():
        for b in d.buckets:
            u = dict(b.prefix.items())
            for mem in b.members:
                w = dict(vec_scale(inst.equations[mem.position].lhs, mem.scalar, spec).items())
                if len(u) != d.t or any(w.get(i) != c for i, c in u.items()):
                    bad_prefix.append(mem.position)
    report.add("prefix", not bad_prefix, f"violations at {bad_prefix[:5]}")

    bad_size = [
        (d.t, len(b.members))
        for d in decomps.values()
        for b in d.buckets
        if (b.leftover and (d.t != 1 or len(b.members) > tau[1]))
        or (not b.leftover and len(b.members) != tau[d.t])
    ]
    report.add("bucket-size", not bad_size, f"violations {bad_size[:5]}")

    # t >= 2 buckets hold exactly τ_t members each; t = 1 adds up to n leftover buckets
    dense = inst.n * tau[1] <= m
    checked = [t for t in decomps if t >= 2 or dense]
    over = [t for t in checked if decomps[t].prefixes * tau[t] > 2 * m]
    detail = f"levels {over} exceed 2|H|/τ_t" if over else "within 2|H|/τ_t"
    if not dense:
        detail += "; t=1 skipped, n·τ_1 > |H|"
    report.add("prefix-count", not over, detail)

    irregular = []
    for t, d in decomps.items():
        vectors = [
            inst.equations[mem.position].lhs for b in d.buckets for mem in b.members
        ]
        for tp in range(t + 1, k + 1):
            counts: collections.Counter[PrefixKey] = collections.Counter()
            for v in vectors:
                for subset in itertools.combinations(v.indices, tp):
                    lead = spec.inverse(v.get(subset[0]))
                    pattern = tuple(int(spec.mul_table[lead, v.get(i)]) for i in subset)
                    counts[(subset, pattern)] += 1
            if counts and max(counts.values()) >= tau[tp]:
                irregular.append((t, tp))
    report.add("regularity", not irregular, f"levels (t, t') {irregular[:5]}")
    return report
