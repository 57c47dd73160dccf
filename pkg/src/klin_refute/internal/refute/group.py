"""Refutation over finite Abelian groups.

The robust Kikuchi certificate and the quotient reduction.
"""

import collections
import dataclasses
import logging
import math
from collections.abc import Sequence
from fractions import Fraction

from klin_refute.internal.algebra import GroupSpec, find_quotient_subgroup, robustness
from klin_refute.internal.instance import KLinInstance
from klin_refute.internal.kikuchi import GroupRow, build_group_rows, group_rows, scaled_norm
from klin_refute.internal.models import (
    Caps,
    Certificate,
    CertificateKind,
    CertificateParams,
    NoCertificateError,
    Soundness,
    SpectralSettings,
    TrailStage,
)

from ._common import clip, fraction_text, kikuchi_stage
from .even import refute_even_field

log = logging.getLogger(__name__)


@dataclasses.dataclass
class _RowsBound:
    raw: float
    trail: list[TrailStage]
    loose: bool


def pad_row(row: GroupRow, n: int) -> GroupRow:
    """Add one zero-coefficient position to an odd-size row."""
    if len(row.positions) % 2 == 0:
        return row
    pad = next(i for i in range(n) if i not in row.positions)
    entries = dict(zip(row.positions, row.values, strict=True)) | {pad: 0}
    positions = tuple(sorted(entries))
    return GroupRow(positions, tuple(entries[i] for i in positions), row.rhs)


def exact_low_arity_value(rows: Sequence[GroupRow], spec: GroupSpec) -> Fraction:
    """Exact value of equations with at most one nonzero coefficient.

    Constant equations are satisfied iff their rhs is zero; single-variable equations are
    maximised one variable at a time.
    """
    if not rows:
        raise NoCertificateError("no low-arity equations")
    satisfied = 0
    per_var: dict[int, list[tuple[int, int]]] = collections.defaultdict(list)
    for row in rows:
        nonzero = [(i, c) for i, c in zip(row.positions, row.values, strict=True) if c]
        if not nonzero:
            satisfied += row.rhs == 0
        else:
            i, c = nonzero[0]
            per_var[i].append((c, row.rhs))
    for eqs in per_var.values():
        satisfied += max(
            sum(int(spec.mul_table[c, x]) == b for c, b in eqs) for x in range(spec.order)
        )
    return Fraction(satisfied, len(rows))


def _refute_rows(
    rows: Sequence[GroupRow],
    spec: GroupSpec,
    n: int,
    ell: int,
    caps: Caps,
    spectral: SpectralSettings | None,
    label: str,
) -> _RowsBound:
    """Weighted group Kikuchi bound over rows bucketed by (padded) support size."""
    buckets: dict[int, list[GroupRow]] = collections.defaultdict(list)
    for row in rows:
        padded = pad_row(row, n)
        buckets[len(padded.positions)].append(padded)
    q = spec.order
    raw = 0.0
    trail: list[TrailStage] = []
    loose = False
    for s in sorted(buckets):
        bucket = buckets[s]
        weight = len(bucket) / len(rows)
        if s == 0:
            value = float(exact_low_arity_value(bucket, spec))
            trail.append(TrailStage(name=f"{label}/s=0", values={"weight": weight, "value": value}))
        else:
            A = build_group_rows(bucket, spec, n, ell, cap=caps.vertices)
            stats = A.degrees()
            norm = scaled_norm(A, stats.gamma, spectral)
            value = 1 / q + 2 * (q - 1) / q * norm.value
            loose |= norm.loose
            trail.append(
                kikuchi_stage(f"{label}/s={s}", A, stats, norm, weight=weight, value=value),
            )
        raw += weight * value
    return _RowsBound(raw, trail, loose)


def min_robustness(inst: KLinInstance) -> Fraction | None:
    """Smallest robustness over equations with at least k/2 nonzero coefficients."""
    values = [
        robustness(eq.lhs, inst.k, inst.spec)
        for eq in inst.equations
        if eq.lhs.wt >= inst.k // 2
    ]
    return min(values, default=None)


def refute_even_group_robust(
    inst: KLinInstance,
    ell: int,
    eps: float = 0.5,
    caps: Caps | None = None,
    spectral: SpectralSettings | None = None,
) -> Certificate:
    """Certify a bound on ``val(I)`` with the group matrix.

    The bound is ``1/|G| + (2|G∖0|/|G|)·‖Γ^{-1/2} A Γ^{-1/2}‖``.

    Equations are bucketed by padded support size and each bucket is certified on its own; the
    certificate is the mass-weighted average. The instance's robustness is recorded.

    Raises:
        NoCertificateError: The instance has no equations.
        ResourceCapError: A vertex space is too large.
    """
    if inst.m == 0:
        raise NoCertificateError("instance has no equations")
    caps = caps or Caps()
    bound = _refute_rows(group_rows(inst), inst.spec, inst.n, ell, caps, spectral, "group")
    lam = min_robustness(inst)
    log.info(
        "even-group certificate",
        extra={"alg_val": bound.raw, "lambda": str(lam), "m": inst.m},
    )
    return Certificate(
        kind=CertificateKind.even_group,
        alg_val=clip(bound.raw),
        raw_alg_val=bound.raw,
        params=CertificateParams(ell=ell, eps=eps, pipeline="even-group"),
        trail=[
            TrailStage(name="robustness", values={"lambda": None if lam is None else str(lam)}),
            *bound.trail,
        ],
        soundness=Soundness.loose if bound.loose else Soundness.exact,
        instance_digest=inst.digest,
    )


def reduce_group_pipeline(
    inst: KLinInstance,
    ell: int,
    eps: float,
    caps: Caps | None = None,
    spectral: SpectralSettings | None = None,
    experimental: bool = False,
) -> Certificate:
    """Reduce to a robust quotient and combine exact and spectral sub-certificates.

    Equations are mapped into ``G/H`` for the subgroup found with ``t = ⌈4/ε⌉``. Those left
    with at most one nonzero coefficient are solved exactly (I₀); those with two or more zero
    coefficients lose them (I₂); the rest keep their position sets (I₁). A part holding at most
    an ε/4 fraction of the equations is given value 1.

    Raises:
        NoCertificateError: The instance has no equations.
        ResourceCapError: A vertex space is too large.
    """
    if inst.m == 0:
        raise NoCertificateError("instance has no equations")
    if inst.spec.is_field:
        log.debug("field domain, quotient is the identity")
        return refute_even_field(inst, ell, eps, caps, spectral)
    caps = caps or Caps()
    spec = inst.spec
    t = math.ceil(4 / eps)
    quot = find_quotient_subgroup(spec, t)
    target = quot.quotient or spec

    parts: dict[str, list[GroupRow]] = {"I0": [], "I1": [], "I2": []}
    for eq in inst.equations:
        values = tuple(quot.project(spec, c) for c in eq.lhs.values)
        rhs = quot.project(spec, eq.rhs)
        nonzero = [(i, c) for i, c in zip(eq.lhs.indices, values, strict=True) if c]
        zeros = len(values) - len(nonzero)
        if len(nonzero) <= 1:
            parts["I0"].append(GroupRow(eq.lhs.indices, values, rhs))
        elif zeros >= 2:
            parts["I2"].append(
                GroupRow(tuple(i for i, _ in nonzero), tuple(c for _, c in nonzero), rhs),
            )
        else:
            parts["I1"].append(GroupRow(eq.lhs.indices, values, rhs))

    trail = [
        TrailStage(
            name="quotient",
            values={
                "t": t,
                "case": quot.case,
                "subgroup_order": quot.subgroup.order,
                "quotient": target.describe(),
                "verified": quot.verified,
            },
        ),
    ]
    raw = 0.0
    loose = False
    split: dict[str, str | float] = {}
    for name, rows in parts.items():
        weight = Fraction(len(rows), inst.m)
        split[f"w_{name}"] = fraction_text(weight)
        if not rows:
            split[f"v_{name}"] = 0.0
            continue
        if name == "I0":
            value = float(exact_low_arity_value(rows, target))
        elif weight <= Fraction(eps) / 4:
            log.debug("sparse part given value 1", extra={"part": name, "weight": float(weight)})
            value = 1.0
        else:
            bound = _refute_rows(rows, target, inst.n, ell, caps, spectral, name)
            value = bound.raw
            loose |= bound.loose
            trail.extend(bound.trail)
        split[f"v_{name}"] = value
        raw += float(weight) * value
    trail.insert(1, TrailStage(name="split", values=split))

    log.info("group-reduction certificate", extra={"alg_val": raw, "quotient": target.describe()})
    return Certificate(
        kind=CertificateKind.group_reduction,
        alg_val=clip(raw),
        raw_alg_val=raw,
        params=CertificateParams(
            ell=ell,
            eps=eps,
            pipeline="group-reduction",
            group_odd_experimental=experimental,
        ),
        trail=trail,
        soundness=Soundness.loose if loose else Soundness.exact,
        instance_digest=inst.digest,
    )
