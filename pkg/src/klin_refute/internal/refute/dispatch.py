"""Pipeline selection for ``refute``."""

import collections
import logging
import math
from collections.abc import Mapping
from enum import Enum
from fractions import Fraction

from klin_refute.internal.instance import KLinInstance
from klin_refute.internal.kikuchi import GroupRow
from klin_refute.internal.models import (
    Caps,
    Certificate,
    CertificateKind,
    CertificateParams,
    NoCertificateError,
    Soundness,
    SpectralSettings,
    TrailStage,
    ValidationError,
    WeightedPart,
)

from ._common import clip, fraction_text
from .even import refute_even_field
from .group import exact_low_arity_value, reduce_group_pipeline, refute_even_group_robust
from .odd import refute_odd

log = logging.getLogger(__name__)


class Pipeline(str, Enum):
    """Defines the refutation pipelines selectable from the command line."""

    auto = "auto"
    even_field = "even-field"
    even_group = "even-group"
    group_reduction = "group-reduction"
    odd = "odd"


def _field_single(
    inst: KLinInstance,
    ell: int,
    eps: float,
    eta: int | None,
    thresholds: Mapping[int, int] | None,
    caps: Caps | None,
    spectral: SpectralSettings | None,
) -> Certificate:
    if inst.k % 2 == 0:
        return refute_even_field(inst, ell, eps, caps, spectral)
    return refute_odd(inst, ell, eps, eta, thresholds, caps, spectral)


def _refute_mixed(
    inst: KLinInstance,
    ell: int,
    eps: float,
    eta: int | None,
    thresholds: Mapping[int, int] | None,
    caps: Caps | None,
    spectral: SpectralSettings | None,
) -> Certificate:
    """Split a field instance by equation weight and combine the per-weight certificates."""
    by_weight: dict[int, list[int]] = collections.defaultdict(list)
    for pos, eq in enumerate(inst.equations):
        by_weight[eq.lhs.wt].append(pos)
    raw, capped = 0.0, 0.0
    loose = False
    trail: list[TrailStage] = []
    parts: list[WeightedPart] = []
    for w in sorted(by_weight):
        positions = by_weight[w]
        weight = Fraction(len(positions), inst.m)
        eqs = [inst.equations[p] for p in positions]
        if w <= 1:
            rows = [GroupRow(eq.lhs.indices, eq.lhs.values, eq.rhs) for eq in eqs]
            value = float(exact_low_arity_value(rows, inst.spec))
            trail.append(
                TrailStage(
                    name=f"wt={w}",
                    values={"weight": fraction_text(weight), "value": value},
                ),
            )
            raw += float(weight) * value
            capped += float(weight) * value
            continue
        sub_ell = ell
        if w % 2 == 0:
            sub_ell = min(max(ell, w // 2), inst.n - w // 2)
        sub = _field_single(
            inst.with_equations(eqs, k=w), sub_ell, eps, eta, thresholds, caps, spectral,
        )
        parts.append(WeightedPart(weight=fraction_text(weight), label=f"wt={w}", certificate=sub))
        raw += float(weight) * sub.raw_alg_val
        capped += float(weight) * sub.alg_val
        loose |= sub.soundness == Soundness.loose
    log.info("mixed-weight certificate", extra={"alg_val": capped, "weights": sorted(by_weight)})
    return Certificate(
        kind=CertificateKind.mixed,
        alg_val=clip(capped),
        raw_alg_val=raw,
        params=CertificateParams(
            ell=ell,
            eps=eps,
            eta=eta,
            thresholds=dict(thresholds or {}),
            pipeline=Pipeline.auto.value,
        ),
        trail=trail,
        parts=parts,
        soundness=Soundness.loose if loose else Soundness.exact,
        instance_digest=inst.digest,
    )


def refute(
    inst: KLinInstance,
    ell: int,
    eps: float = 0.5,
    eta: int | None = None,
    thresholds: Mapping[int, int] | None = None,
    pipeline: Pipeline | str = Pipeline.auto,
    caps: Caps | None = None,
    spectral: SpectralSettings | None = None,
    experimental: bool = False,
) -> Certificate:
    """Run the pipeline that fits the instance, or the one asked for.

    ``auto`` sends field instances with even k to the even pipeline and odd k to the odd
    pipeline, splitting by equation weight when weights differ. Group instances go through the
    quotient reduction; odd k there needs ``experimental``.

    Raises:
        ValidationError: The pipeline does not fit the instance.
        NoCertificateError: The instance has no equations.
        ResourceCapError: A vertex space is too large.
    """
    pipeline = Pipeline(pipeline)
    if inst.m == 0:
        raise NoCertificateError("instance has no equations")
    if not 0 < eps <= 1 or ell < 1:
        raise ValidationError(f"need ℓ >= 1 and 0 < ε <= 1, got ℓ={ell}, ε={eps}")
    spec = inst.spec
    log.debug(
        "dispatch",
        extra={"pipeline": pipeline.value, "domain": spec.describe(), "k": inst.k},
    )
    match pipeline:
        case Pipeline.even_field:
            return refute_even_field(inst, ell, eps, caps, spectral)
        case Pipeline.even_group:
            return refute_even_group_robust(inst, ell, eps, caps, spectral)
        case Pipeline.group_reduction:
            return reduce_group_pipeline(inst, ell, eps, caps, spectral, experimental)
        case Pipeline.odd:
            return refute_odd(inst, ell, eps, eta, thresholds, caps, spectral)

    if spec.is_field:
        if any(eq.lhs.wt != inst.k for eq in inst.equations):
            return _refute_mixed(inst, ell, eps, eta, thresholds, caps, spectral)
        return _field_single(inst, ell, eps, eta, thresholds, caps, spectral)
    if inst.k % 2 == 1 and not experimental:
        raise ValidationError(
            "odd-arity group instances need refute.group_odd_experimental to be enabled",
        )
    return reduce_group_pipeline(inst, ell, eps, caps, spectral, experimental)


def suggested_ell(inst: KLinInstance) -> int:
    """The smallest level every pipeline accepts: ``max(1, ⌈k/2⌉)``."""
    return max(1, math.ceil(inst.k / 2))
