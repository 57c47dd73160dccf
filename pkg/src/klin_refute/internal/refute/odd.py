"""Odd-arity refutation over a field.

After the regularity decomposition, each level's part of the advantage polynomial is bounded
through Cauchy-Schwarz by a bipartite polynomial: a constant diagonal term plus a quadratic form
of the odd Kikuchi matrix.
"""

import dataclasses
import logging
import math
from collections.abc import Mapping, Sequence

import numpy as np

from klin_refute.internal.instance import KLinInstance
from klin_refute.internal.kikuchi import build_odd, scaled_norm
from klin_refute.internal.models import (
    Caps,
    Certificate,
    CertificateKind,
    CertificateParams,
    DimensionError,
    DomainMismatchError,
    NoCertificateError,
    Soundness,
    SpectralSettings,
    TrailStage,
)

from ._common import clip
from .decompose import BipartiteDecomposition, regular_decompose
from .edge_delete import default_eta, edge_delete

log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class BipartiteBound:
    """An upper bound on ``max_x Ψ_t(x)`` with the quantities that produced it."""

    value: float
    stage: TrailStage
    loose: bool = False


def _scale(k: int, decomp: BipartiteDecomposition, total: int, order: int) -> float:
    return k * k * decomp.prefixes / (total * total * order)


def bipartite_polynomial(
    original: KLinInstance,
    decomp: BipartiteDecomposition,
    x: Sequence[int] | np.ndarray,
) -> float:
    """``Ψ_t(x) = k²|U|/(|H|²|F|)·Σ_u Σ_β |Σ_j χ_β(b_j)·conj(χ_{βr_j}(x))|²``.

    ``Ψ_t(x)`` bounds ``|Φ_t(x)|²``, the squared contribution of this level to the advantage
    polynomial of ``original``.
    """
    spec = original.spec
    x = np.asarray(x, dtype=np.int64)
    if x.size != original.n:
        raise DimensionError(f"assignment has length {x.size}, instance has n={original.n}")
    if decomp.size == 0:
        return 0.0
    acc = 0.0
    for bucket in decomp.odd_buckets(original):
        dots = np.asarray([spec.dot(r.indices, r.values, x) for r in bucket.residuals])
        rhs = np.asarray(bucket.rhs)
        for beta in spec.units:
            ex = spec.phase_table[spec.mul_table[beta, rhs]] - spec.phase_table[
                spec.mul_table[beta, dots]
            ]
            acc += abs(np.exp(2j * np.pi * (ex % spec.exponent) / spec.exponent).sum()) ** 2
    return _scale(original.k, decomp, original.m, spec.order) * acc


def refute_bipartite(
    original: KLinInstance,
    decomp: BipartiteDecomposition,
    ell: int,
    eps: float,
    eta: int | None = None,
    caps: Caps | None = None,
    spectral: SpectralSettings | None = None,
) -> BipartiteBound:
    """Bound ``max_x Ψ_t(x)`` for one decomposition level.

    The diagonal contributes ``|F*|·|H^(t)|``. Off-diagonal pairs contribute through the odd
    Kikuchi matrix; with ``T`` ordered (v, v', β) types and per-type count Δ the bound is
    ``T·min(1, 2(1-ρ)‖Ã'‖ + ρ)`` where ``Ã'`` is the scaled matrix after edge deletion
    (only for ``t < k/2``). At ``t = k`` the polynomial is constant and is evaluated exactly.
    """
    caps = caps or Caps()
    eta = eta if eta is not None else default_eta(original.k, eps)
    spec, k, t = original.spec, original.k, decomp.t
    q, units = spec.order, spec.order - 1
    values: dict[str, float | int | str | bool | None] = {
        "t": t,
        "tau": decomp.threshold,
        "prefixes": decomp.prefixes,
        "members": decomp.size,
    }
    if decomp.size == 0:
        values["method"] = "empty"
        return BipartiteBound(0.0, TrailStage(name=f"level t={t}", values=values))
    scale = _scale(k, decomp, original.m, q)
    diag = units * decomp.size
    buckets = decomp.odd_buckets(original)

    if t == k:
        acc = 0.0
        for bucket in buckets:
            rhs = np.asarray(bucket.rhs)
            for beta in spec.units:
                ex = spec.phase_table[spec.mul_table[beta, rhs]]
                acc += abs(np.exp(2j * np.pi * ex / spec.exponent).sum()) ** 2
        values |= {"method": "exact", "bound": scale * acc}
        return BipartiteBound(scale * acc, TrailStage(name=f"level t={t}", values=values))

    types = units * sum(len(b.members) * (len(b.members) - 1) for b in buckets)
    values["types"] = types
    if types == 0:
        values |= {"method": "diagonal", "bound": scale * diag}
        return BipartiteBound(scale * diag, TrailStage(name=f"level t={t}", values=values))

    A = build_odd(buckets, spec, original.n, k, ell, t, cap=caps.vertices)
    values |= {"N": A.size, "delta": A.delta, "edges": A.nnz}
    if A.delta == 0:
        log.warning("odd level has no edges, using the trivial bound", extra={"t": t, "ell": ell})
        values |= {"method": "trivial", "bound": scale * (diag + types)}
        stage = TrailStage(name=f"level t={t}", values=values)
        return BipartiteBound(scale * (diag + types), stage)

    rho = 0.0
    if 2 * t < k:
        deletion = edge_delete(A, eta)
        A, rho = deletion.matrix, deletion.rho
        values |= {"eta": eta, "rho": rho, "retained_per_type": deletion.retained_per_type}
    loose = False
    if A.nnz == 0:
        off = float(types)
        values["norm"] = 0.0
    else:
        stats = A.degrees()
        norm = scaled_norm(A, stats.gamma, spectral)
        loose = norm.loose
        off = types * min(1.0, 2 * (1 - rho) * norm.value + rho)
        values |= {"d": stats.d, "norm": norm.value, "norm_method": norm.method, "loose": loose}
    bound = scale * (diag + off)
    values |= {"method": "spectral", "bound": bound}
    return BipartiteBound(bound, TrailStage(name=f"level t={t}", values=values), loose)


def refute_odd(
    inst: KLinInstance,
    ell: int,
    eps: float,
    eta: int | None = None,
    thresholds: Mapping[int, int] | None = None,
    caps: Caps | None = None,
    spectral: SpectralSettings | None = None,
) -> Certificate:
    """Certify ``val(I) <= 1/|F| + Σ_t sqrt(B_t)`` over the regularity decomposition.

    Raises:
        DomainMismatchError: The domain is not a field.
        NoCertificateError: The instance has no equations.
        ResourceCapError: A vertex space is too large.
    """
    if not inst.spec.is_field:
        raise DomainMismatchError(f"refute_odd needs a field, got {inst.spec.describe()}")
    if inst.m == 0:
        raise NoCertificateError("instance has no equations")
    eta = eta if eta is not None else default_eta(inst.k, eps)
    levels = regular_decompose(inst, ell, eps, thresholds)
    raw = 1 / inst.spec.order
    trail: list[TrailStage] = []
    loose = False
    for _, decomp in levels:
        bound = refute_bipartite(inst, decomp, ell, eps, eta, caps, spectral)
        adv = math.sqrt(max(bound.value, 0.0))
        bound.stage.values["adv"] = adv
        trail.append(bound.stage)
        raw += adv
        loose |= bound.loose
    log.info("odd certificate", extra={"alg_val": raw, "m": inst.m, "levels": len(levels)})
    return Certificate(
        kind=CertificateKind.odd,
        alg_val=clip(raw),
        raw_alg_val=raw,
        params=CertificateParams(
            ell=ell,
            eps=eps,
            eta=eta,
            thresholds={d.t: d.threshold for _, d in levels},
            pipeline="odd",
        ),
        trail=trail,
        soundness=Soundness.loose if loose else Soundness.exact,
        instance_digest=inst.digest,
    )
