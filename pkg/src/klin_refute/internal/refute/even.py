"""Even-arity refutation over a field."""

import logging
import time

from klin_refute.internal.instance import KLinInstance
from klin_refute.internal.kikuchi import build_even_field, scaled_norm
from klin_refute.internal.models import (
    Caps,
    Certificate,
    CertificateKind,
    CertificateParams,
    Soundness,
    SpectralSettings,
)

from ._common import clip, kikuchi_stage

log = logging.getLogger(__name__)


def refute_even_field(
    inst: KLinInstance,
    ell: int,
    eps: float = 0.5,
    caps: Caps | None = None,
    spectral: SpectralSettings | None = None,
) -> Certificate:
    """Certify ``val(I) <= 1/|F| + (2|F*|/|F|)·‖Γ^{-1/2} A Γ^{-1/2}‖``.

    Args:
        inst: An instance over a field whose equations are all exactly k-sparse, k even.
        ell: Kikuchi level.
        eps: Target advantage, recorded in the certificate parameters.
        caps: Resource caps; defaults apply when omitted.
        spectral: Norm computation settings.

    Raises:
        NoCertificateError: The instance has no equations.
        ResourceCapError: The vertex space is too large.
    """
    caps = caps or Caps()
    start = time.perf_counter()
    A = build_even_field(inst, ell, cap=caps.vertices)
    stats = A.degrees()
    norm = scaled_norm(A, stats.gamma, spectral)
    q = inst.spec.order
    raw = 1 / q + 2 * (q - 1) / q * norm.value
    elapsed = (time.perf_counter() - start) * 1000
    log.info(
        "even-field certificate",
        extra={"alg_val": raw, "norm": norm.value, "N": A.size, "elapsed_ms": elapsed},
    )
    return Certificate(
        kind=CertificateKind.even_field,
        alg_val=clip(raw),
        raw_alg_val=raw,
        params=CertificateParams(ell=ell, eps=eps, pipeline="even-field"),
        trail=[kikuchi_stage("kikuchi", A, stats, norm, m=inst.m)],
        soundness=Soundness.loose if norm.loose else Soundness.exact,
        instance_digest=inst.digest,
    )
