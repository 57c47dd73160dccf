"""The ``refute``, ``simple`` and ``verify`` commands."""

import logging
import math
import pathlib

from klin_refute.internal.instance import KLinInstance
from klin_refute.internal.models import (
    Caps,
    Certificate,
    CertificateKind,
    CheckDocument,
    Report,
    RunConfig,
    SpectralSettings,
)
from klin_refute.internal.refute import refute, suggested_ell
from klin_refute.internal.simple import simple_refute
from klin_refute.internal.sos import PEStatus, parse_pe, verify_pe

from .common import EXIT_INVALID, CommandOutput, echo, input_path, load_instance

log = logging.getLogger(__name__)

VALUE_TOL = 1e-9


def cmd_refute(cfg: RunConfig) -> CommandOutput:
    """Certify an upper bound on the instance's value with the spectral pipelines."""
    inst = load_instance(cfg)
    cert = refute(
        inst,
        cfg.ell if cfg.ell is not None else suggested_ell(inst),
        cfg.eps if cfg.eps is not None else 0.5,
        eta=cfg.eta,
        pipeline=cfg.pipeline,
        caps=cfg.caps,
        spectral=cfg.spectral,
        experimental=cfg.group_odd_experimental,
    )
    cert.config = echo(cfg)
    return CommandOutput(cert.to_json())


def cmd_simple(cfg: RunConfig) -> CommandOutput:
    """Certify an upper bound with the brute-force local refuter."""
    inst = load_instance(cfg)
    cert = simple_refute(
        inst,
        cfg.ell if cfg.ell is not None else inst.k,
        cfg.variant,
        cfg.eps if cfg.eps is not None else 0.5,
        cfg.caps,
    )
    cert.config = echo(cfg)
    return CommandOutput(cert.to_json())


def rerun(cert: Certificate, inst: KLinInstance, caps: Caps | None = None) -> Certificate:
    """Run the pipeline recorded in ``cert`` again with its recorded parameters.

    Spectral settings are taken from the echoed configuration when present.
    """
    params = cert.params
    spectral = SpectralSettings()
    if cert.config and "spectral" in cert.config:
        spectral = SpectralSettings.model_validate(cert.config["spectral"])
    if cert.kind == CertificateKind.simple:
        return simple_refute(inst, params.ell, params.variant or "random", params.eps, caps)
    return refute(
        inst,
        params.ell,
        params.eps,
        eta=params.eta,
        thresholds=params.thresholds or None,
        pipeline=params.pipeline,
        caps=caps,
        spectral=spectral,
        experimental=params.group_odd_experimental,
    )


def verify_certificate(cert: Certificate, inst: KLinInstance, caps: Caps | None = None) -> Report:
    """Compare a certificate with a fresh run of its pipeline on ``inst``."""
    report = Report(subject="certificate")
    report.add(
        "digest",
        cert.instance_digest == inst.digest,
        f"certificate {cert.instance_digest[:12]}, instance {inst.digest[:12]}",
    )
    fresh = rerun(cert, inst, caps)
    report.add("kind", fresh.kind == cert.kind, f"{cert.kind.value} vs {fresh.kind.value}")
    report.add(
        "alg_val",
        math.isclose(fresh.alg_val, cert.alg_val, abs_tol=VALUE_TOL),
        f"recorded {cert.alg_val!r}, recomputed {fresh.alg_val!r}",
    )
    report.add(
        "raw_alg_val",
        math.isclose(fresh.raw_alg_val, cert.raw_alg_val, rel_tol=VALUE_TOL, abs_tol=VALUE_TOL),
        f"recorded {cert.raw_alg_val!r}, recomputed {fresh.raw_alg_val!r}",
    )
    return report


def cmd_verify(cfg: RunConfig) -> CommandOutput:
    """Re-check a certificate or a pseudo-expectation dump against its instance.

    Exits with code 3 when any check fails.
    """
    doc_path = input_path(cfg, 0, "certificate or pseudo-expectation file")
    inst = load_instance(cfg, 1)
    text = pathlib.Path(doc_path).read_text(encoding="utf-8")
    if text.lstrip().startswith("pe v1"):
        pe = parse_pe(text)
        if pe.status != PEStatus.complete:
            report = Report(subject="pseudo-expectation")
            report.add("status", False, f"status {pe.status.value}")
        else:
            report = verify_pe(pe, inst, cfg.spot_checks, cfg.seed, cfg.workers)
        subject = "pseudo-expectation"
    else:
        report = verify_certificate(Certificate.from_json(text), inst, cfg.caps)
        subject = "certificate"
    doc = CheckDocument(
        subject=subject,
        ok=report.ok,
        reports=[report],
        instance_digest=inst.digest,
        config=echo(cfg),
    )
    if not report.ok:
        log.warning("verification failed", extra={"failed": [c.name for c in report.failed()]})
    return CommandOutput(doc.to_json(), 0 if report.ok else EXIT_INVALID)
