"""The ``sos`` command and its actions."""

import logging
from enum import Enum

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.models import CheckDocument, RunConfig
from klin_refute.internal.sos import (
    PEStatus,
    build_max_entropy,
    dump_pe,
    expansion_check,
    find_refutation_exhaustive,
    load_pe,
    to_boolean_pe,
    verify_pe,
)

from .common import EXIT_INVALID, CommandOutput, echo, input_path, load_instance, require

log = logging.getLogger(__name__)


class SosAction(str, Enum):
    """Defines the ``sos`` actions.

    Can either be
    - build: run the max-entropy closure on an instance and dump the result.
    - verify: check a dump against its instance.
    - boolean: reduce a dump to a Boolean pseudo-expectation.
    - expand: check the expansion property.
    - refutation: search for a small refutation of the instance.
    """

    build = "build"
    verify = "verify"
    boolean = "boolean"
    expand = "expand"
    refutation = "refutation"


def _label(monomial: tuple[tuple[int, int], ...], spec: GroupSpec) -> str:
    if not monomial:
        return "1"
    return " ".join(f"x{i}={spec.format_element(a)}" for i, a in monomial)


def cmd_sos(cfg: RunConfig) -> CommandOutput:
    """Dispatch one ``sos`` action."""
    action = SosAction(require(cfg.action, "sos action"))
    if action == SosAction.build:
        inst = load_instance(cfg)
        pe = build_max_entropy(inst, require(cfg.d, "--d"), cfg.order, cfg.caps.pe_entries)
        log.info(
            "built pseudo-expectation",
            extra={"status": pe.status.value, "entries": len(pe.entries), "d": pe.degree},
        )
        return CommandOutput(dump_pe(pe))

    if action in (SosAction.verify, SosAction.boolean):
        pe = load_pe(input_path(cfg, 0, "pseudo-expectation file"))
        inst = load_instance(cfg, 1)
        if action == SosAction.verify:
            if pe.status != PEStatus.complete:
                doc = CheckDocument(subject="pseudo-expectation", ok=False)
                doc.details["status"] = pe.status.value
            else:
                report = verify_pe(pe, inst, cfg.spot_checks, cfg.seed, cfg.workers)
                doc = CheckDocument(subject="pseudo-expectation", ok=report.ok, reports=[report])
            doc.details["entries"] = len(pe.entries)
        else:
            bpe = to_boolean_pe(pe, require(cfg.d, "--d"), inst, cfg.caps.pe_entries)
            doc = CheckDocument(
                subject="boolean pseudo-expectation",
                ok=bpe.report.ok,
                reports=[bpe.report],
                details={"degree": bpe.degree, "monomials": len(bpe.values)},
                values={_label(mono, pe.spec): v for mono, v in sorted(bpe.values.items())},
            )
    elif action == SosAction.expand:
        inst = load_instance(cfg)
        result = expansion_check(
            inst,
            require(cfg.ell, "--l"),
            require(cfg.beta, "--beta"),
            cfg.caps.exhaustive,
        )
        doc = CheckDocument(
            subject="expansion",
            ok=result.expands,
            details={"ell": result.ell, "beta": result.beta, "weight": result.weight},
        )
        if result.witness is not None:
            doc.details["witness"] = " ".join(
                f"{p}:{inst.spec.format_element(a)}" for p, a in result.witness
            )
    else:
        inst = load_instance(cfg)
        max_size = require(cfg.max_size, "--max-size")
        found = find_refutation_exhaustive(inst, max_size, cfg.caps.exhaustive)
        # ok means no refutation of size <= max_size exists
        doc = CheckDocument(
            subject="refutation",
            ok=found is None,
            details={"max_size": max_size, "found": found is not None},
        )
        if found is not None:
            doc.details["length"] = found.length
            doc.details["rhs"] = inst.spec.format_element(found.rhs)
            doc.details["terms"] = " ".join(
                f"{p}:{inst.spec.format_element(a)}" for p, a in found.terms
            )

    doc.instance_digest = inst.digest
    doc.config = echo(cfg)
    exit_code = EXIT_INVALID if action == SosAction.verify and not doc.ok else 0
    return CommandOutput(doc.to_json(), exit_code)
