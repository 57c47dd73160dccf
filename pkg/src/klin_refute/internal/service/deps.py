"""The ``deps`` command: short linear dependency search."""

import logging

from klin_refute.internal.deps import find_dependency
from klin_refute.internal.models import DependencyDocument, RunConfig

from .common import CommandOutput, echo, load_instance, require

log = logging.getLogger(__name__)


def cmd_deps(cfg: RunConfig) -> CommandOutput:
    """Search for a short dependency among the instance's constraint vectors."""
    inst = load_instance(cfg)
    max_size = require(cfg.max_size, "--max-size")
    dep = find_dependency(
        inst,
        cfg.mode,
        max_size,
        ell=cfg.ell or 1,
        seed=cfg.seed,
        caps=cfg.caps,
        workers=cfg.workers,
    )
    doc = DependencyDocument(
        mode=cfg.mode,
        max_size=max_size,
        found=dep is not None,
        instance_digest=inst.digest,
        config=echo(cfg),
    )
    if dep is not None:
        doc.terms = dep.terms
        doc.rendered = dep.render(inst.spec)
    log.info("dependency search", extra={"mode": cfg.mode, "found": doc.found, "m": inst.m})
    return CommandOutput(doc.to_json())
