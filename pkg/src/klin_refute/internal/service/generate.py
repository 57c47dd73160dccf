"""The ``gen`` command: seeded instance generation."""

import logging
from enum import Enum

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import (
    KLinInstance,
    clustered_lhs,
    gen_planted,
    gen_random,
    gen_semirandom,
    load,
    serialize,
)
from klin_refute.internal.models import DomainMismatchError, RunConfig

from .common import CommandOutput, require

log = logging.getLogger(__name__)


class Generator(str, Enum):
    """Defines the instance generators.

    Can either be
    - random: uniform supports, coefficients and right-hand sides.
    - planted: right-hand sides consistent with a hidden assignment.
    - semirandom: supports packed into the first ``width`` coordinates, random right-hand sides.
      With ``--lhs`` the supports come from an instance file instead.
    """

    random = "random"
    planted = "planted"
    semirandom = "semirandom"


def generate(
    spec: GroupSpec,
    n: int,
    k: int,
    m: int,
    seed: int,
    generator: Generator | str = Generator.random,
    width: int | None = None,
) -> KLinInstance:
    """Draw one instance with the chosen generator."""
    match Generator(generator):
        case Generator.random:
            return gen_random(spec, n, k, m, seed)
        case Generator.planted:
            return gen_planted(spec, n, k, m, seed)
        case Generator.semirandom:
            lhs = clustered_lhs(spec, n, k, m, width if width is not None else n, seed)
            return gen_semirandom(lhs, spec, seed, k=k)


def semirandom_from_file(path: str, seed: int, group: str | None = None) -> KLinInstance:
    """Keep the left-hand sides of the instance at ``path`` and draw fresh right-hand sides.

    Raises:
        InstanceFormatError: The file is not a well-formed instance.
        DomainMismatchError: ``group`` names another domain than the file's.
    """
    source = load(path)
    if group is not None and GroupSpec.parse(group).describe() != source.spec.describe():
        raise DomainMismatchError(
            f"--group {group} but {path} is over {source.spec.describe()}",
        )
    return gen_semirandom([eq.lhs for eq in source.equations], source.spec, seed, k=source.k)


def cmd_gen(cfg: RunConfig) -> CommandOutput:
    """Generate an instance and return its text form."""
    if cfg.lhs is not None:
        inst = semirandom_from_file(cfg.lhs, cfg.seed, cfg.group)
        log.info("generated instance", extra={"lhs": cfg.lhs, "m": inst.m, "digest": inst.digest})
        return CommandOutput(serialize(inst))
    spec = GroupSpec.parse(require(cfg.group, "--group"))
    inst = generate(
        spec,
        require(cfg.n, "--n"),
        require(cfg.k, "--k"),
        require(cfg.m, "--m"),
        cfg.seed,
        cfg.generator,
        cfg.width,
    )
    log.info(
        "generated instance",
        extra={"generator": cfg.generator, "m": inst.m, "digest": inst.digest},
    )
    return CommandOutput(serialize(inst))
