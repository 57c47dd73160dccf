"""Command implementations used by the CLI."""

from collections.abc import Callable

from klin_refute.internal.models import Command, RunConfig

from .bench import cmd_bench
from .certify import cmd_refute, cmd_simple, cmd_verify, rerun, verify_certificate
from .common import EXIT_CAP, EXIT_INVALID, EXIT_OK, CommandOutput
from .deps import cmd_deps
from .generate import Generator, cmd_gen, generate, semirandom_from_file
from .sos import SosAction, cmd_sos

COMMANDS: dict[Command, Callable[[RunConfig], CommandOutput]] = {
    Command.gen: cmd_gen,
    Command.refute: cmd_refute,
    Command.simple: cmd_simple,
    Command.deps: cmd_deps,
    Command.sos: cmd_sos,
    Command.verify: cmd_verify,
    Command.bench: cmd_bench,
}


def run_command(cfg: RunConfig) -> CommandOutput:
    """Run the command named in ``cfg``."""
    return COMMANDS[cfg.command](cfg)
