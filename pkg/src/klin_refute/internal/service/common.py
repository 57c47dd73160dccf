"""Helpers shared by the command implementations."""

import dataclasses
from typing import Any, TypeVar

from klin_refute.internal.instance import KLinInstance, load
from klin_refute.internal.models import RunConfig, ValidationError

T = TypeVar("T")

EXIT_OK = 0
EXIT_CAP = 2
EXIT_INVALID = 3


@dataclasses.dataclass(frozen=True)
class CommandOutput:
    """The document a command produced and the exit code it asks for."""

    text: str
    exit_code: int = EXIT_OK


def require(value: T | None, flag: str) -> T:
    """The value of a mandatory flag."""
    if value is None:
        raise ValidationError(f"{flag} is required")
    return value


def input_path(cfg: RunConfig, index: int, what: str) -> str:
    """The ``index``-th positional input."""
    if len(cfg.inputs) <= index:
        raise ValidationError(f"missing positional argument: {what}")
    return cfg.inputs[index]


def load_instance(cfg: RunConfig, index: int = 0) -> KLinInstance:
    """Load the instance named by the ``index``-th positional input."""
    return load(input_path(cfg, index, "instance file"))


def echo(cfg: RunConfig) -> dict[str, Any]:
    """The configuration as it is echoed into output documents."""
    return cfg.model_dump(mode="json")
