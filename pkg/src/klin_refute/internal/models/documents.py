"""Output documents of the non-certificate commands."""

from typing import Any, Literal

from pydantic import BaseModel, Field

from .certificate import Report, TrailValue

DEPS_SCHEMA = "klin-deps/v1"
CHECK_SCHEMA = "klin-check/v1"


class DependencyDocument(BaseModel):
    """Result of a dependency search; ``terms`` is empty when nothing was found."""

    schema_version: Literal["klin-deps/v1"] = DEPS_SCHEMA
    mode: str
    max_size: int
    found: bool
    terms: list[tuple[int, int]] = Field(default_factory=list)
    rendered: list[str] = Field(default_factory=list)
    instance_digest: str = ""
    config: dict[str, Any] | None = None

    def to_json(self) -> str:
        """Serialize to an indented JSON document."""
        return self.model_dump_json(indent=2)


class CheckDocument(BaseModel):
    """Defines the outcome of a verification or an oracle run.

    ``details`` holds scalar findings, ``values`` optional tabulated numbers keyed by a
    printable label.
    """

    schema_version: Literal["klin-check/v1"] = CHECK_SCHEMA
    subject: str
    ok: bool
    reports: list[Report] = Field(default_factory=list)
    details: dict[str, TrailValue] = Field(default_factory=dict)
    values: dict[str, float] = Field(default_factory=dict)
    instance_digest: str = ""
    config: dict[str, Any] | None = None

    def to_json(self) -> str:
        """Serialize to an indented JSON document."""
        return self.model_dump_json(indent=2)
