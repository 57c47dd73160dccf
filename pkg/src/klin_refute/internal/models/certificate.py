"""Machine-readable refutation output and check reports."""

from enum import Enum
from typing import Any, Literal

from pydantic import BaseModel, Field

CERT_SCHEMA = "klin-cert/v1"

TrailValue = int | float | str | bool | None


class CertificateKind(str, Enum):
    """Defines which pipeline produced a certificate."""

    even_field = "even-field"
    even_group = "even-group"
    group_reduction = "group-reduction"
    odd = "odd"
    mixed = "mixed"
    simple = "simple"


class Soundness(str, Enum):
    """Defines how trustworthy the spectral part of a certificate is.

    Can either be
    - exact: every norm came from a dense eigensolve or a converged iteration.
    - loose: at least one norm fell back to the Gershgorin bound.
    """

    exact = "exact"
    loose = "loose"


class TrailStage(BaseModel):
    """One step of a pipeline, with the quantities it measured."""

    name: str
    values: dict[str, TrailValue] = Field(default_factory=dict)


class CertificateParams(BaseModel):
    """Parameters a certificate was produced with; enough to re-run it."""

    ell: int = Field(..., ge=1)
    eps: float = Field(..., gt=0, le=1)
    eta: int | None = Field(None, ge=1)
    thresholds: dict[int, int] = Field(default_factory=dict)
    variant: str | None = None
    pipeline: str = "auto"
    group_odd_experimental: bool = False


class WeightedPart(BaseModel):
    """A sub-certificate and its exact rational weight, written as ``p/q``."""

    weight: str
    label: str
    certificate: "Certificate"


class Certificate(BaseModel):
    """Defines a sound upper bound on the value of an instance."""

    schema_version: Literal["klin-cert/v1"] = CERT_SCHEMA
    kind: CertificateKind
    alg_val: float = Field(..., ge=0, le=1)
    raw_alg_val: float
    params: CertificateParams
    trail: list[TrailStage] = Field(default_factory=list)
    parts: list[WeightedPart] = Field(default_factory=list)
    soundness: Soundness = Soundness.exact
    instance_digest: str = ""
    config: dict[str, Any] | None = None

    def stage(self, name: str) -> TrailStage:
        """Returns the first trail stage with the given name."""
        for s in self.trail:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_json(self) -> str:
        """Serialize to an indented JSON document."""
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        """Parse a JSON document produced by ``to_json``."""
        return cls.model_validate_json(text)


class CheckResult(BaseModel):
    """Outcome of one named check."""

    name: str
    passed: bool
    detail: str = ""


class Report(BaseModel):
    """A list of check outcomes with a convenience verdict."""

    subject: str
    checks: list[CheckResult] = Field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        """Append a check outcome."""
        self.checks.append(CheckResult(name=name, passed=bool(passed), detail=detail))

    @property
    def ok(self) -> bool:
        """True when every recorded check passed."""
        return all(c.passed for c in self.checks)

    def failed(self) -> list[CheckResult]:
        """Returns the failing checks."""
        return [c for c in self.checks if not c.passed]


WeightedPart.model_rebuild()
