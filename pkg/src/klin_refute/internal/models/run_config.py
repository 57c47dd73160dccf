"""Validated configuration for one command-line run."""

from enum import Enum

from pydantic import BaseModel, Field, model_validator

DEFAULT_VERTEX_CAP = 2**21
DEFAULT_BRUTE_FORCE_CAP = 2**22
DEFAULT_EXHAUSTIVE_CAP = 2**22
DEFAULT_PE_ENTRY_CAP = 2**20


class Command(str, Enum):
    """Defines the available subcommands."""

    gen = "gen"
    refute = "refute"
    simple = "simple"
    deps = "deps"
    sos = "sos"
    verify = "verify"
    bench = "bench"


class Caps(BaseModel):
    """Resource caps, each raising ResourceCapError when exceeded."""

    vertices: int = Field(DEFAULT_VERTEX_CAP, ge=1)
    brute_force: int = Field(DEFAULT_BRUTE_FORCE_CAP, ge=1)
    exhaustive: int = Field(DEFAULT_EXHAUSTIVE_CAP, ge=1)
    pe_entries: int = Field(DEFAULT_PE_ENTRY_CAP, ge=1)


class SpectralSettings(BaseModel):
    """Settings for the scaled spectral norm."""

    dense_limit: int = Field(4096, ge=1)
    tol: float = Field(1e-6, gt=0)
    seed: int = 0


class RunConfig(BaseModel):
    """Defines the merged settings of a single invocation.

    Built from the HOCON file, then overridden by command-line flags. Echoed verbatim into every
    output document.
    """

    command: Command
    group: str | None = None
    n: int | None = Field(None, ge=1)
    k: int | None = Field(None, ge=1)
    m: int | None = Field(None, ge=1)
    ell: int | None = Field(None, ge=1)
    eps: float | None = Field(None, gt=0, le=1)
    eta: int | None = Field(None, ge=1)
    d: int | None = Field(None, ge=1)
    seeds: list[int] = Field(default_factory=lambda: [0], min_length=1)
    caps: Caps = Field(default_factory=Caps)
    spectral: SpectralSettings = Field(default_factory=SpectralSettings)
    group_odd_experimental: bool = False
    generator: str = "random"
    width: int | None = Field(None, ge=1)
    lhs: str | None = None
    pipeline: str = "auto"
    variant: str = "random"
    mode: str = "exhaustive"
    max_size: int | None = Field(None, ge=1)
    order: str = "fifo"
    beta: float | None = Field(None, ge=0)
    action: str | None = None
    spot_checks: int = Field(500, ge=0)
    sweep: str | None = None
    timings: bool = True
    workers: int = Field(1, ge=1)
    inputs: list[str] = Field(default_factory=list)
    output: str | None = None

    @model_validator(mode="after")
    def _check_arity(self) -> "RunConfig":
        if self.k is not None and self.n is not None and self.k > self.n:
            raise ValueError(f"--k {self.k} exceeds --n {self.n}")
        return self

    @property
    def seed(self) -> int:
        """The first seed, used by single-run commands."""
        return self.seeds[0]
