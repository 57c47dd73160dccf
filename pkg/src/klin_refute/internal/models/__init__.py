"""Documents, configuration and errors shared across the application."""

from .certificate import (
    CERT_SCHEMA,
    Certificate,
    CertificateKind,
    CertificateParams,
    CheckResult,
    Report,
    Soundness,
    TrailStage,
    WeightedPart,
)
from .documents import CHECK_SCHEMA, DEPS_SCHEMA, CheckDocument, DependencyDocument
from .errors import (
    DimensionError,
    DomainMismatchError,
    InconsistentPseudoExpectationError,
    InstanceFormatError,
    KlinError,
    NoCertificateError,
    ResourceCapError,
    ValidationError,
)
from .run_config import (
    DEFAULT_BRUTE_FORCE_CAP,
    DEFAULT_EXHAUSTIVE_CAP,
    DEFAULT_PE_ENTRY_CAP,
    DEFAULT_VERTEX_CAP,
    Caps,
    Command,
    RunConfig,
    SpectralSettings,
)
