"""Exception hierarchy shared by every package.

The command line maps these onto exit codes; library code only raises.
"""


class KlinError(Exception):
    """Base class for all errors raised by klin_refute."""


class ValidationError(KlinError):
    """A parameter or an input document is invalid."""


class DomainMismatchError(ValidationError):
    """The operation does not apply to the given algebraic domain."""


class DimensionError(ValidationError):
    """Vector or assignment lengths disagree."""


class InstanceFormatError(ValidationError):
    """An instance or dump file could not be parsed."""

    def __init__(self, line: int, reason: str) -> None:
        """Record the offending line number alongside the reason."""
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class ResourceCapError(KlinError):
    """A configured resource cap would be exceeded."""

    def __init__(self, what: str, size: int, cap: int) -> None:
        """Record what overflowed and by how much."""
        super().__init__(f"{what} size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class NoCertificateError(KlinError):
    """There is nothing to certify, e.g. an empty equation set."""


class InconsistentPseudoExpectationError(KlinError):
    """Two derivations assign different phases to the same representative vector."""

    def __init__(self, vector: object, old: int, new: int) -> None:
        """Keep the conflicting vector and both exponents."""
        super().__init__(f"conflicting phases {old} and {new} at {vector}")
        self.vector = vector
        self.old = old
        self.new = new
