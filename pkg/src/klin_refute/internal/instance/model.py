"""Sparse vectors, equations and k-LIN instances."""

import functools
import hashlib
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.models import DimensionError, ValidationError


@dataclass(frozen=True, order=True)
class SparseVec:
    """A sparse vector in ``G^n``: strictly increasing indices with nonzero value codes."""

    n: int
    indices: tuple[int, ...]
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.indices) != len(self.values):
            raise ValidationError("indices and values differ in length")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:], strict=False)):
            raise ValidationError(f"indices must be strictly increasing: {self.indices}")
        if self.indices and not (0 <= self.indices[0] and self.indices[-1] < self.n):
            raise ValidationError(f"index out of range [0, {self.n}): {self.indices}")
        if any(c == 0 for c in self.values):
            raise ValidationError("sparse vectors store no zero coefficients")

    @classmethod
    def from_mapping(cls, n: int, entries: Mapping[int, int]) -> "SparseVec":
        """Build from ``{index: code}``, dropping zero codes."""
        items = sorted((int(i), int(c)) for i, c in entries.items() if c != 0)
        return cls(n, tuple(i for i, _ in items), tuple(c for _, c in items))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "SparseVec":
        """Build from ``(index, code)`` pairs, which must be distinct and nonzero."""
        items = sorted((int(i), int(c)) for i, c in pairs)
        return cls(n, tuple(i for i, _ in items), tuple(c for _, c in items))

    @classmethod
    def from_dense(cls, x: Iterable[int]) -> "SparseVec":
        """Build from a dense code sequence."""
        dense = [int(c) for c in x]
        return cls.from_mapping(len(dense), dict(enumerate(dense)))

    @classmethod
    def zero(cls, n: int) -> "SparseVec":
        """The zero vector."""
        return cls(n, (), ())

    @property
    def wt(self) -> int:
        """Number of nonzero coordinates."""
        return len(self.indices)

    @property
    def support(self) -> frozenset[int]:
        """``supp(v)``."""
        return frozenset(self.indices)

    def items(self) -> Iterable[tuple[int, int]]:
        """``(index, code)`` pairs."""
        return zip(self.indices, self.values, strict=True)

    def get(self, i: int) -> int:
        """The code at coordinate ``i``."""
        for j, c in self.items():
            if j == i:
                return c
        return 0

    def restrict(self, subset: Iterable[int]) -> "SparseVec":
        """Keep only the coordinates in ``subset``."""
        keep = set(subset)
        return SparseVec.from_pairs(self.n, ((i, c) for i, c in self.items() if i in keep))

    def dense(self) -> np.ndarray:
        """Dense code array of length ``n``."""
        out = np.zeros(self.n, dtype=np.int64)
        out[list(self.indices)] = self.values
        return out


def vec_scale(v: SparseVec, beta: int, spec: GroupSpec) -> SparseVec:
    """``β·v`` (coordinate-wise product for groups)."""
    return SparseVec.from_mapping(v.n, {i: int(spec.mul_table[beta, c]) for i, c in v.items()})


def vec_add(u: SparseVec, v: SparseVec, spec: GroupSpec) -> SparseVec:
    """``u + v``."""
    if u.n != v.n:
        raise DimensionError(f"cannot add vectors with n={u.n} and n={v.n}")
    acc = dict(u.items())
    for i, c in v.items():
        acc[i] = int(spec.add_table[acc.get(i, 0), c])
    return SparseVec.from_mapping(u.n, acc)


def vec_neg(v: SparseVec, spec: GroupSpec) -> SparseVec:
    """``−v``."""
    return SparseVec(v.n, v.indices, tuple(int(spec.neg_table[c]) for c in v.values))


def vec_sub(u: SparseVec, v: SparseVec, spec: GroupSpec) -> SparseVec:
    """``u − v``."""
    return vec_add(u, vec_neg(v, spec), spec)


@dataclass(frozen=True)
class Equation:
    """One constraint ``⟨lhs, x⟩ = rhs``."""

    lhs: SparseVec
    rhs: int


@dataclass(frozen=True)
class KLinInstance:
    """An ordered multiset of equations over one domain.

    Equation positions are the instance's identity; decompositions refer to positions.
    """

    spec: GroupSpec
    n: int
    k: int
    equations: tuple[Equation, ...]
    seed: int | None = None
    source: str | None = None

    def __post_init__(self) -> None:
        if self.k < 1 or self.k > self.n:
            raise ValidationError(f"k={self.k} must lie in [1, n={self.n}]")
        for pos, eq in enumerate(self.equations):
            if eq.lhs.n != self.n:
                raise DimensionError(f"equation {pos} has n={eq.lhs.n}, instance has n={self.n}")
            if eq.lhs.wt > self.k:
                raise ValidationError(f"equation {pos} has weight {eq.lhs.wt} > k={self.k}")
            if not 0 <= eq.rhs < self.spec.order:
                raise ValidationError(f"equation {pos} has an rhs outside the domain")

    @property
    def m(self) -> int:
        """Number of equations, counted with multiplicity."""
        return len(self.equations)

    @property
    def vectors(self) -> list[SparseVec]:
        """Left-hand sides in instance order."""
        return [eq.lhs for eq in self.equations]

    def with_equations(self, equations: Iterable[Equation], k: int | None = None) -> "KLinInstance":
        """A copy over the same domain with a different equation list."""
        return KLinInstance(
            spec=self.spec,
            n=self.n,
            k=self.k if k is None else k,
            equations=tuple(equations),
            seed=self.seed,
            source=self.source,
        )

    @functools.cached_property
    def digest(self) -> str:
        """SHA-256 of the serialized instance."""
        from .codec import serialize

        return hashlib.sha256(serialize(self).encode()).hexdigest()
