"""Vertex index spaces and their rank/unrank bijections.

A vertex is a support set of size ℓ plus one value per support position. Supports are ranked in
colexicographic order and values in little-endian mixed radix; the support rank is the major key.
"""

import math
from dataclasses import dataclass
from enum import Enum

from klin_refute.internal.models import DEFAULT_VERTEX_CAP, ResourceCapError, ValidationError

Vertex = tuple[tuple[int, ...], tuple[int, ...]]


class VertexKind(str, Enum):
    """Defines the three Kikuchi vertex families."""

    even_field = "even-field"
    even_group = "even-group"
    odd_pair = "odd"


def rank_subset(subset: tuple[int, ...] | list[int]) -> int:
    """Colex rank of a sorted subset."""
    return sum(math.comb(c, j + 1) for j, c in enumerate(subset))


def unrank_subset(r: int, n: int, k: int) -> tuple[int, ...]:
    """The k-subset of ``[0, n)`` with colex rank ``r``."""
    out = [0] * k
    while k > 0:
        n -= 1
        offset = math.comb(n, k)
        if r >= offset:
            r -= offset
            k -= 1
            out[k] = n
    return tuple(out)


@dataclass(frozen=True)
class VertexSpace:
    """Vertices over ``coords`` coordinates with exactly ``ell`` support positions.

    ``zero_allowed`` selects between nonzero values (codes ``1..radix``) and arbitrary values
    (codes ``0..radix-1``). Odd-pair spaces use ``coords = 2n``: coordinates ``i >= n`` belong to
    the second copy of ``[n]``.
    """

    kind: VertexKind
    n: int
    ell: int
    radix: int
    zero_allowed: bool

    @classmethod
    def even_field(cls, n: int, ell: int, order: int) -> "VertexSpace":
        """ℓ-sparse vectors in F^n."""
        return cls(VertexKind.even_field, n, ell, order - 1, False)

    @classmethod
    def even_group(cls, n: int, ell: int, order: int) -> "VertexSpace":
        """Pairs (U, S) with ``supp(U) ⊆ S`` and ``|S| = ℓ``."""
        return cls(VertexKind.even_group, n, ell, order, True)

    @classmethod
    def odd_pair(cls, n: int, ell: int, order: int) -> "VertexSpace":
        """Pairs (U¹, U²) with ``wt(U¹) + wt(U²) = ℓ``."""
        return cls(VertexKind.odd_pair, n, ell, order - 1, False)

    @property
    def coords(self) -> int:
        """Number of coordinates supports are drawn from."""
        return 2 * self.n if self.kind == VertexKind.odd_pair else self.n

    @property
    def size(self) -> int:
        """N, the number of vertices."""
        return math.comb(self.coords, self.ell) * self.radix**self.ell

    def check_cap(self, cap: int = DEFAULT_VERTEX_CAP) -> None:
        """Raise ResourceCapError when N exceeds ``cap``."""
        if not 0 <= self.ell <= self.coords:
            raise ValidationError(f"ℓ={self.ell} outside [0, {self.coords}]")
        if self.size > cap:
            raise ResourceCapError("vertex space", self.size, cap)

    def rank(self, support: tuple[int, ...], values: tuple[int, ...]) -> int:
        """Index of the vertex with the given sorted support and value codes."""
        shift = 0 if self.zero_allowed else 1
        r = 0
        for c in reversed(values):
            r = r * self.radix + (c - shift)
        return rank_subset(support) * self.radix**self.ell + r

    def unrank(self, r: int) -> Vertex:
        """Inverse of ``rank``."""
        shift = 0 if self.zero_allowed else 1
        s_rank, v_rank = divmod(r, self.radix**self.ell)
        values = []
        for _ in range(self.ell):
            v_rank, d = divmod(v_rank, self.radix)
            values.append(d + shift)
        return unrank_subset(s_rank, self.coords, self.ell), tuple(values)

