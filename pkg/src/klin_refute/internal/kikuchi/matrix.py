"""The labelled sparse Hermitian matrix shared by every Kikuchi family."""

import dataclasses
import logging
from collections.abc import Sequence
from enum import Enum
from typing import TextIO

import numpy as np
from scipy import sparse

from klin_refute.internal.algebra import GroupSpec, IntArray
from klin_refute.internal.models import DimensionError, NoCertificateError

from .vertices import VertexSpace

log = logging.getLogger(__name__)

DUMP_MAGIC = "kikuchi v1"


class MatrixKind(str, Enum):
    """Defines the Kikuchi matrix families."""

    even_field = "even-field"
    even_group = "even-group"
    odd = "odd"


@dataclasses.dataclass(frozen=True)
class DegreeStats:
    """Row degrees ``D``, the average degree ``d`` and the diagonal of ``Γ = D + d·I``."""

    D: IntArray
    d: float
    gamma: np.ndarray
    total: int


@dataclasses.dataclass(frozen=True)
class KikuchiMatrix:
    """A Kikuchi matrix stored as one labelled entry per edge.

    Parallel edges from distinct labels are kept separately. ``phase_elems[e]`` is the element
    ``g`` whose phase ``χ_1(g)`` is the entry's coefficient. ``eq_a`` holds the equation (or
    bucket member) index of the label and ``eq_b`` the partner member for odd matrices, ``-1``
    otherwise. ``delta`` is the number of edges per label.
    """

    kind: MatrixKind
    spec: GroupSpec
    space: VertexSpace
    rows: IntArray
    cols: IntArray
    phase_elems: IntArray
    eq_a: IntArray
    eq_b: IntArray
    betas: IntArray
    delta: int
    num_labels: int

    @property
    def size(self) -> int:
        """N, the dimension of the matrix."""
        return self.space.size

    @property
    def nnz(self) -> int:
        """Number of stored edges."""
        return int(self.rows.size)

    @property
    def exponents(self) -> IntArray:
        """Combined phase exponent of every edge, modulo ``spec.exponent``."""
        return self.spec.phase_table[self.phase_elems]

    def select(self, keep: np.ndarray) -> "KikuchiMatrix":
        """The matrix restricted to the edges where ``keep`` is true."""
        return dataclasses.replace(
            self,
            rows=self.rows[keep],
            cols=self.cols[keep],
            phase_elems=self.phase_elems[keep],
            eq_a=self.eq_a[keep],
            eq_b=self.eq_b[keep],
            betas=self.betas[keep],
        )

    def degrees(self) -> DegreeStats:
        """Row degrees, counting one per outgoing labelled edge.

        Raises:
            NoCertificateError: The matrix has no edges.
        """
        if self.nnz == 0:
            raise NoCertificateError("Kikuchi matrix has no edges")
        D = np.bincount(self.rows, minlength=self.size)
        d = self.nnz / self.size
        return DegreeStats(D=D, d=d, gamma=D + d, total=self.nnz)

    def _phase_keys(self) -> tuple[IntArray, IntArray]:
        """Exact phase keys of every edge and of its conjugate."""
        g = self.phase_elems
        if self.spec.is_field:
            tr = self.spec.phase_table[g]
            return tr, (-tr) % self.spec.p
        return g, self.spec.neg_table[g]

    def is_hermitian(self) -> bool:
        """Whether the transposed, conjugated edge multiset equals the edge multiset."""
        key, conj_key = self._phase_keys()
        forward = np.stack([self.rows, self.cols, key])
        backward = np.stack([self.cols, self.rows, conj_key])
        fwd = forward[:, np.lexsort(forward[::-1])]
        bwd = backward[:, np.lexsort(backward[::-1])]
        return bool(np.array_equal(fwd, bwd))

    def label_multiplicity(self) -> dict[tuple[int, int], int]:
        """Number of distinct β with an edge, per (row, equation)."""
        if self.nnz == 0:
            return {}
        triples = np.unique(np.stack([self.rows, self.eq_a, self.betas], axis=1), axis=0)
        pairs, counts = np.unique(triples[:, :2], axis=0, return_counts=True)
        return {(int(r), int(v)): int(c) for (r, v), c in zip(pairs, counts, strict=True)}

    def active(self) -> IntArray:
        """Sorted vertex indices touched by at least one edge."""
        return np.unique(np.concatenate([self.rows, self.cols]))

    def to_sparse(self, active: IntArray | None = None) -> sparse.csr_matrix:
        """Complex CSR matrix over ``active`` (default: every touched vertex).

        Parallel edges are summed.
        """
        if active is None:
            active = self.active()
        r = np.searchsorted(active, self.rows)
        c = np.searchsorted(active, self.cols)
        data = np.exp(2j * np.pi * self.exponents / self.spec.exponent)
        dim = int(active.size)
        return sparse.coo_matrix((data, (r, c)), shape=(dim, dim)).tocsr()

    def vertex_exponents(self, x: Sequence[int] | np.ndarray, vertices: IntArray) -> IntArray:
        """Exponent of ``y_U = χ_U(x)`` for every given vertex index.

        Odd-pair vertices are folded: both copies of coordinate ``i`` pair with ``x_i``.
        """
        x = np.asarray(x, dtype=np.int64)
        if x.size != self.space.n:
            raise DimensionError(f"assignment has length {x.size}, matrix has n={self.space.n}")
        spec, n = self.spec, self.space.n
        out = np.zeros(vertices.size, dtype=np.int64)
        for i, r in enumerate(vertices):
            support, values = self.space.unrank(int(r))
            acc = 0
            for j, c in zip(support, values, strict=True):
                acc += int(spec.phase_table[spec.mul_table[c, x[j % n]]])
            out[i] = acc % spec.exponent
        return out

    def quadratic_form(self, x: Sequence[int] | np.ndarray) -> complex:
        """``y†Ay`` with ``y_U = χ_U(x)``."""
        if self.nnz == 0:
            return 0j
        active = self.active()
        ex = self.vertex_exponents(x, active)
        row_ex = ex[np.searchsorted(active, self.rows)]
        col_ex = ex[np.searchsorted(active, self.cols)]
        total = (self.exponents - row_ex + col_ex) % self.spec.exponent
        return complex(np.exp(2j * np.pi * total / self.spec.exponent).sum())

    def dump(self, out: TextIO) -> None:
        """Write the coordinate text form: a header then ``row col exp_1,...,exp_r`` lines."""
        out.write(f"{DUMP_MAGIC} kind={self.kind.value} N={self.size}\n")
        order = np.lexsort((self.cols, self.rows))
        spec = self.spec
        for e in order:
            g = int(self.phase_elems[e])
            if spec.is_field:
                exps = [int(spec.phase_table[g])]
            else:
                exps = [int(c) for c in spec.coords[g]]
            out.write(f"{self.rows[e]} {self.cols[e]} {','.join(map(str, exps))}\n")


class EdgeBuffer:
    """Accumulates edges during construction."""

    def __init__(self) -> None:
        """Start empty."""
        self._cols: list[list[int]] = [[], [], [], [], [], []]

    def add(self, row: int, col: int, g: int, a: int, b: int, beta: int) -> None:
        """Append one labelled edge."""
        for dst, val in zip(self._cols, (row, col, g, a, b, beta), strict=True):
            dst.append(val)

    def __len__(self) -> int:
        return len(self._cols[0])

    def freeze(
        self,
        kind: MatrixKind,
        spec: GroupSpec,
        space: VertexSpace,
        delta: int,
        num_labels: int,
    ) -> KikuchiMatrix:
        """Build the immutable matrix."""
        arrays = [np.asarray(c, dtype=np.int64) for c in self._cols]
        for arr in arrays:
            arr.setflags(write=False)
        rows, cols, g, a, b, beta = arrays
        log.debug(
            "built Kikuchi matrix",
            extra={"kind": kind.value, "N": space.size, "edges": rows.size, "delta": delta},
        )
        return KikuchiMatrix(
            kind=kind,
            spec=spec,
            space=space,
            rows=rows,
            cols=cols,
            phase_elems=g,
            eq_a=a,
            eq_b=b,
            betas=beta,
            delta=delta,
            num_labels=num_labels,
        )
