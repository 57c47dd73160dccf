"""Kikuchi matrices: vertex spaces, constructive builders, degrees and spectral norms."""

from .build import (
    GroupRow,
    OddBucket,
    build_even_field,
    build_even_group,
    build_group_rows,
    build_odd,
    even_delta,
    group_rows,
    odd_delta,
)
from .local import LocalDegreeStats, local_degrees, partner_triples
from .matrix import DUMP_MAGIC, DegreeStats, EdgeBuffer, KikuchiMatrix, MatrixKind
from .spectral import (
    DenseEstimator,
    NormEstimator,
    NormResult,
    PowerIterationEstimator,
    gershgorin_bound,
    scaled_norm,
    scaled_operator,
)
from .vertices import VertexKind, VertexSpace, rank_subset, unrank_subset
