"""Certified refutation pipelines: even-field, group, odd-arity, and the dispatcher."""

from .decompose import (
    BipartiteDecomposition,
    Bucket,
    Member,
    audit_decomposition,
    default_thresholds,
    fill_levels,
    regular_decompose,
)
from .dispatch import Pipeline, refute, suggested_ell
from .edge_delete import EdgeDeletion, default_eta, edge_delete
from .even import refute_even_field
from .group import (
    exact_low_arity_value,
    min_robustness,
    pad_row,
    reduce_group_pipeline,
    refute_even_group_robust,
)
from .odd import BipartiteBound, bipartite_polynomial, refute_bipartite, refute_odd
