"""Short linear dependencies among sparse vectors: exact checks and two search modes."""

from .decompose import vector_decompose, vector_thresholds
from .dependency import (
    Dependency,
    combination_sums,
    combine,
    exhaustive_cost,
    find_dependency_exhaustive,
    verify_dependency,
    zero_combinations,
)
from .search import SearchMode, find_dependency, find_dependency_kikuchi
