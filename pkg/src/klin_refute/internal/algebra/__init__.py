"""Exact arithmetic over prime fields, small extension fields and finite Abelian groups."""

from .characters import char_vec, character, phase_of, trace
from .domain import MAX_ORDER, DomainKind, Factor, GroupSpec, IntArray, is_prime
from .phase import Phase
from .subgroups import (
    QuotientSubgroup,
    SubgroupDesc,
    enumerate_subgroups,
    find_quotient_subgroup,
    representative_group,
    robustness,
    thinness,
    verify_quotient_case,
)
