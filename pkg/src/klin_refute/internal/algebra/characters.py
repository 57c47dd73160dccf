"""Trace map and additive characters."""

from collections.abc import Sequence
from typing import TYPE_CHECKING

import numpy as np

from klin_refute.internal.models import DimensionError, DomainMismatchError

from .domain import GroupSpec
from .phase import Phase

if TYPE_CHECKING:
    from klin_refute.internal.instance import SparseVec


def trace(e: int, spec: GroupSpec) -> int:
    """Absolute trace ``Σ_j e^{p^j}`` of a field element, as an element of F_p."""
    if not spec.is_field:
        raise DomainMismatchError(f"trace needs a field, got {spec.describe()}")
    return int(spec.phase_table[e])


def phase_of(g: int, spec: GroupSpec) -> Phase:
    """The phase ``χ_1(g)``: ``ω_p^{Tr g}`` for fields, ``∏ ω_{m_i}^{g_i}`` for products."""
    if spec.is_field:
        return Phase((int(spec.phase_table[g]),), spec.moduli)
    return Phase(tuple(int(c) for c in spec.coords[g]), spec.moduli)


def character(alpha: int, x: int, spec: GroupSpec) -> Phase:
    """``χ_α(x)`` as an exact phase."""
    return phase_of(int(spec.mul_table[alpha, x]), spec)


def char_vec(v: "SparseVec", x: Sequence[int] | np.ndarray, spec: GroupSpec) -> Phase:
    """``χ_v(x) = ∏_i χ_{v_i}(x_i)``."""
    if len(x) != v.n:
        raise DimensionError(f"assignment has length {len(x)}, vector has n={v.n}")
    return phase_of(spec.dot(v.indices, v.values, np.asarray(x)), spec)
