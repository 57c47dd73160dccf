"""Representative subgroups, thinness, robustness and the quotient-subgroup search."""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from klin_refute.internal.models import DomainMismatchError, ValidationError

from .domain import Factor, GroupSpec, is_prime

if TYPE_CHECKING:
    from klin_refute.internal.instance import SparseVec

log = logging.getLogger(__name__)

VERIFY_QUOTIENT_LIMIT = 64


@dataclass(frozen=True)
class SubgroupDesc:
    """The subgroup ``⊗_i μ_i Z_{m_i}`` of ``⊗_i Z_{m_i}``."""

    moduli: tuple[int, ...]
    multipliers: tuple[int, ...]

    def __post_init__(self) -> None:
        for q, mu in zip(self.moduli, self.multipliers, strict=True):
            if q % mu:
                raise ValueError(f"multiplier {mu} does not divide {q}")

    @property
    def order(self) -> int:
        """Number of elements."""
        return math.prod(q // mu for q, mu in zip(self.moduli, self.multipliers, strict=True))

    @property
    def index(self) -> int:
        """Order of the quotient by this subgroup."""
        return math.prod(self.multipliers)


@dataclass(frozen=True)
class QuotientSubgroup:
    """Outcome of the quotient-subgroup search over the prime-power factors of a group."""

    subgroup: SubgroupDesc
    case: int
    factors: tuple[Factor, ...]
    quotient: GroupSpec | None
    verified: bool | None

    def project(self, spec: GroupSpec, code: int) -> int:
        """Image of an element of ``spec`` in the quotient group."""
        if self.quotient is None:
            return code
        comps = spec.coords[code]
        kept = tuple(
            int(comps[f.component]) % mu
            for f, mu in zip(self.factors, self.subgroup.multipliers, strict=True)
            if mu > 1
        )
        return self.quotient.encode(kept)


def _coord_view(spec: GroupSpec) -> tuple[tuple[int, ...], bool]:
    # fields are treated as their additive group Z_p^m
    return spec.coord_moduli, spec.is_field


def representative_group(v: "SparseVec", spec: GroupSpec) -> SubgroupDesc:
    """The subgroup generated by the coefficients of ``v``.

    For products the i-th component is ``μ_i Z_{m_i}`` with ``μ_i = gcd(m_i, v_j^{(i)})``. A
    nonzero vector over a field generates the whole field.
    """
    moduli, is_field = _coord_view(spec)
    if is_field:
        mult = 1 if v.values else spec.p
        return SubgroupDesc(moduli, tuple(mult for _ in moduli))
    mus = []
    for i, q in enumerate(moduli):
        mus.append(math.gcd(q, *(int(spec.coords[c][i]) for c in v.values)))
    return SubgroupDesc(moduli, tuple(mus))


def thinness(v: "SparseVec", spec: GroupSpec) -> Fraction:
    """``λ(v) = |H(v)| / |G|``."""
    return Fraction(representative_group(v, spec).order, spec.order)


def robustness(v: "SparseVec", k: int, spec: GroupSpec) -> Fraction:
    """Minimum thinness over the ``⌊k/2⌋``-size subequations of ``v``."""
    half = k // 2
    if v.wt < half:
        raise ValidationError(f"weight {v.wt} is below k/2 = {half}")
    return min(
        thinness(v.restrict(subset), spec)
        for subset in itertools.combinations(v.indices, half)
    )


def find_quotient_subgroup(spec: GroupSpec, t: int) -> QuotientSubgroup:
    """Find H with ``|G/H| <= t``, or G/H of prime order ``> t``, or ``t < |G/H| <= t²``.

    In the third case every nontrivial subgroup of G/H has order at least ``|G/H|/t``. Fields
    are returned unchanged (H trivial).
    """
    if t < 1:
        raise ValidationError(f"t must be positive, got {t}")
    if spec.is_field:
        case = 1 if spec.order <= t else 2
        trivial = SubgroupDesc(spec.coord_moduli, spec.coord_moduli)
        return QuotientSubgroup(trivial, case, (), None, None)

    factors = spec.factors
    full = tuple(f.modulus for f in factors)
    if spec.order <= t:
        mus = full
    elif factors[0].prime > t:
        mus = (factors[0].prime,) + (1,) * (len(factors) - 1)
    else:
        mus = full
        for s, f in enumerate(factors):
            found = False
            for e in range(1, f.exp + 1):
                cand = full[:s] + (f.prime**e,) + (1,) * (len(factors) - s - 1)
                if math.prod(cand) >= t:
                    mus, found = cand, True
                    break
            if found:
                break

    sub = SubgroupDesc(full, mus)
    q_order = sub.index
    if q_order <= t:
        case = 1
    elif is_prime(q_order):
        case = 2
    else:
        case = 3
    kept = [mu for mu in mus if mu > 1]
    quotient = GroupSpec.product(kept) if kept else None
    verified = None
    if quotient is not None and q_order <= VERIFY_QUOTIENT_LIMIT:
        verified = verify_quotient_case(quotient, t, case)
        if not verified:
            log.error("quotient case %d failed verification for %s, t=%d", case, spec, t)
    return QuotientSubgroup(sub, case, factors, quotient, verified)


def enumerate_subgroups(spec: GroupSpec) -> list[frozenset[int]]:
    """All subgroups of a small Abelian group, as element sets."""
    if spec.is_field:
        raise DomainMismatchError("subgroup enumeration is for abelian products")

    def generated(gens: set[int]) -> frozenset[int]:
        elems = {0}
        frontier = {0}
        while frontier:
            nxt = {int(spec.add_table[a, g]) for a in frontier for g in gens} - elems
            elems |= nxt
            frontier = nxt
        return frozenset(elems)

    groups = {generated({g}) for g in range(spec.order)}
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(groups), 2):
            joined = generated(set(a | b))
            if joined not in groups:
                groups.add(joined)
                changed = True
    return sorted(groups, key=lambda s: (len(s), sorted(s)))


def verify_quotient_case(quotient: GroupSpec, t: int, case: int) -> bool:
    """Check a case tag of the quotient-subgroup search against all subgroups of G/H."""
    order = quotient.order
    proper = [s for s in enumerate_subgroups(quotient) if 1 < len(s)]
    match case:
        case 1:
            return order <= t
        case 2:
            return order > t and all(len(s) == order for s in proper)
        case 3:
            return t < order <= t * t and all(len(s) * t >= order for s in proper)
        case _:
            return False
