"""Indicator-variable form of a pseudo-expectation.

Each indicator ``x_{i,a}`` (``x_i = a``) is replaced by ``(1/q)·Σ_β ω^{−Tr(βa)}·y_{i,β}``
and the complex pseudo-expectation is applied to the expansion. Monomials are sorted tuples of
``(i, a)`` factors; repeated factors are allowed and collapse by booleanity.
"""

import collections
import dataclasses
import itertools
import logging
import math
from collections.abc import Iterable, Sequence

import numpy as np

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import KLinInstance
from klin_refute.internal.models import (
    DEFAULT_PE_ENTRY_CAP,
    DomainMismatchError,
    Report,
    ResourceCapError,
    ValidationError,
)

from .pseudo import PEStatus, PseudoExpectation

log = logging.getLogger(__name__)

TOL = 1e-9

Monomial = tuple[tuple[int, int], ...]


def _coordinate_weights(spec: GroupSpec, alphas: Sequence[int]) -> np.ndarray:
    """``c(s) = q^{−r}·Σ_{β_1+…+β_r = s} ω^{−Tr(Σ β_j a_j)}`` for every ``s ∈ F``."""
    q, p = spec.order, spec.exponent
    out = np.zeros(q, dtype=np.complex128)
    for betas in itertools.product(range(q), repeat=len(alphas)):
        s, t = 0, 0
        for beta, a in zip(betas, alphas, strict=True):
            s = int(spec.add_table[s, beta])
            t = int(spec.add_table[t, spec.mul_table[beta, a]])
        out[s] += np.exp(-2j * np.pi * int(spec.phase_table[t]) / p)
    return out / q ** len(alphas)


def boolean_value(pe: PseudoExpectation, factors: Iterable[tuple[int, int]]) -> complex:
    """``Ẽ′[∏ x_{i,a}]``, real up to rounding when the pseudo-expectation is complete."""
    spec = pe.spec
    per_coord: dict[int, list[int]] = collections.defaultdict(list)
    for i, a in factors:
        per_coord[i].append(a)
    weights = {i: _coordinate_weights(spec, alphas) for i, alphas in per_coord.items()}
    total = 0j
    for w, e in pe.entries.items():
        if not w.support <= per_coord.keys():
            continue
        coef = 1 + 0j
        for i, c in weights.items():
            coef *= c[w.get(i)]
        total += coef * np.exp(2j * np.pi * e / spec.exponent)
    return complex(total)


def monomials(n: int, q: int, d: int) -> Iterable[Monomial]:
    """Multilinear monomials of degree at most ``d``, by degree then lexicographically."""
    for r in range(d + 1):
        for coords in itertools.combinations(range(n), r):
            for values in itertools.product(range(q), repeat=r):
                yield tuple(zip(coords, values, strict=True))


def table_size(n: int, q: int, d: int) -> int:
    """``Σ_{r<=d} C(n,r)·q^r``."""
    return sum(math.comb(n, r) * q**r for r in range(d + 1))


@dataclasses.dataclass
class BooleanPE:
    """Indicator moments ``Ẽ′[∏ x_{i,a}]`` for multilinear monomials and their checks."""

    degree: int
    values: dict[Monomial, float]
    report: Report


def indicator_objective(pe: PseudoExpectation, inst: KLinInstance) -> float:
    """``(1/m)·Σ_v Σ_{a: Σ v_i a_i = b_v} Ẽ′[∏_i x_{i,a_i}]``.

    The inner sum runs over all local assignments satisfying the equation.
    """
    spec = pe.spec
    total = 0.0
    for eq in inst.equations:
        inv = [spec.inverse(c) for c in eq.lhs.values]
        for alphas in itertools.product(range(spec.order), repeat=eq.lhs.wt):
            acc = 0
            for a in alphas:
                acc = int(spec.add_table[acc, a])
            if acc != eq.rhs:
                continue
            factors = [
                (i, int(spec.mul_table[a, c]))
                for i, a, c in zip(eq.lhs.indices, alphas, inv, strict=True)
            ]
            total += boolean_value(pe, factors).real
    return total / inst.m


def to_boolean_pe(
    pe: PseudoExpectation,
    d: int,
    inst: KLinInstance | None = None,
    cap: int = DEFAULT_PE_ENTRY_CAP,
) -> BooleanPE:
    """Tabulate ``Ẽ′`` on multilinear monomials of degree ≤ d and check it.

    A degree-d indicator monomial expands into representatives of weight at most d, so
    ``d`` may not exceed the complex degree. Checks: values are real, ``Ẽ′[1] = 1``, the sum
    rule ``Σ_a Ẽ′[P·x_{i,a}] = Ẽ′[P]``, booleanity of repeated factors and, when ``inst``
    is given, an indicator objective of 1.

    Raises:
        DomainMismatchError: The domain is not a field, or differs from the instance's.
        ValidationError: The pseudo-expectation is not complete, or ``d`` exceeds its degree.
        ResourceCapError: The table would have more than ``cap`` monomials.
    """
    spec = pe.spec
    if not spec.is_field:
        raise DomainMismatchError(f"indicator form needs a field, got {spec.describe()}")
    if pe.status != PEStatus.complete:
        raise ValidationError("only complete pseudo-expectations have an indicator form")
    if not 0 <= d <= pe.degree:
        raise ValidationError(f"degree d={d} exceeds the pseudo-expectation degree {pe.degree}")
    if inst is not None and (inst.spec.describe(), inst.n) != (spec.describe(), pe.n):
        raise DomainMismatchError("instance and pseudo-expectation differ in domain or n")
    if inst is not None and inst.k > pe.degree:
        raise ValidationError(f"objective needs degree k={inst.k}, have {pe.degree}")
    q = spec.order
    size = table_size(pe.n, q, d)
    if size > cap:
        raise ResourceCapError("indicator monomials", size, cap)

    raw = {mono: boolean_value(pe, mono) for mono in monomials(pe.n, q, d)}
    report = Report(subject="indicator-form")
    worst_imag = max(abs(v.imag) for v in raw.values())
    report.add("real", worst_imag <= TOL, f"max |Im| {worst_imag:.3e}")
    values = {mono: v.real for mono, v in raw.items()}
    report.add("normalization", abs(values[()] - 1) <= TOL, f"Ẽ′[1] = {values[()]:.12f}")

    worst_sum = 0.0
    for mono, v in values.items():
        if len(mono) >= d:
            continue
        used = {i for i, _ in mono}
        for i in range(pe.n):
            if i in used:
                continue
            s = sum(values[tuple(sorted((*mono, (i, a))))] for a in range(q))
            worst_sum = max(worst_sum, abs(s - v))
    report.add("sum-rule", worst_sum <= TOL, f"max deviation {worst_sum:.3e}")

    worst_bool = 0.0
    for mono, v in values.items():
        if not mono or len(mono) >= d:
            continue
        i, a = mono[0]
        other = int(spec.add_table[a, 1])
        same = boolean_value(pe, [*mono, (i, a)]).real
        clash = boolean_value(pe, [*mono, (i, other)]).real
        worst_bool = max(worst_bool, abs(same - v), abs(clash))
    report.add("booleanity", worst_bool <= TOL, f"max deviation {worst_bool:.3e}")

    if inst is not None:
        obj = indicator_objective(pe, inst)
        report.add("objective", abs(obj - 1) <= TOL, f"indicator objective {obj:.12f}")
    log.info("indicator form", extra={"d": d, "monomials": len(values), "ok": report.ok})
    return BooleanPE(d, values, report)
