"""The max-entropy pseudo-expectation for k-LIN over a field.

Entries are indexed by representative vectors ``W ∈ F^n``: a monomial in the complex variables
``y_{i,α}`` is identified with the vector of its per-coordinate total coefficients. Defined
entries are unit phases ``ω_p^e`` stored as exponents ``e mod p``; undefined entries are 0.
"""

import collections
import dataclasses
import logging
from enum import Enum

from klin_refute.internal.algebra import GroupSpec, Phase
from klin_refute.internal.instance import KLinInstance, SparseVec, vec_scale, vec_sub
from klin_refute.internal.models import (
    DEFAULT_PE_ENTRY_CAP,
    DomainMismatchError,
    InconsistentPseudoExpectationError,
    Report,
    ResourceCapError,
    ValidationError,
)

log = logging.getLogger(__name__)


class PEStatus(str, Enum):
    """Defines whether the closure reached a fixed point.

    Can either be
    - complete: every derivation agreed.
    - error: two derivations assigned different phases to one vector.
    """

    complete = "complete"
    error = "error"


class ClosureOrder(str, Enum):
    """Defines the worklist discipline of the closure."""

    fifo = "fifo"
    lifo = "lifo"


@dataclasses.dataclass(frozen=True)
class Step:
    """One derivation: a seed ``β·v`` (``origin = (position, β)``) or ``left − right``."""

    result: SparseVec
    exponent: int
    left: SparseVec | None = None
    right: SparseVec | None = None
    origin: tuple[int, int] | None = None


@dataclasses.dataclass
class PseudoExpectation:
    """A partial map from representative vectors to exact phases."""

    spec: GroupSpec
    n: int
    degree: int
    entries: dict[SparseVec, int] = dataclasses.field(default_factory=dict)
    log: list[Step] = dataclasses.field(default_factory=list)
    status: PEStatus = PEStatus.complete
    conflict: tuple[SparseVec, int, int] | None = None

    def phase(self, w: SparseVec) -> Phase | None:
        """The exact phase of ``Ẽ[y_W]``, or None when the entry is undefined."""
        e = self.entries.get(w)
        return None if e is None else Phase((e,), (self.spec.exponent,))

    def value(self, w: SparseVec) -> complex:
        """``Ẽ[y_W]`` as a complex number; 0 for undefined entries."""
        p = self.phase(w)
        return 0j if p is None else p.to_complex()

    def raise_for_status(self) -> None:
        """Raise InconsistentPseudoExpectationError if the closure hit a conflict."""
        if self.status == PEStatus.error and self.conflict is not None:
            raise InconsistentPseudoExpectationError(*self.conflict)


def seed_exponent(spec: GroupSpec, beta: int, rhs: int) -> int:
    """``Tr(β·b)``: the exponent required of ``Ẽ[y_{βv}]``."""
    return int(spec.phase_table[spec.mul_table[beta, rhs]])


def build_max_entropy(
    inst: KLinInstance,
    d: int,
    order: ClosureOrder | str = ClosureOrder.fifo,
    cap: int = DEFAULT_PE_ENTRY_CAP,
) -> PseudoExpectation:
    """Build the max-entropy pseudo-expectation of degree ``d``.

    Every constraint seeds ``Ẽ[y_{βv}] = ω^{Tr(βb)}``; the closure then sets
    ``Ẽ[y_{U−V}] = Ẽ[y_U]·conj(Ẽ[y_V])`` for defined pairs whose difference has weight at
    most ``d``, until nothing new appears. Seeds are added in instance order, then by β. A
    derivation that disagrees with an existing entry stops the closure with ``status = error``.

    Raises:
        DomainMismatchError: The domain is not a field.
        ValidationError: ``d < k``.
        ResourceCapError: More than ``cap`` entries would be defined.
    """
    spec = inst.spec
    if not spec.is_field:
        raise DomainMismatchError(f"pseudo-expectations need a field, got {spec.describe()}")
    if d < inst.k:
        raise ValidationError(f"degree d={d} is below k={inst.k}")
    order = ClosureOrder(order)
    p = spec.exponent
    pe = PseudoExpectation(spec, inst.n, d)
    work: collections.deque[SparseVec] = collections.deque()

    def define(step: Step) -> bool:
        old = pe.entries.get(step.result)
        if old is None:
            if len(pe.entries) >= cap:
                raise ResourceCapError("pseudo-expectation entries", len(pe.entries) + 1, cap)
            pe.entries[step.result] = step.exponent
            pe.log.append(step)
            work.append(step.result)
            return True
        if old != step.exponent:
            pe.status = PEStatus.error
            pe.conflict = (step.result, old, step.exponent)
            log.warning(
                "inconsistent derivation",
                extra={"vector": str(step.result), "old": old, "new": step.exponent, "d": d},
            )
            return False
        return True

    zero = SparseVec.zero(inst.n)
    define(Step(zero, 0))
    for pos, eq in enumerate(inst.equations):
        for beta in spec.units.tolist():
            step = Step(
                vec_scale(eq.lhs, beta, spec),
                seed_exponent(spec, beta, eq.rhs),
                origin=(pos, beta),
            )
            if not define(step):
                return pe

    while work:
        u = work.popleft() if order == ClosureOrder.fifo else work.pop()
        eu = pe.entries[u]
        for v, ev in list(pe.entries.items()):
            for left, right, e in ((u, v, eu - ev), (v, u, ev - eu)):
                w = vec_sub(left, right, spec)
                if w.wt > d:
                    continue
                if not define(Step(w, e % p, left=left, right=right)):
                    return pe
    log.debug(
        "max-entropy closure",
        extra={"entries": len(pe.entries), "d": d, "order": order.value, "m": inst.m},
    )
    return pe


def replay_derivations(pe: PseudoExpectation, inst: KLinInstance) -> Report:
    """Re-derive every logged step from its inputs and compare with the stored phase.

    Only meaningful for a pseudo-expectation built in this process; parsed dumps carry no log.
    """
    spec = pe.spec
    report = Report(subject="derivations")
    bad_vectors: list[int] = []
    bad_phases: list[int] = []
    for i, step in enumerate(pe.log):
        if step.origin is not None:
            pos, beta = step.origin
            eq = inst.equations[pos]
            vector = vec_scale(eq.lhs, beta, spec)
            exponent = seed_exponent(spec, beta, eq.rhs)
        elif step.left is not None and step.right is not None:
            vector = vec_sub(step.left, step.right, spec)
            exponent = (pe.entries[step.left] - pe.entries[step.right]) % spec.exponent
        else:
            vector, exponent = SparseVec.zero(pe.n), 0
        if vector != step.result or vector.wt > pe.degree:
            bad_vectors.append(i)
        if exponent != step.exponent or pe.entries.get(step.result) != exponent:
            bad_phases.append(i)
    report.add("replay-vectors", not bad_vectors, f"steps {bad_vectors[:5]}")
    report.add("replay-phases", not bad_phases, f"steps {bad_phases[:5]}")
    logged = {step.result for step in pe.log}
    report.add(
        "coverage",
        logged == set(pe.entries) and len(pe.log) == len(pe.entries),
        f"{len(pe.log)} steps for {len(pe.entries)} entries",
    )
    return report
