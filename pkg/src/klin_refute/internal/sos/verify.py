"""Checks that a max-entropy pseudo-expectation satisfies the k-LIN constraints."""

import concurrent.futures
import dataclasses
import logging
from collections.abc import Iterable, Sequence

import numpy as np
import scipy.linalg

from klin_refute.internal.instance import KLinInstance, SparseVec, vec_neg, vec_scale, vec_sub
from klin_refute.internal.models import (
    DimensionError,
    DomainMismatchError,
    Report,
    ValidationError,
)

from .pseudo import PEStatus, PseudoExpectation, seed_exponent

log = logging.getLogger(__name__)

PSD_TOL = 1e-8
RANK_ONE_TOL = 1e-8

Factor = tuple[int, int, bool]


def representative(factors: Iterable[Factor], pe: PseudoExpectation) -> SparseVec:
    """The representative vector of ``∏ y_{i,α}`` (``conj`` factors contribute ``−α``)."""
    spec = pe.spec
    acc: dict[int, int] = {}
    for i, alpha, conj in factors:
        c = int(spec.neg_table[alpha]) if conj else alpha
        acc[i] = int(spec.add_table[acc.get(i, 0), c])
    return SparseVec.from_mapping(pe.n, acc)


def index_vectors(pe: PseudoExpectation) -> list[SparseVec]:
    """Moment-matrix rows: entries of weight ≤ d/2, and every ``α·e_i`` when d ≥ 2."""
    rows = {w for w in pe.entries if 2 * w.wt <= pe.degree}
    if pe.degree >= 2:
        rows |= {SparseVec(pe.n, (i,), (a,)) for i in range(pe.n) for a in pe.spec.units.tolist()}
    return sorted(rows, key=lambda w: (w.wt, w))


def equivalence_classes(pe: PseudoExpectation, rows: Sequence[SparseVec]) -> list[list[SparseVec]]:
    """Partition ``rows`` by ``u ∼ v iff Ẽ[y_{u−v}] ≠ 0`` (closed transitively)."""
    parent = list(range(len(rows)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(len(rows)):
        for b in range(a + 1, len(rows)):
            if vec_sub(rows[a], rows[b], pe.spec) in pe.entries:
                parent[find(b)] = find(a)
    groups: dict[int, list[SparseVec]] = {}
    for a, w in enumerate(rows):
        groups.setdefault(find(a), []).append(w)
    return list(groups.values())


def moment_matrix(pe: PseudoExpectation, members: Sequence[SparseVec]) -> np.ndarray:
    """``M[u, v] = Ẽ[y_{u−v}]`` over the given members."""
    return np.asarray(
        [[pe.value(vec_sub(u, v, pe.spec)) for v in members] for u in members],
        dtype=np.complex128,
    )


@dataclasses.dataclass(frozen=True)
class ClassCheck:
    """Spectral facts about one class's moment matrix."""

    size: int
    min_eig: float
    rank_one_dist: float
    closed: bool


def _check_class(pe: PseudoExpectation, members: list[SparseVec]) -> ClassCheck:
    spec = pe.spec
    closed = all(vec_sub(u, v, spec) in pe.entries for u in members for v in members)
    M = moment_matrix(pe, members)
    eigs = scipy.linalg.eigvalsh(M)
    w = M[:, 0]
    dist = float(np.linalg.norm(M - np.outer(w, w.conj())))
    return ClassCheck(len(members), float(eigs.min()), dist, closed)


def _random_factors(rng: np.random.Generator, pe: PseudoExpectation, count: int) -> list[Factor]:
    units = pe.spec.units
    return [
        (int(rng.integers(pe.n)), int(rng.choice(units)), bool(rng.integers(2)))
        for _ in range(count)
    ]


def verify_pe(
    pe: PseudoExpectation,
    inst: KLinInstance,
    spot_checks: int = 500,
    seed: int = 0,
    workers: int = 1,
) -> Report:
    """Itemised check of the pseudo-expectation constraints and of positivity.

    Validity (``y^p = 1``) and consistency (``y_{i,α}·conj(y_{i,β}) = y_{i,α−β}``) hold as
    entries are indexed by representatives; they are spot-checked on random monomials. Positivity
    is checked per equivalence class of the moment-matrix rows, classes running concurrently.

    Raises:
        ValidationError: The pseudo-expectation is not complete.
        DomainMismatchError: The instance lives over another domain.
        DimensionError: The instance has another number of variables.
    """
    if pe.status != PEStatus.complete:
        raise ValidationError("only complete pseudo-expectations can be verified")
    if pe.spec.describe() != inst.spec.describe():
        raise DomainMismatchError(
            f"dump over {pe.spec.describe()}, instance over {inst.spec.describe()}",
        )
    if pe.n != inst.n:
        raise DimensionError(f"dump has n={pe.n}, instance has n={inst.n}")
    spec, p = pe.spec, pe.spec.exponent
    report = Report(subject="pseudo-expectation")
    zero = SparseVec.zero(pe.n)
    e0 = pe.entries.get(zero)
    report.add("normalization", e0 == 0, f"Ẽ[1] exponent {e0}")

    unpaired = [
        w for w, e in pe.entries.items() if pe.entries.get(vec_neg(w, spec)) != (-e) % p
    ]
    report.add("conjugation", not unpaired, f"{len(unpaired)} entries without conjugate")
    heavy = [w for w in pe.entries if w.wt > pe.degree]
    report.add("degree", not heavy, f"{len(heavy)} entries above d={pe.degree}")

    wrong = [
        (pos, beta)
        for pos, eq in enumerate(inst.equations)
        for beta in spec.units.tolist()
        if pe.entries.get(vec_scale(eq.lhs, beta, spec)) != seed_exponent(spec, beta, eq.rhs)
    ]
    report.add("objective", not wrong, f"constraints {wrong[:5]}")

    rng = np.random.default_rng(seed)
    validity_bad = consistency_bad = 0
    for _ in range(spot_checks):
        base = _random_factors(rng, pe, int(rng.integers(0, max(pe.degree - 1, 0) + 1)))
        i = int(rng.integers(pe.n))
        a, b = (int(c) for c in rng.choice(spec.units, size=2))
        left = representative([*base, *[(i, a, False)] * p], pe)
        if pe.value(left) != pe.value(representative(base, pe)):
            validity_bad += 1
        diff = int(spec.add_table[a, spec.neg_table[b]])
        lhs = representative([*base, (i, a, False), (i, b, True)], pe)
        rhs = representative([*base, (i, diff, False)], pe)
        if lhs != rhs or pe.value(lhs) != pe.value(rhs):
            consistency_bad += 1
    report.add("validity", validity_bad == 0, f"{validity_bad} of {spot_checks} spot checks")
    report.add(
        "consistency",
        consistency_bad == 0,
        f"{consistency_bad} of {spot_checks} spot checks",
    )

    rows = index_vectors(pe)
    classes = equivalence_classes(pe, rows)
    report.add("reflexive", zero in pe.entries, "Ẽ[y_0] defined")
    report.add("symmetric", not unpaired, "u−v defined iff v−u defined")
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda c: _check_class(pe, c), classes))
    open_classes = [r.size for r in results if not r.closed]
    report.add("transitive", not open_classes, f"classes of sizes {open_classes[:5]} not closed")
    min_eig = min((r.min_eig for r in results), default=1.0)
    report.add(
        "positivity",
        min_eig >= -PSD_TOL,
        f"min eigenvalue {min_eig:.3e} over {len(classes)} classes",
    )
    dist = max((r.rank_one_dist for r in results), default=0.0)
    report.add("rank-one", dist <= RANK_ONE_TOL, f"max Frobenius distance {dist:.3e}")
    log.debug("pseudo-expectation verified", extra={"classes": len(classes), "ok": report.ok})
    return report
