import unittest

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.deps import find_dependency_exhaustive
from klin_refute.internal.instance import (
    Equation,
    KLinInstance,
    SparseVec,
    brute_force_val,
    gen_planted,
    gen_random,
    vec_scale,
    vec_sub,
)
from klin_refute.internal.models import (
    DomainMismatchError,
    InconsistentPseudoExpectationError,
    ResourceCapError,
    ValidationError,
)

from .expansion import find_refutation_exhaustive
from .pseudo import ClosureOrder, PEStatus, build_max_entropy, replay_derivations

F2 = GroupSpec.parse("p=2")
F3 = GroupSpec.parse("p=3")


def naive_closure(inst: KLinInstance, d: int) -> tuple[dict[SparseVec, int], bool]:
    """Sweep over all pairs until nothing changes; returns the entries and a consistency flag."""
    spec, p = inst.spec, inst.spec.exponent
    entries = {SparseVec.zero(inst.n): 0}
    ok = True
    for eq in inst.equations:
        for beta in spec.units.tolist():
            w = vec_scale(eq.lhs, beta, spec)
            e = int(spec.phase_table[spec.mul_table[beta, eq.rhs]])
            ok &= entries.setdefault(w, e) == e
    changed = True
    while changed and ok:
        changed = False
        for u, eu in list(entries.items()):
            for v, ev in list(entries.items()):
                w = vec_sub(u, v, spec)
                if w.wt > d:
                    continue
                e = (eu - ev) % p
                if w not in entries:
                    entries[w] = e
                    changed = True
                elif entries[w] != e:
                    ok = False
    return entries, ok


class TestBuildMaxEntropy(unittest.TestCase):
    def test_single_equation(self) -> None:
        v = SparseVec(5, (0, 1, 2), (1, 2, 1))
        inst = KLinInstance(F3, 5, 3, (Equation(v, 2),))
        pe = build_max_entropy(inst, 3)
        self.assertEqual(pe.status, PEStatus.complete)
        self.assertEqual(
            pe.entries,
            {SparseVec.zero(5): 0, v: 2, vec_scale(v, 2, F3): 1},
        )
        self.assertAlmostEqual(pe.value(SparseVec(5, (4,), (1,))), 0)
        self.assertIsNone(pe.phase(SparseVec(5, (4,), (1,))))

    def test_contradiction_pair(self) -> None:
        v = SparseVec(4, (0, 1, 3), (1, 1, 1))
        inst = KLinInstance(F3, 4, 3, (Equation(v, 0), Equation(v, 1)))
        pe = build_max_entropy(inst, 3)
        self.assertEqual(pe.status, PEStatus.error)
        assert pe.conflict is not None
        self.assertIn(pe.conflict[0], {v, vec_scale(v, 2, F3)})
        with self.assertRaises(InconsistentPseudoExpectationError):
            pe.raise_for_status()

    def test_full_degree_errors_iff_unsatisfiable(self) -> None:
        for spec in (F2, F3):
            for seed in range(12):
                inst = gen_random(spec, n=4, k=2, m=3 + seed % 4, seed=seed)
                with self.subTest(spec=spec.describe(), seed=seed):
                    pe = build_max_entropy(inst, inst.n)
                    refutation = find_refutation_exhaustive(inst, inst.m)
                    val, _ = brute_force_val(inst)
                    self.assertEqual(pe.status == PEStatus.error, refutation is not None)
                    self.assertEqual(refutation is not None, val < 1)

    def test_independent_vectors_complete(self) -> None:
        for seed in range(10):
            inst = gen_random(F3, n=8, k=3, m=4, seed=seed)
            with self.subTest(seed=seed):
                pe = build_max_entropy(inst, 6)
                if find_dependency_exhaustive(inst, inst.m) is None:
                    self.assertEqual(pe.status, PEStatus.complete)

    def test_planted_is_complete(self) -> None:
        for seed in range(10):
            inst = gen_planted(F3, n=6, k=3, m=5, seed=seed)
            with self.subTest(seed=seed):
                pe = build_max_entropy(inst, 4)
                self.assertEqual(pe.status, PEStatus.complete)
                pe.raise_for_status()
                self.assertTrue(all(w.wt <= 4 for w in pe.entries))

    def test_order_does_not_change_fixed_point(self) -> None:
        for seed in range(10):
            inst = gen_random(F3, n=5, k=2, m=4, seed=seed)
            for d in (2, 3, 4):
                with self.subTest(seed=seed, d=d):
                    fifo = build_max_entropy(inst, d, ClosureOrder.fifo)
                    lifo = build_max_entropy(inst, d, "lifo")
                    entries, ok = naive_closure(inst, d)
                    self.assertEqual(fifo.status == PEStatus.complete, ok)
                    self.assertEqual(lifo.status, fifo.status)
                    if ok:
                        self.assertEqual(fifo.entries, entries)
                        self.assertEqual(lifo.entries, entries)

    def test_replay(self) -> None:
        inst = gen_planted(F2, n=6, k=3, m=4, seed=3)
        pe = build_max_entropy(inst, 4)
        report = replay_derivations(pe, inst)
        self.assertTrue(report.ok, report.failed())

        pe.entries[next(iter(pe.entries))] = 1
        self.assertFalse(replay_derivations(pe, inst).ok)

    def test_rejects(self) -> None:
        inst = gen_random(F3, n=5, k=3, m=3, seed=0)
        with self.assertRaises(ValidationError):
            build_max_entropy(inst, 2)
        with self.assertRaises(ValueError):
            build_max_entropy(inst, 3, order="random")
        with self.assertRaises(ResourceCapError):
            build_max_entropy(inst, 5, cap=3)
        z4 = GroupSpec.parse("zm=4")
        with self.assertRaises(DomainMismatchError):
            build_max_entropy(gen_random(z4, n=4, k=2, m=2, seed=0), 2)

