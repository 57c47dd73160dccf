import unittest

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import Equation, KLinInstance, SparseVec, gen_random
from klin_refute.internal.models import DomainMismatchError, ValidationError

from .decompose import (
    BipartiteDecomposition,
    audit_decomposition,
    default_thresholds,
    regular_decompose,
)

F2, F3 = GroupSpec.parse("p=2"), GroupSpec.parse("p=3")


def _inst(spec: GroupSpec, n: int, k: int, rows: list[tuple[dict[int, int], int]]) -> KLinInstance:
    eqs = tuple(Equation(SparseVec.from_mapping(n, lhs), rhs) for lhs, rhs in rows)
    return KLinInstance(spec, n, k, eqs)


def _level(
    levels: list[tuple[KLinInstance, BipartiteDecomposition]],
    t: int,
) -> BipartiteDecomposition:
    return next(d for _, d in levels if d.t == t)


class TestRegularDecompose(unittest.TestCase):
    def test_default_thresholds(self) -> None:
        tau = default_thresholds(n=8, k=3, ell=1, eps=0.5, units=2)
        self.assertEqual(tau[3], 144)
        self.assertEqual(tau[2], 144)
        self.assertEqual(tau[1], 576)

    def test_full_support_buckets(self) -> None:
        values = [(1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2)]
        inst = _inst(F3, 4, 3, [(dict(zip((0, 1, 2), v, strict=True)), 0) for v in values])
        levels = regular_decompose(inst, 1, 0.5, thresholds={3: 1})
        top = _level(levels, 3)
        self.assertEqual(top.prefixes, 4)
        self.assertEqual([len(b.members) for b in top.buckets], [1, 1, 1, 1])
        self.assertEqual(_level(levels, 1).size, 0)
        self.assertTrue(audit_decomposition(inst, levels).ok)

    def test_low_density_falls_to_leftovers(self) -> None:
        inst = gen_random(F3, n=8, k=3, m=10, seed=2)
        levels = regular_decompose(inst, 1, 0.5)
        self.assertEqual([d.t for _, d in levels], [3, 2, 1])
        bottom = _level(levels, 1)
        self.assertEqual(bottom.size, 10)
        self.assertTrue(all(b.leftover for b in bottom.buckets))
        for b in bottom.buckets:
            for m in b.members:
                self.assertEqual(inst.equations[m.position].lhs.indices[0], b.prefix.indices[0])
        self.assertTrue(audit_decomposition(inst, levels).ok)

    def test_shared_prefix_forms_bucket(self) -> None:
        inst = _inst(
            F3,
            6,
            3,
            [({0: 1, 1: 2, 2: 1}, 0), ({0: 2, 1: 1, 3: 1}, 1), ({0: 1, 1: 2, 4: 2}, 2)],
        )
        levels = regular_decompose(inst, 1, 0.5, thresholds={3: 100, 2: 3})
        mid = _level(levels, 2)
        self.assertEqual(mid.prefixes, 1)
        bucket = mid.buckets[0]
        self.assertEqual(bucket.prefix, SparseVec(6, (0, 1), (1, 2)))
        self.assertEqual([(m.position, m.scalar) for m in bucket.members], [(0, 1), (1, 2), (2, 1)])
        scaled, _ = next((i, d) for i, d in levels if d.t == 2)
        self.assertEqual(scaled.equations[1], Equation(SparseVec(6, (0, 1, 3), (1, 2, 2)), 2))
        self.assertTrue(audit_decomposition(inst, levels).ok)

    def test_audit_over_seeds(self) -> None:
        for seed in range(100):
            inst = gen_random(F2, n=6, k=3, m=20, seed=seed)
            thresholds = {3: 2, 2: 2 + seed % 3, 1: 3 + seed % 4}
            levels = regular_decompose(inst, 2, 0.5, thresholds=thresholds)
            report = audit_decomposition(inst, levels)
            with self.subTest(seed=seed):
                self.assertTrue(report.ok, report.failed())
                self.assertEqual(sum(d.size for _, d in levels), inst.m)

    def test_audit_detects_broken_partition(self) -> None:
        inst = gen_random(F2, n=6, k=3, m=8, seed=1)
        levels = regular_decompose(inst, 2, 0.5)
        bottom = _level(levels, 1)
        broken = BipartiteDecomposition(1, bottom.threshold, bottom.buckets[1:])
        report = audit_decomposition(inst, [*levels[:-1], (levels[-1][0], broken)])
        self.assertEqual([c.name for c in report.failed()], ["partition"])

    def test_audit_counts_upper_levels_when_sparse(self) -> None:
        inst = _inst(
            F3,
            6,
            3,
            [({0: 1, 1: 2, 2: 1}, 0), ({0: 2, 1: 1, 3: 1}, 1), ({0: 1, 1: 2, 4: 2}, 2)],
        )
        levels = regular_decompose(inst, 1, 0.5, thresholds={3: 100, 2: 3})
        self.assertGreater(inst.n * _level(levels, 1).threshold, inst.m)
        report = audit_decomposition(inst, levels)
        check = next(c for c in report.checks if c.name == "prefix-count")
        self.assertTrue(check.passed)
        self.assertIn("t=1 skipped", check.detail)

        mid = _level(levels, 2)
        inflated = BipartiteDecomposition(2, 7, mid.buckets)
        tampered = [(i, inflated if d.t == 2 else d) for i, d in levels]
        failed = [c.name for c in audit_decomposition(inst, tampered).failed()]
        self.assertIn("prefix-count", failed)

    def test_rejects(self) -> None:
        with self.assertRaises(DomainMismatchError):
            regular_decompose(gen_random(GroupSpec.parse("zm=4"), n=5, k=3, m=4, seed=0), 2, 0.5)
        mixed = _inst(F3, 5, 3, [({0: 1, 1: 1, 2: 1}, 0), ({0: 1, 1: 1}, 0)])
        with self.assertRaises(ValidationError):
            regular_decompose(mixed, 2, 0.5)
        with self.assertRaises(ValidationError):
            regular_decompose(gen_random(F3, n=5, k=3, m=4, seed=0), 2, 0.5, thresholds={2: 0})
