import math
import unittest

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import Equation, KLinInstance, SparseVec, gen_random
from klin_refute.internal.models import DomainMismatchError, ValidationError

from .decompose import vector_decompose, vector_thresholds
from .dependency import find_dependency_exhaustive, verify_dependency
from .search import SearchMode, find_dependency, find_dependency_kikuchi

F2 = GroupSpec.parse("p=2")
F3 = GroupSpec.parse("p=3")


def _vectors(spec: GroupSpec, n: int, k: int, rows: list[dict[int, int]]) -> KLinInstance:
    eqs = tuple(Equation(SparseVec.from_mapping(n, r), 0) for r in rows)
    return KLinInstance(spec, n, k, eqs)


# a + b + c + d = 0 with a, b sharing {0, 1} and c, d sharing {4, 5}
ODD_CROSS = [
    {0: 1, 1: 1, 2: 1},
    {0: 1, 1: 1, 3: 1},
    {2: 1, 4: 1, 5: 1},
    {3: 1, 4: 1, 5: 1},
]


class TestKikuchiSearch(unittest.TestCase):
    def test_scalar_pair(self) -> None:
        inst = _vectors(F3, 4, 2, [{0: 1, 1: 1}, {2: 1, 3: 1}, {0: 2, 1: 2}])
        dep = find_dependency_kikuchi(inst, 1, walk_budget=2)
        assert dep is not None
        self.assertEqual(dep.positions, [0, 2])
        self.assertTrue(verify_dependency(inst, dep))

    def test_cycle(self) -> None:
        inst = _vectors(F3, 4, 2, [{0: 1, 1: 1}, {1: 1, 2: 1}, {2: 1, 3: 1}, {0: 1, 3: 1}])
        self.assertIsNone(find_dependency_kikuchi(inst, 1, walk_budget=3))
        dep = find_dependency_kikuchi(inst, 1, walk_budget=4)
        assert dep is not None
        self.assertEqual(dep.positions, [0, 1, 2, 3])

    def test_agrees_with_exhaustive(self) -> None:
        for seed in range(50):
            m = 2 + seed % 5
            inst = gen_random(F3, n=5, k=2, m=m, seed=seed)
            with self.subTest(seed=seed, m=m):
                oracle = find_dependency_exhaustive(inst, m)
                found = find_dependency_kikuchi(inst, 1, walk_budget=2 * m, seed=seed)
                self.assertEqual(found is None, oracle is None)
                if found is not None:
                    self.assertTrue(verify_dependency(inst, found))

    def test_seed_and_workers_do_not_change_existence(self) -> None:
        inst = gen_random(F3, n=6, k=2, m=10, seed=2)
        results = [
            find_dependency_kikuchi(inst, 1, walk_budget=6, seed=s, workers=w)
            for s in (0, 1)
            for w in (1, 3)
        ]
        self.assertEqual(len({r is None for r in results}), 1)
        for r in results:
            if r is not None:
                self.assertTrue(verify_dependency(inst, r))

    def test_density_regime(self) -> None:
        n, units, ell = 6, 2, 1
        m = math.ceil(4 * n * math.log(units * n))
        inst = gen_random(F3, n=n, k=2, m=m, seed=0)
        size = math.floor(ell * math.log(units * n))
        oracle = find_dependency_exhaustive(inst, size)
        assert oracle is not None
        found = find_dependency_kikuchi(inst, ell, walk_budget=2)
        assert found is not None
        self.assertTrue(verify_dependency(inst, found))

    def test_odd_arity(self) -> None:
        inst = _vectors(F2, 6, 3, ODD_CROSS)
        dep = find_dependency_kikuchi(inst, 1, walk_budget=2)
        assert dep is not None
        self.assertEqual(dep.terms, [(0, 1), (1, 1), (2, 1), (3, 1)])

    def test_rejects(self) -> None:
        inst = _vectors(F3, 4, 2, [{0: 1, 1: 1}, {0: 2, 1: 2}])
        with self.assertRaises(ValidationError):
            find_dependency_kikuchi(inst, 1, walk_budget=1)
        with self.assertRaises(ValidationError):
            find_dependency_kikuchi(inst, 4, walk_budget=2)
        z4 = _vectors(GroupSpec.parse("zm=4"), 4, 2, [{0: 1, 1: 1}])
        with self.assertRaises(DomainMismatchError):
            find_dependency_kikuchi(z4, 1, walk_budget=2)

    def test_modes(self) -> None:
        inst = _vectors(F3, 4, 2, [{0: 1, 1: 1}, {2: 1, 3: 1}, {0: 2, 1: 2}])
        for mode in SearchMode:
            with self.subTest(mode=mode.value):
                dep = find_dependency(inst, mode, 2)
                assert dep is not None
                self.assertEqual(dep.positions, [0, 2])
        with self.assertRaises(ValueError):
            find_dependency(inst, "guess", 2)


class TestVectorDecompose(unittest.TestCase):
    def test_thresholds(self) -> None:
        self.assertEqual(vector_thresholds(6, 3, 1, 1), {1: 3, 2: 2})
        self.assertEqual(vector_thresholds(8, 4, 2, 2), {1: 8, 2: 2, 3: 2})

    def test_levels_and_garbage(self) -> None:
        inst = _vectors(F2, 6, 3, [*ODD_CROSS, {0: 1, 2: 1, 4: 1}])
        parts = vector_decompose(inst, 1)
        self.assertEqual([d.t for d in parts], [2, 1, 0])
        self.assertEqual(parts[0].size, 4)
        self.assertEqual(parts[2].size, 1)
        seen = sorted(m.position for d in parts for b in d.buckets for m in b.members)
        self.assertEqual(seen, list(range(5)))

    def test_rejects(self) -> None:
        with self.assertRaises(ValidationError):
            vector_decompose(_vectors(F2, 6, 3, [{0: 1, 1: 1}]), 1)
        with self.assertRaises(DomainMismatchError):
            vector_decompose(_vectors(GroupSpec.parse("zm=4"), 6, 3, [{0: 1, 1: 1, 2: 1}]), 1)
