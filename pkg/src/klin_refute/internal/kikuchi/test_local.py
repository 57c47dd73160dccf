import collections
import unittest

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import SparseVec, gen_random
from klin_refute.internal.models import ValidationError

from .build import OddBucket, build_even_field, build_odd
from .local import local_degrees

F3 = GroupSpec.parse("p=3")


class TestLocalDegrees(unittest.TestCase):
    def test_single_pair_bucket(self) -> None:
        members = (SparseVec(4, (1, 2), (1, 1)), SparseVec(4, (2, 3), (2, 1)))
        bucket = OddBucket((0, 1), members, (0, 1))
        stats = local_degrees(build_odd([bucket], F3, 4, 3, 2, 1))
        self.assertEqual(stats.max, 1)

    def test_matches_rescan(self) -> None:
        residuals = tuple(
            SparseVec.from_mapping(5, {a: 1, b: 1}) for a, b in [(1, 2), (2, 3), (3, 4), (1, 4)]
        )
        A = build_odd([OddBucket((0, 1, 2, 3), residuals, (0, 1, 2, 0))], F3, 5, 3, 2, 1)
        partners: dict[tuple[int, int, int], set[int]] = collections.defaultdict(set)
        for r, a, b in zip(A.rows.tolist(), A.eq_a.tolist(), A.eq_b.tolist(), strict=True):
            partners[(r, a, 0)].add(b)
            partners[(r, b, 1)].add(a)
        stats = local_degrees(A)
        self.assertEqual(stats.counts, {key: len(v) for key, v in partners.items()})
        self.assertLessEqual(stats.max, 3)
        self.assertGreater(stats.max, 1)

    def test_rejects_even_matrix(self) -> None:
        A = build_even_field(gen_random(F3, n=4, k=2, m=2, seed=0), 1)
        with self.assertRaises(ValidationError):
            local_degrees(A)
