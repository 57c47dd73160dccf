import unittest

from klin_refute.internal.models import ResourceCapError, ValidationError

from .vertices import VertexSpace, rank_subset, unrank_subset


class TestSubsetRanking(unittest.TestCase):
    def test_colex_order(self) -> None:
        self.assertEqual(
            [unrank_subset(r, 4, 2) for r in range(6)],
            [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)],
        )
        self.assertEqual(rank_subset((2, 3)), 5)
        self.assertEqual(rank_subset(()), 0)


class TestVertexSpace(unittest.TestCase):
    def test_sizes(self) -> None:
        self.assertEqual(VertexSpace.even_field(4, 1, 3).size, 8)
        self.assertEqual(VertexSpace.even_group(3, 1, 4).size, 12)
        self.assertEqual(VertexSpace.odd_pair(3, 2, 3).size, 15 * 4)

    def test_rank_unrank_bijection(self) -> None:
        spaces = [
            VertexSpace.even_field(5, 2, 3),
            VertexSpace.even_group(4, 2, 4),
            VertexSpace.odd_pair(3, 2, 2),
            VertexSpace.even_field(3, 0, 5),
        ]
        for space in spaces:
            with self.subTest(space=space):
                seen = set()
                for r in range(space.size):
                    support, values = space.unrank(r)
                    self.assertEqual(len(support), space.ell)
                    self.assertEqual(list(support), sorted(set(support)))
                    self.assertTrue(all(0 <= i < space.coords for i in support))
                    if not space.zero_allowed:
                        self.assertNotIn(0, values)
                    self.assertEqual(space.rank(support, values), r)
                    seen.add((support, values))
                self.assertEqual(len(seen), space.size)

    def test_check_cap(self) -> None:
        space = VertexSpace.even_field(10, 3, 3)
        with self.assertRaises(ResourceCapError) as ctx:
            space.check_cap(100)
        self.assertEqual(ctx.exception.size, 960)
        with self.assertRaises(ValidationError):
            VertexSpace.even_field(2, 3, 3).check_cap()
