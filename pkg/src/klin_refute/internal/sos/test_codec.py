import unittest
from dataclasses import dataclass

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import Equation, KLinInstance, SparseVec, gen_planted
from klin_refute.internal.models import InstanceFormatError

from .codec import dump_pe, parse_pe
from .pseudo import PEStatus, build_max_entropy

F3 = GroupSpec.parse("p=3")
GF4 = GroupSpec.parse("gf p=2 m=2")


class TestCodec(unittest.TestCase):
    def test_complete_dump(self) -> None:
        for spec in (F3, GF4):
            inst = gen_planted(spec, n=5, k=2, m=3, seed=7)
            pe = build_max_entropy(inst, 3)
            with self.subTest(spec=spec.describe()):
                text = dump_pe(pe)
                self.assertTrue(text.startswith(f"pe v1\nfield: {spec.describe()}\n"))
                self.assertIn("\n- => 0\n", text)
                parsed = parse_pe(text)
                self.assertEqual(parsed.entries, pe.entries)
                self.assertEqual((parsed.n, parsed.degree), (5, 3))
                self.assertEqual(parsed.status, PEStatus.complete)
                self.assertEqual(dump_pe(parsed), text)

    def test_error_dump_keeps_conflict(self) -> None:
        v = SparseVec(3, (0, 1), (1, 2))
        pe = build_max_entropy(KLinInstance(F3, 3, 2, (Equation(v, 0), Equation(v, 1))), 2)
        parsed = parse_pe(dump_pe(pe))
        self.assertEqual(parsed.status, PEStatus.error)
        self.assertEqual(parsed.conflict, pe.conflict)

    def test_rejects(self) -> None:
        head = "pe v1\nfield: p=3\nn: 4\nd: 2\nstatus: complete\n"

        @dataclass
        class TestCase:
            name: str
            text: str
            line: int

        testcases = [
            TestCase("magic", "klin v1\n", 1),
            TestCase("missing header", "pe v1\nfield: p=3\nn: 4\n- => 0\n", 4),
            TestCase(
                "group domain",
                "pe v1\nfield: zm=4\nn: 4\nd: 2\nstatus: complete\n- => 0\n",
                2,
            ),
            TestCase("no arrow", head + "0:1 1:1\n", 6),
            TestCase("exponent range", head + "0:1 => 3\n", 6),
            TestCase("too heavy", head + "0:1 1:1 2:1 => 0\n", 6),
            TestCase("repeated", head + "0:1 => 0\n0:1 => 1\n", 7),
            TestCase("bad term", head + "0:5 => 0\n", 6),
            TestCase("bad status", "pe v1\nfield: p=3\nn: 4\nd: 2\nstatus: maybe\n- => 0\n", 6),
        ]
        for tc in testcases:
            with self.subTest(tc.name):
                try:
                    parse_pe(tc.text)
                except InstanceFormatError as e:
                    self.assertEqual(e.line, tc.line)
                else:
                    self.fail("parsed without error")
