import pathlib
import tempfile
import unittest
from dataclasses import dataclass

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import dump, gen_planted, parse
from klin_refute.internal.models import (
    Command,
    DomainMismatchError,
    InstanceFormatError,
    KlinError,
    RunConfig,
)

from .generate import cmd_gen, semirandom_from_file


class TestSemirandomFromFile(unittest.TestCase):
    def setUp(self) -> None:
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = pathlib.Path(self._tmp.name)
        self.source = gen_planted(GroupSpec.parse("p=5"), n=9, k=3, m=25, seed=4)
        self.path = self.tmp / "source.klin"
        dump(self.source, self.path)

    def tearDown(self) -> None:
        self._tmp.cleanup()

    def test_keeps_lhs(self) -> None:
        inst = semirandom_from_file(str(self.path), seed=11)
        self.assertEqual(
            [eq.lhs for eq in inst.equations],
            [eq.lhs for eq in self.source.equations],
        )
        self.assertEqual((inst.n, inst.k, inst.m), (9, 3, 25))
        self.assertEqual(inst.source, "semirandom")
        again = semirandom_from_file(str(self.path), seed=11)
        self.assertEqual(inst.digest, again.digest)

    def test_cmd_gen_uses_file(self) -> None:
        out = cmd_gen(RunConfig(command=Command.gen, lhs=str(self.path), seeds=[2]))
        inst = parse(out.text)
        self.assertEqual(inst.spec.describe(), self.source.spec.describe())
        self.assertEqual(
            [eq.lhs for eq in inst.equations],
            [eq.lhs for eq in self.source.equations],
        )

    def test_rejects(self) -> None:
        @dataclass
        class TestCase:
            name: str
            text: str | None
            group: str | None
            expected: type[KlinError]

        testcases = [
            TestCase(
                "no rhs",
                "klin v1\ngroup: p=5\nn: 9\nk: 3\n\n0:1 1:2\n",
                None,
                InstanceFormatError,
            ),
            TestCase("no magic", "0:1 1:2 = 1\n", None, InstanceFormatError),
            TestCase("other group", None, "p=3", DomainMismatchError),
        ]

        for tc in testcases:
            with self.subTest(tc.name):
                path = self.path
                if tc.text is not None:
                    path = self.tmp / f"{tc.name}.klin"
                    path.write_text(tc.text, encoding="utf-8")
                with self.assertRaises(tc.expected):
                    semirandom_from_file(str(path), seed=0, group=tc.group)
