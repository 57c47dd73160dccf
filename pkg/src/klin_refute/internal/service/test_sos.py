import json
import pathlib
import tempfile
import unittest

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import Equation, KLinInstance, SparseVec, dump, gen_planted
from klin_refute.internal.models import Command, RunConfig, ValidationError

from .common import EXIT_INVALID
from .sos import cmd_sos

F2 = GroupSpec.parse("p=2")
F3 = GroupSpec.parse("p=3")


def sos_config(action: str, *inputs: pathlib.Path, **kwargs: object) -> RunConfig:
    return RunConfig(
        command=Command.sos,
        action=action,
        inputs=[str(p) for p in inputs],
        **kwargs,
    )


class TestSosCommand(unittest.TestCase):
    def setUp(self) -> None:
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = pathlib.Path(self._tmp.name)

    def tearDown(self) -> None:
        self._tmp.cleanup()

    def _instance(self, inst: KLinInstance) -> pathlib.Path:
        path = self.tmp / "inst.klin"
        dump(inst, path)
        return path

    def test_build_verify_boolean(self) -> None:
        inst_path = self._instance(gen_planted(F3, n=5, k=2, m=4, seed=11))
        built = cmd_sos(sos_config("build", inst_path, d=4))
        self.assertEqual(built.exit_code, 0)
        self.assertTrue(built.text.startswith("pe v1\n"))
        self.assertIn("status: complete\n", built.text)
        pe_path = self.tmp / "inst.pe"
        pe_path.write_text(built.text, encoding="utf-8")

        verified = cmd_sos(sos_config("verify", pe_path, inst_path))
        self.assertEqual(verified.exit_code, 0)
        self.assertTrue(json.loads(verified.text)["ok"])

        boolean = json.loads(cmd_sos(sos_config("boolean", pe_path, inst_path, d=2)).text)
        self.assertTrue(boolean["ok"])
        self.assertAlmostEqual(boolean["values"]["1"], 1.0, places=9)

    def test_contradiction(self) -> None:
        v = SparseVec(3, (0, 1), (1, 1))
        inst_path = self._instance(KLinInstance(F2, 3, 2, (Equation(v, 0), Equation(v, 1))))

        built = cmd_sos(sos_config("build", inst_path, d=2))
        self.assertEqual(built.exit_code, 0)
        self.assertIn("status: error\n", built.text)
        pe_path = self.tmp / "inst.pe"
        pe_path.write_text(built.text, encoding="utf-8")
        verified = cmd_sos(sos_config("verify", pe_path, inst_path))
        self.assertEqual(verified.exit_code, EXIT_INVALID)

        refutation = json.loads(cmd_sos(sos_config("refutation", inst_path, max_size=2)).text)
        self.assertFalse(refutation["ok"])
        self.assertEqual(refutation["details"]["length"], 2)
        self.assertEqual(refutation["details"]["rhs"], "1")

        expand = json.loads(cmd_sos(sos_config("expand", inst_path, ell=2, beta=0.5)).text)
        self.assertFalse(expand["ok"])
        self.assertEqual(expand["details"]["weight"], 0)

    def test_missing_flags(self) -> None:
        inst_path = self._instance(gen_planted(F3, n=4, k=2, m=2, seed=0))
        for action in ("build", "expand", "refutation"):
            with self.subTest(action):
                try:
                    cmd_sos(sos_config(action, inst_path))
                except ValidationError as e:
                    self.assertIn("is required", str(e))
                else:
                    self.fail("ran without a required flag")
