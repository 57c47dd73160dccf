import math
import unittest
from fractions import Fraction

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import (
    Equation,
    KLinInstance,
    SparseVec,
    brute_force_val,
    gen_random,
)
from klin_refute.internal.models import (
    Caps,
    CertificateKind,
    NoCertificateError,
    ResourceCapError,
    ValidationError,
)

from .refute import SimpleVariant, simple_constant, simple_refute, subset_buckets

F3 = GroupSpec.parse("p=3")


class TestSimpleRefute(unittest.TestCase):
    def test_full_subset_is_exact(self) -> None:
        for seed in range(10):
            inst = gen_random(F3, n=5, k=2, m=12, seed=seed)
            with self.subTest(seed=seed):
                cert = simple_refute(inst, 5)
                val, _ = brute_force_val(inst)
                self.assertEqual(Fraction(cert.stage("simple").values["exact"]), val)

    def test_soundness(self) -> None:
        for seed in range(20):
            inst = gen_random(F3, n=6, k=2, m=15, seed=seed)
            val, _ = brute_force_val(inst)
            exact_top = Fraction(simple_refute(inst, 6).stage("simple").values["exact"])
            for ell in (2, 3, 4):
                with self.subTest(seed=seed, ell=ell):
                    cert = simple_refute(inst, ell)
                    self.assertGreaterEqual(cert.raw_alg_val + 1e-9, float(val))
                    self.assertGreaterEqual(cert.raw_alg_val + 1e-9, float(exact_top))
                    self.assertLessEqual(cert.alg_val, 1.0)

    def test_mixed_weights_are_sound(self) -> None:
        eqs = (
            Equation(SparseVec(4, (0,), (1,)), 1),
            Equation(SparseVec(4, (0,), (1,)), 2),
            Equation(SparseVec(4, (0, 1), (1, 1)), 0),
            Equation(SparseVec(4, (1, 2), (1, 2)), 1),
            Equation(SparseVec(4, (2, 3), (1, 1)), 2),
        )
        inst = KLinInstance(F3, 4, 2, eqs)
        val, _ = brute_force_val(inst)
        for ell in (2, 3, 4):
            with self.subTest(ell=ell):
                self.assertGreaterEqual(simple_refute(inst, ell).raw_alg_val + 1e-9, float(val))

    def test_bucket_counts(self) -> None:
        inst = gen_random(F3, n=6, k=2, m=18, seed=3)
        for ell in (2, 3, 5):
            with self.subTest(ell=ell):
                total = sum(len(p) for _, p in subset_buckets(inst, ell))
                self.assertEqual(total, inst.m * math.comb(6 - 2, ell - 2))

    def test_semirandom_variant(self) -> None:
        inst = gen_random(F3, n=6, k=2, m=20, seed=8)
        plain = simple_refute(inst, 3)
        semi = simple_refute(inst, 3, variant="semirandom", eps=1.0)
        self.assertEqual(semi.kind, CertificateKind.simple)
        self.assertEqual(semi.params.variant, SimpleVariant.semirandom.value)
        self.assertGreaterEqual(semi.raw_alg_val + 1e-12, plain.raw_alg_val)
        stage = semi.stage("simple")
        nonempty = sum(1 for _, p in subset_buckets(inst, 3) if p)
        self.assertEqual(stage.values["solved"] + stage.values["sparse"], nonempty)
        self.assertEqual(plain.stage("simple").values["sparse"], 0)
        tight = simple_refute(inst, 3, variant="semirandom", eps=0.01)
        self.assertEqual(tight.stage("simple").values["sparse"], 0)
        self.assertEqual(tight.raw_alg_val, plain.raw_alg_val)

    def test_constant(self) -> None:
        self.assertEqual(simple_constant(6, 2, 3), Fraction(20, 6))
        self.assertEqual(simple_constant(10, 3, 3), Fraction(120, 1))

    def test_rejects(self) -> None:
        inst = gen_random(F3, n=5, k=2, m=6, seed=0)
        with self.assertRaises(ValidationError):
            simple_refute(inst, 1)
        with self.assertRaises(ValidationError):
            simple_refute(inst, 6)
        with self.assertRaises(ValueError):
            simple_refute(inst, 3, variant="adversarial")
        with self.assertRaises(ResourceCapError):
            simple_refute(inst, 5, caps=Caps(brute_force=100))
        with self.assertRaises(NoCertificateError):
            simple_refute(KLinInstance(F3, 5, 2, ()), 3)
