import math
import statistics
import unittest

import pytest

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import (
    Equation,
    KLinInstance,
    SparseVec,
    brute_force_val,
    clustered_lhs,
    gen_random,
    gen_semirandom,
)
from klin_refute.internal.models import (
    CertificateKind,
    DomainMismatchError,
    NoCertificateError,
    Soundness,
)

from .even import refute_even_field

F3 = GroupSpec.parse("p=3")


class TestRefuteEvenField(unittest.TestCase):
    def test_soundness_sweep(self) -> None:
        for seed in range(100):
            m = 2 + seed % 11
            inst = gen_random(F3, n=5, k=2, m=m, seed=seed)
            with self.subTest(seed=seed, m=m):
                cert = refute_even_field(inst, 1)
                val, _ = brute_force_val(inst)
                self.assertGreaterEqual(cert.raw_alg_val + 1e-6, float(val))
                self.assertGreaterEqual(cert.alg_val + 1e-6, float(val))

    def test_single_equation_is_satisfiable(self) -> None:
        inst = KLinInstance(F3, 4, 2, (Equation(SparseVec(4, (0, 1), (1, 2)), 1),))
        cert = refute_even_field(inst, 1)
        self.assertGreaterEqual(cert.raw_alg_val, 1 - 1e-6)
        self.assertAlmostEqual(cert.alg_val, 1.0)

    def test_certificate_fields(self) -> None:
        inst = gen_random(F3, n=6, k=2, m=30, seed=4)
        cert = refute_even_field(inst, 2, eps=0.25)
        self.assertEqual(cert.kind, CertificateKind.even_field)
        self.assertEqual(cert.params.ell, 2)
        self.assertEqual(cert.params.eps, 0.25)
        self.assertEqual(cert.instance_digest, inst.digest)
        self.assertEqual(cert.soundness, Soundness.exact)
        stage = cert.stage("kikuchi")
        self.assertEqual(stage.values["N"], math.comb(6, 2) * 4)
        self.assertEqual(stage.values["edges"], 30 * 2 * stage.values["delta"])
        q = 3
        expected = 1 / q + 2 * (q - 1) / q * stage.values["norm"]
        self.assertAlmostEqual(cert.raw_alg_val, expected)

    def test_rejects(self) -> None:
        with self.assertRaises(DomainMismatchError):
            refute_even_field(gen_random(GroupSpec.parse("zm=4"), n=4, k=2, m=3, seed=0), 1)
        with self.assertRaises(NoCertificateError):
            refute_even_field(KLinInstance(F3, 4, 2, ()), 1)

    def test_median_decreases_with_density(self) -> None:
        medians = []
        for m in (20, 80, 320):
            values = [
                refute_even_field(gen_random(F3, n=8, k=2, m=m, seed=seed), 1).alg_val
                for seed in range(10)
            ]
            medians.append(statistics.median(values))
        self.assertGreater(medians[0], medians[1])
        self.assertGreater(medians[1], medians[2])


@pytest.mark.slow
class TestSemirandomEfficacy(unittest.TestCase):
    def test_clustered_supports(self) -> None:
        n, eps = 8, 0.5
        m0 = math.ceil(40 * n * math.log(2 * n) / eps**2)
        medians = []
        for m in (m0, 2 * m0, 4 * m0):
            values = []
            for seed in range(10):
                lhs = clustered_lhs(F3, n=n, k=2, m=m, width=n // 2, seed=seed)
                inst = gen_semirandom(lhs, F3, seed=100 + seed)
                values.append(refute_even_field(inst, 1, eps=eps).alg_val)
            if m == m0:
                self.assertGreaterEqual(sum(v <= 1 / 3 + eps for v in values), 8)
            medians.append(statistics.median(values))
        self.assertGreater(medians[0], medians[1])
        self.assertGreater(medians[1], medians[2])
