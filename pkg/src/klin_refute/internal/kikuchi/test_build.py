import itertools
import unittest

import numpy as np

from klin_refute.internal.algebra import GroupSpec, representative_group
from klin_refute.internal.instance import (
    Equation,
    KLinInstance,
    SparseVec,
    gen_random,
    phi_advantage,
)
from klin_refute.internal.models import (
    DomainMismatchError,
    NoCertificateError,
    ResourceCapError,
    ValidationError,
)

from .build import (
    OddBucket,
    build_even_field,
    build_even_group,
    build_group_rows,
    build_odd,
    even_delta,
    group_rows,
    odd_delta,
)
from .matrix import KikuchiMatrix
from .vertices import VertexSpace

F2, F3 = GroupSpec.parse("p=2"), GroupSpec.parse("p=3")
Z4 = GroupSpec.parse("zm=4")


def _dense(space: VertexSpace, r: int) -> tuple[np.ndarray, frozenset[int]]:
    support, values = space.unrank(r)
    x = np.zeros(space.coords, dtype=np.int64)
    x[list(support)] = values
    return x, frozenset(support)


def _rank_dense(space: VertexSpace, x: np.ndarray, support: frozenset[int]) -> int:
    s = tuple(sorted(support))
    return space.rank(s, tuple(int(x[i]) for i in s))


def _oracle_edges(
    space: VertexSpace,
    spec: GroupSpec,
    positions: tuple[int, ...],
    shift: np.ndarray,
    splits: set[int] | None = None,
) -> set[tuple[int, int]]:
    """All ordered pairs with ``U - V = shift`` and ``supp(U) ⊕ supp(V) = positions``."""
    pos = frozenset(positions)
    out = set()
    for r in range(space.size):
        u, su = _dense(space, r)
        v = spec.add_table[u, spec.neg_table[shift]]
        if space.zero_allowed:
            sv = su ^ pos
            if any(v[i] != 0 for i in range(space.coords) if i not in sv):
                continue
        else:
            sv = frozenset(int(i) for i in np.flatnonzero(v))
            if su ^ sv != pos:
                continue
        if len(sv) != space.ell:
            continue
        if splits is not None and len(su & frozenset(i for i in pos if i < space.n)) not in splits:
            continue
        out.add((r, _rank_dense(space, v, sv)))
    return out


def _label_edges(
    A: KikuchiMatrix,
    label: int,
    beta: int,
    partner: int = -1,
) -> set[tuple[int, int]]:
    keep = (A.eq_a == label) & (A.betas == beta) & (A.eq_b == partner)
    return set(zip(A.rows[keep].tolist(), A.cols[keep].tolist(), strict=True))


def _inst(spec: GroupSpec, n: int, k: int, rows: list[tuple[dict[int, int], int]]) -> KLinInstance:
    eqs = tuple(Equation(SparseVec.from_mapping(n, lhs), rhs) for lhs, rhs in rows)
    return KLinInstance(spec, n, k, eqs)


class TestEvenField(unittest.TestCase):
    def test_tiny_example(self) -> None:
        inst = _inst(F3, 4, 2, [({0: 1, 1: 1}, 0)])
        A = build_even_field(inst, 1)
        space = A.space
        e0, e1 = space.rank((0,), (1,)), space.rank((1,), (1,))
        two_e0, two_e1 = space.rank((0,), (2,)), space.rank((1,), (2,))
        self.assertEqual(A.delta, 2)
        self.assertEqual(_label_edges(A, 0, 1), {(e0, two_e1), (e1, two_e0)})
        stats = A.degrees()
        self.assertEqual(A.size, 8)
        self.assertEqual(stats.total, 4)
        self.assertEqual(int(stats.D.sum()), 4)
        self.assertAlmostEqual(stats.d, 0.5)
        self.assertTrue(np.all(stats.gamma > 0))

    def test_delta_matches_enumeration(self) -> None:
        cases = [(F3, 4, 2, 1), (F3, 4, 2, 2), (F2, 5, 2, 2), (F3, 5, 4, 2), (F3, 5, 4, 3)]
        for spec, n, k, ell in cases:
            inst = gen_random(spec, n=n, k=k, m=3, seed=n + k + ell)
            A = build_even_field(inst, ell)
            self.assertEqual(A.delta, even_delta(k, n, ell, spec.order - 1))
            for label, eq in enumerate(inst.equations):
                for beta in spec.units:
                    beta = int(beta)
                    shift = np.zeros(n, dtype=np.int64)
                    shift[list(eq.lhs.indices)] = spec.mul_table[beta, list(eq.lhs.values)]
                    with self.subTest(spec=spec, n=n, k=k, ell=ell, label=label, beta=beta):
                        expected = _oracle_edges(A.space, spec, eq.lhs.indices, shift)
                        self.assertEqual(len(expected), A.delta)
                        self.assertEqual(_label_edges(A, label, beta), expected)

    def test_degree_total(self) -> None:
        inst = gen_random(F3, n=6, k=2, m=7, seed=2)
        A = build_even_field(inst, 2)
        self.assertEqual(int(A.degrees().D.sum()), inst.m * 2 * A.delta)

    def test_field_uniqueness_and_hermitian(self) -> None:
        for seed in range(3):
            inst = gen_random(GroupSpec.parse("p=5"), n=5, k=2, m=6, seed=seed)
            A = build_even_field(inst, 2)
            with self.subTest(seed=seed):
                self.assertTrue(A.is_hermitian())
                self.assertEqual(set(A.label_multiplicity().values()), {1})

    def test_quadratic_form_identity(self) -> None:
        inst = gen_random(F3, n=4, k=2, m=3, seed=0)
        A = build_even_field(inst, 1)
        norm = inst.m * F3.order * A.delta
        for x in itertools.product(range(3), repeat=4):
            self.assertLessEqual(abs(A.quadratic_form(x) / norm - phi_advantage(inst, x)), 1e-9)

    def test_extension_field_identity(self) -> None:
        gf4 = GroupSpec.parse("gf p=2 m=2")
        inst = gen_random(gf4, n=3, k=2, m=3, seed=4)
        A = build_even_field(inst, 1)
        self.assertTrue(A.is_hermitian())
        norm = inst.m * gf4.order * A.delta
        for x in itertools.product(range(4), repeat=3):
            self.assertLessEqual(abs(A.quadratic_form(x) / norm - phi_advantage(inst, x)), 1e-9)

    def test_rejects(self) -> None:
        with self.assertRaises(ValidationError):
            build_even_field(gen_random(F3, n=5, k=3, m=2, seed=0), 2)
        with self.assertRaises(ValidationError):
            build_even_field(gen_random(F3, n=5, k=2, m=2, seed=0), 5)
        with self.assertRaises(ResourceCapError):
            build_even_field(gen_random(F3, n=8, k=2, m=2, seed=0), 3, cap=100)
        with self.assertRaises(DomainMismatchError):
            build_even_field(gen_random(Z4, n=4, k=2, m=2, seed=0), 1)
        inst = _inst(F3, 4, 2, [({0: 1}, 0)])
        with self.assertRaises(ValidationError):
            build_even_field(inst, 1)

    def test_empty_instance(self) -> None:
        inst = gen_random(F3, n=4, k=2, m=2, seed=0).with_equations([])
        A = build_even_field(inst, 1)
        self.assertEqual(A.quadratic_form([0, 1, 2, 0]), 0)
        with self.assertRaises(NoCertificateError):
            A.degrees()


class TestEvenGroup(unittest.TestCase):
    def test_vertex_count(self) -> None:
        inst = gen_random(Z4, n=3, k=2, m=2, seed=0)
        A = build_even_group(inst, 1)
        self.assertEqual(A.size, 12)
        self.assertEqual(A.delta, 2 * 1 * 1)
        self.assertEqual(int(A.degrees().D.sum()), inst.m * 3 * A.delta)

    def test_delta_matches_enumeration(self) -> None:
        z6 = GroupSpec.parse("zm=6")
        z22 = GroupSpec.parse("zm=2,2")
        for spec, n, k, ell in [(Z4, 3, 2, 1), (Z4, 4, 2, 2), (z6, 4, 2, 1), (z22, 4, 2, 2)]:
            inst = gen_random(spec, n=n, k=k, m=2, seed=ell)
            A = build_even_group(inst, ell)
            self.assertEqual(A.delta, even_delta(k, n, ell, spec.order))
            for label, eq in enumerate(inst.equations):
                for beta in spec.units:
                    beta = int(beta)
                    shift = np.zeros(n, dtype=np.int64)
                    shift[list(eq.lhs.indices)] = spec.mul_table[beta, list(eq.lhs.values)]
                    with self.subTest(spec=spec.describe(), ell=ell, label=label, beta=beta):
                        expected = _oracle_edges(A.space, spec, eq.lhs.indices, shift)
                        self.assertEqual(len(expected), A.delta)
                        self.assertEqual(_label_edges(A, label, beta), expected)

    def test_multiplicity_is_inverse_thinness(self) -> None:
        for text in ["zm=4", "zm=6", "zm=2,4"]:
            spec = GroupSpec.parse(text)
            inst = _inst(
                spec,
                4,
                2,
                [
                    ({0: spec.encode(2) if text != "zm=2,4" else spec.encode((1, 2)), 2: 1}, 0),
                    ({1: 1, 3: 1}, 1),
                ],
            )
            A = build_even_group(inst, 2)
            for (r, label), count in A.label_multiplicity().items():
                support, values = A.space.unrank(r)
                u = dict(zip(support, values, strict=True))
                lhs = inst.equations[label].lhs
                matched = [i for i in lhs.indices if i in u]
                v_half = SparseVec.from_mapping(4, {i: lhs.get(i) for i in matched})
                u_half = [u[i] for i in matched]
                expected = spec.order // representative_group(v_half, spec).order
                if not any(u_half):
                    expected -= 1
                with self.subTest(text=text, row=r, label=label):
                    self.assertEqual(count, expected)

    def test_hermitian_and_identity(self) -> None:
        inst = gen_random(Z4, n=3, k=2, m=3, seed=5)
        A = build_even_group(inst, 1)
        self.assertTrue(A.is_hermitian())
        norm = inst.m * Z4.order * A.delta
        for x in itertools.product(range(4), repeat=3):
            self.assertLessEqual(abs(A.quadratic_form(x) / norm - phi_advantage(inst, x)), 1e-9)

    def test_padding(self) -> None:
        inst = _inst(Z4, 4, 3, [({1: 1, 2: 2, 3: 1}, 0), ({0: 3}, 1)])
        rows = group_rows(inst)
        self.assertEqual(rows[0].positions, (0, 1, 2, 3))
        self.assertEqual(rows[0].values, (0, 1, 2, 1))
        self.assertEqual(rows[1].positions, (0, 1))
        with self.assertRaises(ValidationError):
            build_group_rows(rows, Z4, 4, 2)
        A = build_group_rows(rows[:1], Z4, 4, 2)
        self.assertTrue(A.is_hermitian())
        self.assertEqual(A.delta, even_delta(4, 4, 2, 4))


def _odd_fixture() -> tuple[list[OddBucket], list[tuple[SparseVec, int]]]:
    """Members e0 + r_j of one t=1 bucket over F_3 with n=4, k=3."""
    residuals = [
        SparseVec(4, (1, 2), (1, 2)),
        SparseVec(4, (2, 3), (1, 1)),
        SparseVec(4, (1, 3), (2, 1)),
    ]
    rhs = (0, 1, 2)
    bucket = OddBucket(members=(0, 1, 2), residuals=tuple(residuals), rhs=rhs)
    return [bucket], list(zip(residuals, rhs, strict=True))


class TestOdd(unittest.TestCase):
    def test_delta_matches_enumeration(self) -> None:
        for n, k, t, ell in [(3, 3, 2, 1), (3, 3, 2, 2), (4, 3, 1, 2), (4, 3, 1, 3)]:
            w = k - t
            residuals = [
                SparseVec.from_mapping(n, {i: 1 for i in range(1, 1 + w)}),
                SparseVec.from_mapping(n, {i: 2 for i in range(n - w, n)}),
            ]
            bucket = OddBucket(members=(0, 1), residuals=tuple(residuals), rhs=(1, 0))
            A = build_odd([bucket], F3, n, k, ell, t)
            self.assertEqual(A.delta, odd_delta(w, n, ell, 2))
            splits = {w // 2, w - w // 2}
            for (j, jp), beta in itertools.product([(0, 1), (1, 0)], [1, 2]):
                first, second = residuals[j], residuals[jp]
                shift = np.zeros(2 * n, dtype=np.int64)
                shift[list(first.indices)] = F3.mul_table[beta, list(first.values)]
                shift[[i + n for i in second.indices]] = F3.neg_table[
                    F3.mul_table[beta, list(second.values)]
                ]
                positions = (*first.indices, *(i + n for i in second.indices))
                with self.subTest(n=n, k=k, t=t, ell=ell, pair=(j, jp), beta=beta):
                    expected = _oracle_edges(A.space, F3, positions, shift, splits)
                    self.assertEqual(len(expected), A.delta)
                    self.assertEqual(_label_edges(A, j, beta, jp), expected)

    def test_both_orientations_when_odd_width(self) -> None:
        residuals = (SparseVec(3, (1,), (1,)), SparseVec(3, (2,), (1,)))
        A = build_odd([OddBucket((0, 1), residuals, (0, 0))], F2, 3, 3, 1, 2)
        self.assertEqual(A.delta, 2)
        self.assertEqual(odd_delta(1, 3, 1, 1), 2)
        keep = (A.eq_a == 0) & (A.eq_b == 1)
        first_copy = [A.space.unrank(int(r))[0][0] < 3 for r in A.rows[keep]]
        self.assertEqual(sorted(first_copy), [False, True])

    def test_phases_and_hermitian(self) -> None:
        buckets, members = _odd_fixture()
        A = build_odd(buckets, F3, 4, 3, 2, 1)
        self.assertTrue(A.is_hermitian())
        for e in range(A.nnz):
            beta = int(A.betas[e])
            bj, bjp = members[A.eq_a[e]][1], members[A.eq_b[e]][1]
            expected = (F3.mul_table[beta, bj] - F3.mul_table[beta, bjp]) % 3
            self.assertEqual(int(A.exponents[e]), expected)

    def test_quadratic_form_identity(self) -> None:
        buckets, members = _odd_fixture()
        A = build_odd(buckets, F3, 4, 3, 2, 1)
        for x in itertools.product(range(3), repeat=4):
            direct = 0j
            for (rj, bj), (rjp, bjp) in itertools.permutations(members, 2):
                for beta in (1, 2):
                    ex = (
                        beta * bj
                        - beta * bjp
                        - beta * int(np.dot(rj.dense(), x))
                        + beta * int(np.dot(rjp.dense(), x))
                    )
                    direct += np.exp(2j * np.pi * (ex % 3) / 3)
            self.assertLessEqual(abs(A.quadratic_form(x) - A.delta * direct), 1e-7)

    def test_rejects(self) -> None:
        buckets, _ = _odd_fixture()
        with self.assertRaises(ValidationError):
            build_odd(buckets, F3, 4, 3, 2, 2)
        with self.assertRaises(ValidationError):
            build_odd(buckets, F3, 4, 2, 2, 2)
        with self.assertRaises(DomainMismatchError):
            build_odd(buckets, Z4, 4, 3, 2, 1)

    def test_too_small_level_has_no_edges(self) -> None:
        buckets, _ = _odd_fixture()
        A = build_odd(buckets, F3, 4, 3, 1, 1)
        self.assertEqual(A.nnz, 0)
        self.assertEqual(A.delta, 0)
