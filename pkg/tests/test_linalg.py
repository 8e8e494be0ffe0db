import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cealg import _fp
from cealg.constructions import build_example_4_1, build_standard
from cealg.field import GF, QQ
from cealg.linalg import (
    Mat,
    VectorSpace,
    _rref_python,
    conjugate_subspace,
    jordan_block_matrix,
    matrix_unit,
    nilpotent_jordan,
    partition_from_kernels,
    rank,
    rref,
    solve_kernel,
    span_echelon,
    subspace_ops,
)
from cealg.oracles import brute_rank

F3, F5 = GF(3), GF(5)


def E(n, i, j, f=QQ):
    return matrix_unit(n, i, j, f)


def random_invertible(rng, n, f):
    while True:
        m = Mat([[rng.randint(-3, 3) if not f.is_finite else rng.randrange(f.p) for _ in range(n)] for _ in range(n)], f)
        try:
            m.inverse()
            return m
        except ZeroDivisionError:
            pass


# -- kernels and ranks ------------------------------------------------------


def test_kernel_of_nilpotent_2x2():
    k = solve_kernel([[0, 1], [0, 0]], QQ)
    assert k.dim == 1 and k.basis == ((1, 0),)


def test_kernel_of_identity():
    assert solve_kernel([[1, 0, 0], [0, 1, 0], [0, 0, 1]], QQ).dim == 0


@pytest.mark.parametrize("seed", range(10))
def test_kernel_dim_matches_rank(seed):
    rng = random.Random(seed)
    rows = [[rng.randrange(5) for _ in range(4)] for _ in range(6)]
    if seed % 2:
        rows = [r[:2] + [r[0] + r[1], 2 * r[1]] for r in rows]  # force low rank
    k = solve_kernel(rows, F5, 4)
    assert k.dim == 4 - brute_rank(rows, 5)
    for v in k.basis:
        assert all(sum(a * b for a, b in zip(r, v)) % 5 == 0 for r in rows)


@settings(max_examples=60, database=None)
@given(st.lists(st.lists(st.integers(0, 2), min_size=4, max_size=4), min_size=1, max_size=6))
def test_rank_against_row_space_count(rows):
    assert rank(rows, F3) == brute_rank(rows, 3)


@settings(max_examples=60, database=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=5, max_size=5), min_size=1, max_size=6))
def test_rational_rank_paths_agree(rows):
    reduced, pivots = _rref_python([[Fraction(x) for x in r] for r in rows], QQ)
    assert rank(rows, QQ) == len(pivots)


@settings(max_examples=60, database=None)
@given(st.lists(st.lists(st.integers(0, 6), min_size=6, max_size=6), min_size=1, max_size=8))
def test_numpy_and_python_rref_agree(rows):
    fast, fp = _fp.rref_mod_p(np.array(rows, dtype=np.int64), 7)
    slow, sp = _rref_python(rows, GF(7))
    assert fp == sp
    assert [list(map(int, r)) for r in fast[: len(fp)]] == [list(r) for r in slow[: len(sp)]]


def test_batched_rank_matches_scalar_rank():
    rng = np.random.default_rng(0)
    a = rng.integers(0, 5, size=(50, 4, 6))
    a[::3, 2] = (a[::3, 0] + a[::3, 1]) % 5
    ranks = _fp.batched_rank_mod_p(a, 5)
    assert list(ranks) == [rank(m.tolist(), F5) for m in a]


# -- spans ----------------------------------------------------------------


def test_span_collapses_multiples():
    assert span_echelon([E(3, 1, 2), E(3, 1, 2).scale(2)]).dim == 1


def test_span_dependent_triple():
    assert span_echelon([E(3, 1, 2), E(3, 2, 3), E(3, 1, 2) + E(3, 2, 3)]).dim == 2


def test_span_of_twenty_random_matrices():
    rng = random.Random(3)
    mats = [Mat([[rng.randrange(5) for _ in range(4)] for _ in range(4)], F5) for _ in range(20)]
    assert span_echelon(mats).dim == rank([m.flat() for m in mats], F5)


def test_span_needs_shape_when_empty():
    with pytest.raises(ValueError):
        span_echelon([])
    assert span_echelon([], n=2, field=QQ).dim == 0


def test_flattening_is_row_major():
    assert E(3, 2, 3).flat().index(1) == 1 * 3 + 2


def test_subspace_ops_nested():
    a, b = span_echelon([E(3, 1, 2)]), span_echelon([E(3, 1, 2), E(3, 1, 3)])
    ops = subspace_ops(a, b)
    assert ops.intersection == a and ops.sum == b and ops.a_in_b and not ops.b_in_a and not ops.equals


def test_subspace_ops_disjoint():
    assert subspace_ops(span_echelon([E(3, 1, 2)]), span_echelon([E(3, 2, 3)])).intersection.dim == 0


@pytest.mark.parametrize("seed", range(20))
def test_modular_law_in_strict_upper_4x4(seed):
    rng = random.Random(seed)
    amb = build_standard("strict", 4, F3)

    def rand_space():
        return span_echelon([amb.element([rng.randrange(3) for _ in range(6)]) for _ in range(rng.randint(1, 4))])

    a, b = rand_space(), rand_space()
    assert (a + b).dim + (a & b).dim == a.dim + b.dim
    assert (a & b).is_subspace_of(a) and a.is_subspace_of(a + b)


@settings(max_examples=40, database=None)
@given(st.integers(0, 10**6))
def test_rref_is_canonical(seed):
    rng = random.Random(seed)
    base = [Mat([[rng.randrange(3) for _ in range(3)] for _ in range(3)], F3) for _ in range(3)]
    s = span_echelon(base)
    # a different basis of the same space: random invertible recombination plus a redundant vector
    mix = [sum((b.scale(rng.randrange(3)) for b in base), Mat.zero(3, F3)) for _ in range(4)]
    t = span_echelon(base + mix)
    assert t == s and t.basis == s.basis


def test_annihilator_cuts_out_the_space():
    v = VectorSpace([[1, 2, 0, 1], [0, 1, 1, 1]], F5, 4)
    ann = v.annihilator()
    assert ann.dim == 2
    assert all(sum(a * b for a, b in zip(x, y)) % 5 == 0 for x in ann.basis for y in v.basis)


# -- matrices -------------------------------------------------------------


def test_inverse_and_powers():
    m = Mat([[2, 1], [1, 1]], QQ)
    assert m @ m.inverse() == Mat.identity(2, QQ)
    assert m ** -2 == (m @ m).inverse()
    with pytest.raises(ZeroDivisionError):
        Mat([[1, 2], [2, 4]], QQ).inverse()


def test_sparse_product_matches_definition():
    rng = random.Random(1)
    for f in (QQ, F5):
        a = Mat([[rng.randint(-2, 2) for _ in range(4)] for _ in range(4)], f)
        b = Mat([[rng.randint(-2, 2) for _ in range(4)] for _ in range(4)], f)
        expected = [[sum(a.entry(i, k) * b.entry(k, j) for k in range(1, 5)) for j in range(1, 5)] for i in range(1, 5)]
        assert a @ b == Mat(expected, f)


# -- Jordan forms ---------------------------------------------------------


def test_jordan_of_single_block():
    a = E(3, 1, 2) + E(3, 2, 3)
    jd = nilpotent_jordan(a)
    assert jd.partition == (3,)
    assert jd.P.inverse() @ a @ jd.P == jordan_block_matrix((3,), QQ)


def test_jordan_of_e13():
    assert nilpotent_jordan(E(3, 1, 3)).partition == (2, 1)


def test_jordan_full_superdiagonal():
    rng = random.Random(5)
    rows = [[0] * 5 for _ in range(5)]
    for i in range(5):
        for j in range(i + 1, 5):
            rows[i][j] = rng.randint(1, 4) if j == i + 1 else rng.randint(-4, 4)
    a = Mat(rows, QQ)
    assert not (a**4).is_zero()
    assert nilpotent_jordan(a).partition == (5,)


def test_jordan_rejects_non_nilpotent():
    with pytest.raises(ValueError):
        nilpotent_jordan(Mat.identity(2, QQ))


def test_zero_matrix_partition():
    assert nilpotent_jordan(Mat.zero(3, F5)).partition == (1, 1, 1)


@pytest.mark.parametrize("f", [QQ, F3, F5], ids=lambda f: f.label)
def test_kernel_dimensions_are_preserved(f):
    rng = random.Random(f.label)
    for _ in range(15):
        n = rng.randint(1, 6)
        t = Mat([[rng.randrange(3) if j > i else 0 for j in range(n)] for i in range(n)], f)
        s = random_invertible(rng, n, f)
        a = s @ t @ s.inverse()
        jd = nilpotent_jordan(a)
        assert jd.P.inverse() @ a @ jd.P == jd.J
        assert jd.partition == partition_from_kernels(a)
        for k in range(1, n + 1):
            ja, jj = a**k, jd.J**k
            assert rank([r for r in ja.rows], f) == rank([r for r in jj.rows], f)


# -- conjugation ----------------------------------------------------------


def test_conjugate_by_identity():
    s = span_echelon([E(3, 1, 2), E(3, 1, 3)])
    assert conjugate_subspace(s, Mat.identity(3, QQ)) == s


def test_conjugate_by_swap():
    p = Mat([[0, 1, 0], [1, 0, 0], [0, 0, 1]], QQ)
    assert conjugate_subspace(span_echelon([E(3, 1, 2)]), p) == span_echelon([E(3, 2, 1)])


def test_conjugation_round_trip_and_products():
    rng = random.Random(9)
    alg = build_example_4_1(QQ)
    p = random_invertible(rng, 7, QQ)
    there = conjugate_subspace(alg.space, p)
    assert conjugate_subspace(there, p.inverse()) == alg.space
    pinv = p.inverse()
    for _ in range(5):
        x = alg.element([rng.randint(-2, 2) for _ in range(alg.dim)])
        y = alg.element([rng.randint(-2, 2) for _ in range(alg.dim)])
        assert pinv @ (x @ y) @ p == (pinv @ x @ p) @ (pinv @ y @ p)
        assert there.contains(pinv @ x @ y @ p)
