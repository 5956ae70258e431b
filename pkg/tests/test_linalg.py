from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leibniz_ts.linalg import (GF, QQ, FieldMismatch, Matrix, Subspace, det, einsum, image_basis, inverse,
                               kernel_basis, parse_field, rank, rref, solve)
from oracles import dense_rank

small = st.integers(-3, 3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rref_small_example():
    m = Matrix.from_rows(QQ, [[1, 2], [2, 4]])
    R, piv = rref(m)
    assert R.to_lists() == [[1, 2], [0, 0]]
    assert piv == [0]
    assert kernel_basis(m) == [(-2, 1)]
    assert image_basis(m) == [(1, 2)]


def test_solve_sets_free_variables_to_zero():
    assert solve(Matrix.from_rows(QQ, [[1, 1]]), [3]) == (3, 0)
    assert solve(Matrix.from_rows(QQ, [[1, 1], [1, 1]]), [1, 2]) is None


def test_fractions_stay_exact():
    m = Matrix.from_rows(QQ, [[3, 1], [1, 3]])
    inv = inverse(m)
    assert inv.to_lists() == [[Fraction(3, 8), Fraction(-1, 8)], [Fraction(-1, 8), Fraction(3, 8)]]
    assert det(m) == 8


def test_prime_field_arithmetic():
    F = GF(5)
    m = Matrix.from_rows(F, [[2, 1], [1, 3]])
    assert det(m) == 0
    assert rank(m) == 1
    assert (m @ Matrix.from_rows(F, [[1], [3]])).to_lists() == [[0], [0]]
    assert F("1/2") == 3
    with pytest.raises(FieldMismatch):
        F("1/5")


def test_parse_field():
    assert parse_field("Q") is QQ
    assert parse_field("Fp:7") == GF(7)
    with pytest.raises(ValueError):
        parse_field("Fp:8")


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        Matrix.identity(QQ, 2) + Matrix.identity(GF(3), 2)


@given(matrices())
def test_rank_matches_textbook_elimination(rows):
    assert rank(Matrix.from_rows(QQ, rows)) == dense_rank(rows)


@given(matrices(), st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_matches_textbook_elimination(rows, p):
    assert rank(Matrix.from_rows(GF(p), rows)) == dense_rank(rows, p)


@given(matrices())
def test_rank_nullity_and_kernel(rows):
    m = Matrix.from_rows(QQ, rows)
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.cols
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_consistent_systems(rows, x):
    m = Matrix.from_rows(QQ, rows)
    x = x[:m.cols]
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None and m.apply(y) == b


@given(matrices(4, 4))
def test_inverse_is_two_sided(rows):
    n = min(len(rows), len(rows[0]))
    m = Matrix.from_rows(QQ, [r[:n] for r in rows[:n]])
    inv = inverse(m)
    if det(m) == 0:
        assert inv is None
    else:
        assert m @ inv == Matrix.identity(QQ, n) == inv @ m


@given(matrices(4, 5), matrices(4, 5))
def test_subspace_lattice(a, b):
    n = 5
    A = Subspace(QQ, n, [r + [0] * (n - len(r)) for r in a])
    B = Subspace(QQ, n, [r + [0] * (n - len(r)) for r in b])
    S, I = A + B, A & B
    assert A <= S and B <= S and I <= A and I <= B
    assert S.dim + I.dim == A.dim + B.dim
    assert A.annihilator().annihilator() == A


def _exact_tensor(draw_vals, shape):
    arr = np.empty(shape, dtype=object)
    flat = arr.reshape(-1)
    for i, (p, q) in enumerate(draw_vals[:flat.size]):
        flat[i] = QQ(Fraction(p, q))
    return arr


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(1, 4)), min_size=81 + 27 + 9, max_size=81 + 27 + 9),
       st.sampled_from(["ijkl,lm->ijkm", "acl,lbs->abcs", "i,ij,j->", "ai,bj,abc,kc->ijk", "ijkl->lkji"]))
def test_exact_einsum_matches_object_einsum(vals, spec):
    shapes = {"ijkl,lm->ijkm": [(3, 3, 3, 3), (3, 3)], "acl,lbs->abcs": [(3, 3, 3), (3, 3, 3)],
              "i,ij,j->": [(3,), (3, 3), (3,)], "ai,bj,abc,kc->ijk": [(3, 3), (3, 3), (3, 3, 3), (3, 3)],
              "ijkl->lkji": [(3, 3, 3, 3)]}[spec]
    ops, pos = [], 0
    for s in shapes:
        size = int(np.prod(s))
        ops.append(_exact_tensor(vals[pos:pos + size], s))
        pos = (pos + size) % 27
    got, want = einsum(spec, *ops), np.einsum(spec, *ops)
    assert np.shape(got) == np.shape(want)
    assert np.all(np.asarray(got) == np.asarray(want))


def test_exact_einsum_big_integers():
    big = np.array([10 ** 30, 1], dtype=object)
    assert einsum("i,i->", big, big) == 10 ** 60 + 1
