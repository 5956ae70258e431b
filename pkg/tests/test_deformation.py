import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leibniz_ts import fixtures
from leibniz_ts.cohomology import Cochain, b3, cohomologous, delta1, delta3, is_cocycle3, z3
from leibniz_ts.core import TripleSystem, verify_axioms
from leibniz_ts.deformation import (Deformation, EquivalenceTransform, UnverifiedPrefix, apply_equivalence, e1, e2,
                                    elementary_transform, extend_one_order, identity_transform,
                                    infinitesimal_is_cocycle, null_deformation, obstruction, order_residuals,
                                    rigidity_trivialize, verify_deformation)
from leibniz_ts.linalg import GF, QQ, Matrix
from leibniz_ts.representation import adjoint
from oracles import brute_force_solvable

L2 = fixtures.two_dim()
FIX = fixtures.named_fixtures()
F3 = GF(3)


def random_tensor(field, n, rng):
    return field.array(np.array([rng.randint(-2, 2) for _ in range(n ** 4)], dtype=object).reshape((n,) * 4))


def random_adjoint_cocycle(L, rng):
    rho = adjoint(L)
    g = Cochain.zero(rho, 3)
    for b in z3(rho):
        g = g + b.scale(rng.randint(-1, 1))
    return g


@given(st.integers(0, 10 ** 6), st.sampled_from(["two_dim", "affine_line", "leibniz0", "leibniz2"]))
def test_linear_part_is_minus_delta3(seed, name):
    # E(d0, g) + E(g, d0) = -delta3 g, componentwise
    L = FIX[name]
    g = random_tensor(QQ, L.dim, random.Random(seed))
    c = L.constants
    d1, d2 = delta3(Cochain(adjoint(L), 3, g))
    assert np.array_equal(QQ.reduce(e1(c, g) + e1(g, c)), QQ.reduce(-d1.values))
    assert np.array_equal(QQ.reduce(e2(c, g) + e2(g, c)), QQ.reduce(-d2.values))


@pytest.mark.parametrize("name", sorted(FIX))
def test_order_zero_equations_are_the_identities(name):
    L = FIX[name]
    assert verify_deformation(Deformation(L, ())) == []


def test_order_zero_violations_match_the_axiom_checker():
    bad = TripleSystem.from_brackets(QQ, 2, {(0, 1, 1): {0: 1}, (1, 0, 1): {1: 1}}, unchecked=True)
    found = verify_deformation(Deformation(bad, ()))
    assert {v.identity for v in found} <= {"r=0:first", "r=0:second"}
    assert len(found) == len(verify_axioms(bad))


def test_null_deformation():
    d = null_deformation(L2, 3)
    assert d.order == 3 and d.first_nonzero() is None
    assert verify_deformation(d) == [] and infinitesimal_is_cocycle(d)
    assert rigidity_trivialize(d).is_identity()


@given(st.integers(0, 10 ** 6), st.sampled_from(["two_dim", "affine_line", "leibniz1"]))
def test_order_one_iff_cocycle(seed, name):
    L = FIX[name]
    rng = random.Random(seed)
    t = random_adjoint_cocycle(L, rng).values if rng.random() < 0.5 else random_tensor(QQ, L.dim, rng)
    d = Deformation(L, (t,))
    assert (verify_deformation(d) == []) == is_cocycle3(d.cochain(1))
    labels = {v.identity for v in verify_deformation(d)}
    assert labels <= {"r=1:first", "r=1:second"}


def test_equivalence_series_algebra():
    rng = random.Random(0)
    f = [Matrix.from_rows(QQ, [[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)], 2) for _ in range(3)]
    phi = EquivalenceTransform(tuple(f))
    psi = EquivalenceTransform(tuple(phi.inverse_series(QQ, 2, 3)[1:]))
    assert phi.compose(psi, QQ, 2, 3).is_identity()
    assert psi.compose(phi, QQ, 2, 3).is_identity()
    assert identity_transform().is_identity()


@given(st.integers(0, 10 ** 6))
def test_equivalence_keeps_deformations_valid(seed):
    rng = random.Random(seed)
    L = FIX["two_dim"]
    d = extend_one_order(Deformation(L, (random_adjoint_cocycle(L, rng).values,)))
    assert d is not None and verify_deformation(d) == []
    phi = EquivalenceTransform(tuple(Matrix.from_rows(QQ, [[rng.randint(-1, 1) for _ in range(2)]
                                                           for _ in range(2)], 2) for _ in range(2)))
    d2 = apply_equivalence(d, phi)
    assert verify_deformation(d2) == []
    back = apply_equivalence(d2, EquivalenceTransform(tuple(phi.inverse_series(QQ, 2, 2)[1:])))
    assert back == d
    assert apply_equivalence(d, identity_transform()) == d


def test_elementary_transform_subtracts_a_coboundary():
    rng = random.Random(1)
    L = FIX["leibniz1"]
    n = L.dim
    fm = Matrix.from_rows(QQ, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)], n)
    d = apply_equivalence(null_deformation(L, 2), elementary_transform(QQ, n, 2, fm))
    # f as a 1-cochain: f(e_i) = column i of the matrix
    fc = Cochain(adjoint(L), 1, QQ.array([[fm[o, i] for o in range(n)] for i in range(n)]))
    assert not np.any(d.coefficient(1) != 0)
    assert np.array_equal(QQ.reduce(d.coefficient(2)), QQ.reduce(-delta1(fc).values))


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6))
def test_rigid_system_deformations_trivialize(seed):
    # the 2-dim fixture has H^3 = 0 with adjoint coefficients
    rng = random.Random(seed)
    d = Deformation(L2, (random_adjoint_cocycle(L2, rng).values,))
    for _ in range(2):
        d = extend_one_order(d)
    phi = rigidity_trivialize(d)
    assert phi is not None
    assert apply_equivalence(d, phi).first_nonzero() is None


def test_non_trivial_class_blocks_trivialization():
    L = FIX["affine_line"]
    rho = adjoint(L)
    coboundaries = {g.vector() for g in b3(rho)}
    g = next(h for h in z3(rho) if cohomologous(Cochain.zero(rho, 3), h) is None)
    assert g.vector() not in coboundaries
    d = Deformation(L, (g.values,))
    assert verify_deformation(d) == []
    assert rigidity_trivialize(d) is None


def direct_columns(d, p):
    """Affine map d_{n+1} -> order n+1 residual, evaluated directly from E1/E2."""
    n = d.base.dim
    r = d.order + 1
    f = d.field

    def residual(term):
        a, b = order_residuals(d.extended(term), r)
        return [int(x) % p for x in np.concatenate([a.reshape(-1), b.reshape(-1)])]

    base = residual(f.zeros((n,) * 4))
    cols = []
    for idx in itertools.product(range(n), repeat=4):
        t = f.zeros((n,) * 4)
        t[idx] = 1
        cols.append([(x - y) % p for x, y in zip(residual(t), base)])
    return cols, [(-y) % p for y in base]


def prime_field_cases():
    A = TripleSystem.abelian(F3, 2)
    L = fixtures.two_dim(F3)
    # d1 is not a triple system bracket, so {d1, d1} obstructs order 2 over the abelian base
    t = F3.zeros((2,) * 4)
    t[0, 1, 1, 0] = 1
    t[1, 0, 1, 1] = 1
    rng = random.Random(4)
    return [("abelian_obstructed", Deformation(A, (t,))),
            ("two_dim", Deformation(L, (F3.reduce(random_adjoint_cocycle(L, rng).values),))),
            ("two_dim_null", null_deformation(L, 1))]


@pytest.mark.parametrize("case", prime_field_cases(), ids=lambda c: c[0])
def test_extension_agrees_with_brute_force(case):
    name, d = case
    assert verify_deformation(d) == []
    cols, target = direct_columns(d, 3)
    witness = brute_force_solvable(cols, target, 3)
    ext = extend_one_order(d)
    assert (ext is None) == (witness is None)
    if name == "abelian_obstructed":
        assert ext is None
        ob1, ob2 = obstruction(d)
        assert not (ob1.is_zero() and ob2.is_zero())
    else:
        assert verify_deformation(ext) == []


def test_obstruction_needs_a_valid_prefix():
    with pytest.raises(UnverifiedPrefix):
        obstruction(Deformation(L2, (random_tensor(QQ, 2, random.Random(0)),)))


def test_terms_are_validated():
    with pytest.raises(ValueError):
        Deformation(L2, (QQ.zeros((2, 2, 2)),))
