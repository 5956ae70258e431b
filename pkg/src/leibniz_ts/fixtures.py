"""Small named systems used by the tests, the acceptance suite and the CLI."""
from __future__ import annotations

import itertools
import random
from functools import lru_cache

import numpy as np

from .core import TripleSystem, from_leibniz_algebra, is_leibniz_algebra
from .linalg import Matrix, QQ, det, einsum, inverse


def two_dim(field=QQ) -> TripleSystem:
    """{x,y,y} = {y,y,y} = x."""
    return TripleSystem.from_brackets(field, 2, {(0, 1, 1): {0: 1}, (1, 1, 1): {0: 1}}, ["x", "y"])


def two_dim_theta(field=QQ):
    """theta(x,y,y) = theta(y,y,y) = x* + y*, as an n x n x n x 2 array."""
    t = field.zeros((2, 2, 2, 2))
    t[0, 1, 1] = [field(1), field(1)]
    t[1, 1, 1] = [field(1), field(1)]
    return t


def sl2_product(field=QQ):
    """[h,e]=2e, [h,f]=-2f, [e,f]=h with antisymmetry; basis (h, e, f)."""
    p = field.zeros((3, 3, 3))
    for (i, j, k), v in {(0, 1, 1): 2, (0, 2, 2): -2, (1, 2, 0): 1}.items():
        p[i, j, k] = field(v)
        p[j, i, k] = field(-v)
    return p


def affine_line_product(field=QQ):
    """Two-dimensional non-abelian Lie algebra [x,y] = y."""
    p = field.zeros((2, 2, 2))
    p[0, 1, 1] = field(1)
    p[1, 0, 1] = field(-1)
    return p


@lru_cache(maxsize=None)
def _two_dim_leibniz_pool(p=None):
    """All 2-dim right Leibniz products with entries in {-1,0,1} whose triple system is non-abelian."""
    field = QQ
    out = []
    for vals in itertools.product((-1, 0, 1), repeat=8):
        prod = field.array(np.array(vals, dtype=object).reshape(2, 2, 2))
        if not is_leibniz_algebra(field, prod):
            continue
        c = einsum("abl,lcs->abcs", prod, prod)
        if np.any(c != 0):
            out.append(vals)
    return tuple(out)


def leibniz_pool():
    """Products (as nested lists) of small Leibniz algebras: the 2-dim pool plus sl2."""
    pool = [np.array(v, dtype=object).reshape(2, 2, 2) for v in _two_dim_leibniz_pool()]
    pool.append(sl2_product())
    return pool


def _random_invertible(rng, n, field):
    while True:
        P = Matrix.from_rows(field, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)], n)
        if det(P) != 0:
            return P


def change_basis_product(field, prod, P: Matrix):
    """Product written in the basis given by the columns of P."""
    Pa = P.to_array()
    Qa = inverse(P).to_array()
    return field.reduce(einsum("ai,bj,abc,kc->ijk", Pa, Pa, field.array(prod), Qa))


def direct_sum_product(field, p1, p2):
    n1, n2 = p1.shape[0], p2.shape[0]
    p = field.zeros((n1 + n2,) * 3)
    p[:n1, :n1, :n1] = p1
    p[n1:, n1:, n1:] = p2
    return p


def random_leibniz_algebra(rng: random.Random, field=QQ, max_dim=3):
    """A random small Leibniz algebra: a pool member, maybe plus a 1-dim abelian summand, in a random basis."""
    pool = leibniz_pool()
    while True:
        prod = field.array(pool[rng.randrange(len(pool))])
        if prod.shape[0] < max_dim and rng.random() < 0.5:
            prod = direct_sum_product(field, prod, field.zeros((1, 1, 1)))
        P = _random_invertible(rng, prod.shape[0], field)
        prod = change_basis_product(field, prod, P)
        if is_leibniz_algebra(field, prod):
            return prod


def random_leibniz_systems(count, seed=0, field=QQ, max_dim=3):
    rng = random.Random(seed)
    return [from_leibniz_algebra(field, random_leibniz_algebra(rng, field, max_dim)) for _ in range(count)]


def named_fixtures(field=QQ) -> dict:
    """Verified systems of dimension at most 4."""
    from .symplectic import nilpotent_tensor_system
    L2 = two_dim(field)
    out = {
        "abelian1": TripleSystem.abelian(field, 1),
        "abelian2": TripleSystem.abelian(field, 2),
        "two_dim": L2,
        "affine_line": from_leibniz_algebra(field, affine_line_product(field)),
        "sl2": from_leibniz_algebra(field, sl2_product(field)),
        "two_dim_t3": nilpotent_tensor_system(L2, 3),
    }
    for i, L in enumerate(random_leibniz_systems(4, seed=7, field=field)):
        out[f"leibniz{i}"] = L
    return out
