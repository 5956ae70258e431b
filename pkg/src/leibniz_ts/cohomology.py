"""Cochains, the coboundaries delta1 and delta3 = (delta3_1, delta3_2), and Z/B/H.

A k-cochain is stored as a tensor of shape ``(n,)*k + (m,)``; its coordinate
vector is the row-major (lexicographic) flattening, i.e. the index
``(i_1, ..., i_k, out)`` comes in lexicographic order.

Two independent routes exist for each coboundary: the einsum evaluators
``delta1``/``delta3`` and the loop-assembled sparse matrices.  The tests use
the former as the oracle for the latter.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .linalg import Matrix, Subspace, _Echelon, _kernel_from_rows, einsum, image_basis, kernel_basis, rank, solve
from .representation import Representation


class CocycleError(ValueError):
    """A 3-cochain that was required to be a cocycle is not one."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class Cochain:
    __slots__ = ("rep", "arity", "values")

    def __init__(self, rep: Representation, arity: int, values):
        f = rep.field
        shape = (rep.dim,) * arity + (rep.coeff_dim,)
        values = f.array(values)
        if values.shape != shape:
            raise ValueError(f"{arity}-cochain needs shape {shape}, got {values.shape}")
        values.flags.writeable = False
        self.rep = rep
        self.arity = arity
        self.values = values

    @classmethod
    def zero(cls, rep, arity):
        return cls(rep, arity, rep.field.zeros((rep.dim,) * arity + (rep.coeff_dim,)))

    @classmethod
    def from_vector(cls, rep, arity, vec):
        shape = (rep.dim,) * arity + (rep.coeff_dim,)
        arr = np.array(list(vec), dtype=object)
        if arr.size != int(np.prod(shape)):
            raise ValueError("vector length does not match cochain space")
        return cls(rep, arity, arr.reshape(shape))

    def vector(self) -> tuple:
        return tuple(self.values.reshape(-1))

    def is_zero(self) -> bool:
        return not np.any(self.values != 0)

    def _same(self, other):
        if not isinstance(other, Cochain) or other.arity != self.arity:
            raise TypeError("cochains of different degree")
        if other.rep != self.rep:
            raise ValueError("cochains over different representations")

    def __add__(self, other):
        self._same(other)
        return Cochain(self.rep, self.arity, self.rep.field.reduce(self.values + other.values))

    def __sub__(self, other):
        self._same(other)
        return Cochain(self.rep, self.arity, self.rep.field.reduce(self.values - other.values))

    def __neg__(self):
        return Cochain(self.rep, self.arity, self.rep.field.reduce(-self.values))

    def scale(self, c):
        f = self.rep.field
        return Cochain(self.rep, self.arity, f.reduce(self.values * f(c)))

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.arity == other.arity and self.rep == other.rep
                and bool(np.all(self.values == other.values)))

    def __hash__(self):
        return hash((self.arity, self.vector()))

    def __repr__(self):
        nz = int(np.count_nonzero(self.values != 0))
        return f"Cochain(arity={self.arity}, nonzero={nz})"


def _check(c: Cochain, arity: int):
    if c.arity != arity:
        raise ValueError(f"expected a {arity}-cochain, got arity {c.arity}")


def delta1(f: Cochain) -> Cochain:
    """(delta1 f)(x1,x2,x3) = r(x2,x3)f(x1) + m(x1,x3)f(x2) + l(x1,x2)f(x3) - f({x1,x2,x3})."""
    _check(f, 1)
    rho = f.rep
    if rho.dim == 0 or rho.coeff_dim == 0:
        return Cochain.zero(rho, 3)
    c, v = rho.system.constants, f.values
    out = (einsum("bcop,ap->abco", rho.r, v)
           + einsum("acop,bp->abco", rho.m, v)
           + einsum("abop,cp->abco", rho.l, v)
           - einsum("abcq,qo->abco", c, v))
    return Cochain(rho, 3, rho.field.reduce(out))


def delta3(g: Cochain) -> tuple[Cochain, Cochain]:
    """Both components of the degree-3 coboundary, evaluated on all basis 5-tuples."""
    _check(g, 3)
    rho = g.rep
    if rho.dim == 0 or rho.coeff_dim == 0:
        return Cochain.zero(rho, 5), Cochain.zero(rho, 5)
    c, v = rho.system.constants, g.values
    r, m, l = rho.r, rho.m, rho.l
    e = einsum
    first = (e("cdeq,abqo->abcdeo", c, v)
             - e("abcq,qdeo->abcdeo", c, v)
             + e("abdq,qceo->abcdeo", c, v)
             + e("abeq,qcdo->abcdeo", c, v)
             - e("abeq,qdco->abcdeo", c, v)
             + e("abop,cdep->abcdeo", l, v)
             - e("deop,abcp->abcdeo", r, v)
             + e("ceop,abdp->abcdeo", r, v)
             + e("cdop,abep->abcdeo", r, v)
             - e("dcop,abep->abcdeo", r, v))
    second = (e("bcdq,aqeo->abcdeo", c, v)
              - e("abcq,qdeo->abcdeo", c, v)
              + e("acbq,qdeo->abcdeo", c, v)
              + e("adbq,qceo->abcdeo", c, v)
              - e("adcq,qbeo->abcdeo", c, v)
              + e("aeop,bcdp->abcdeo", m, v)
              - e("deop,abcp->abcdeo", r, v)
              + e("deop,acbp->abcdeo", r, v)
              + e("ceop,adbp->abcdeo", r, v)
              - e("beop,adcp->abcdeo", r, v))
    f = rho.field
    return Cochain(rho, 5, f.reduce(first)), Cochain(rho, 5, f.reduce(second))


# ---------------------------------------------------------------------------
# matrix assembly (independent index loops)


def _nonzero_brackets(L):
    n = L.dim
    c = L.constants
    return {(a, b, k): [(q, c[a, b, k, q]) for q in range(n) if c[a, b, k, q] != 0]
            for a, b, k in itertools.product(range(n), repeat=3)}


def _nonzero_ops(t, n, m):
    return {(i, j): [(o, p, t[i, j, o, p]) for o in range(m) for p in range(m) if t[i, j, o, p] != 0]
            for i, j in itertools.product(range(n), repeat=2)}


def _delta1_rows(rho: Representation):
    n, m = rho.dim, rho.coeff_dim
    f = rho.field
    nzc = _nonzero_brackets(rho.system)
    R, M, Lo = (_nonzero_ops(t, n, m) for t in (rho.r, rho.m, rho.l))
    rows = []
    for a, b, c in itertools.product(range(n), repeat=3):
        block = [dict() for _ in range(m)]

        def add(o, col, v):
            row = block[o]
            row[col] = row.get(col, 0) + v

        for o, p, v in R[b, c]:
            add(o, a * m + p, v)
        for o, p, v in M[a, c]:
            add(o, b * m + p, v)
        for o, p, v in Lo[a, b]:
            add(o, c * m + p, v)
        for q, v in nzc[a, b, c]:
            for o in range(m):
                add(o, q * m + o, -v)
        for row in block:
            rows.append({k: x for k, x in ((k, f.reduce_scalar(x)) for k, x in row.items()) if x})
    return rows


def _delta3_rows(rho: Representation):
    n, m = rho.dim, rho.coeff_dim
    f = rho.field
    nzc = _nonzero_brackets(rho.system)
    R, M, Lo = (_nonzero_ops(t, n, m) for t in (rho.r, rho.m, rho.l))

    def col(i, j, k, p):
        return ((i * n + j) * n + k) * m + p

    first, second = [], []
    for a, b, c, d, e in itertools.product(range(n), repeat=5):
        b1 = [dict() for _ in range(m)]
        b2 = [dict() for _ in range(m)]

        def add(block, o, cl, v):
            row = block[o]
            row[cl] = row.get(cl, 0) + v

        def bracket_term(block, triple, sign, place):
            # place(q, o) -> column of g with the bracket output q inserted
            for q, v in nzc[triple]:
                for o in range(m):
                    add(block, o, place(q, o), sign * v)

        def action_term(block, ops, pair, sign, args):
            for o, p, v in ops[pair]:
                add(block, o, col(*args, p), sign * v)

        bracket_term(b1, (c, d, e), 1, lambda q, o: col(a, b, q, o))
        bracket_term(b1, (a, b, c), -1, lambda q, o: col(q, d, e, o))
        bracket_term(b1, (a, b, d), 1, lambda q, o: col(q, c, e, o))
        bracket_term(b1, (a, b, e), 1, lambda q, o: col(q, c, d, o))
        bracket_term(b1, (a, b, e), -1, lambda q, o: col(q, d, c, o))
        action_term(b1, Lo, (a, b), 1, (c, d, e))
        action_term(b1, R, (d, e), -1, (a, b, c))
        action_term(b1, R, (c, e), 1, (a, b, d))
        action_term(b1, R, (c, d), 1, (a, b, e))
        action_term(b1, R, (d, c), -1, (a, b, e))

        bracket_term(b2, (b, c, d), 1, lambda q, o: col(a, q, e, o))
        bracket_term(b2, (a, b, c), -1, lambda q, o: col(q, d, e, o))
        bracket_term(b2, (a, c, b), 1, lambda q, o: col(q, d, e, o))
        bracket_term(b2, (a, d, b), 1, lambda q, o: col(q, c, e, o))
        bracket_term(b2, (a, d, c), -1, lambda q, o: col(q, b, e, o))
        action_term(b2, M, (a, e), 1, (b, c, d))
        action_term(b2, R, (d, e), -1, (a, b, c))
        action_term(b2, R, (d, e), 1, (a, c, b))
        action_term(b2, R, (c, e), 1, (a, d, b))
        action_term(b2, R, (b, e), -1, (a, d, c))

        for block, out in ((b1, first), (b2, second)):
            for row in block:
                out.append({k: x for k, x in ((k, f.reduce_scalar(x)) for k, x in row.items()) if x})
    return first + second


@lru_cache(maxsize=32)
def delta1_matrix(rho: Representation) -> Matrix:
    """Matrix of delta1, shape (n^3 m) x (n m)."""
    n, m = rho.dim, rho.coeff_dim
    return Matrix._raw(rho.field, n ** 3 * m, n * m, _delta1_rows(rho))


@lru_cache(maxsize=32)
def delta3_matrix(rho: Representation) -> Matrix:
    """Matrix of delta3 with the delta3_1 block stacked over delta3_2: (2 n^5 m) x (n^3 m)."""
    n, m = rho.dim, rho.coeff_dim
    return Matrix._raw(rho.field, 2 * n ** 5 * m, n ** 3 * m, _delta3_rows(rho))


# ---------------------------------------------------------------------------
# cocycles, coboundaries, cohomology


@lru_cache(maxsize=32)
def _delta3_reduced(rho):
    mat = delta3_matrix(rho)
    ech = _Echelon(rho.field, mat.cols)
    for row in mat._data:
        if row:
            ech.add(row)
    return ech.reduced_rows()


def z1(rho: Representation) -> list[Cochain]:
    return [Cochain.from_vector(rho, 1, v) for v in kernel_basis(delta1_matrix(rho))]


def z3(rho: Representation) -> list[Cochain]:
    n, m = rho.dim, rho.coeff_dim
    vecs = _kernel_from_rows(rho.field, n ** 3 * m, _delta3_reduced(rho))
    return [Cochain.from_vector(rho, 3, v) for v in vecs]


def b3(rho: Representation) -> list[Cochain]:
    return [Cochain.from_vector(rho, 3, v) for v in image_basis(delta1_matrix(rho))]


def z3_dim(rho):
    return rho.dim ** 3 * rho.coeff_dim - len(_delta3_reduced(rho))


def h1_dim(rho: Representation) -> int:
    return rho.dim * rho.coeff_dim - rank(delta1_matrix(rho))


def h3_dim(rho: Representation) -> int:
    return z3_dim(rho) - rank(delta1_matrix(rho))


def cocycle_space(rho) -> Subspace:
    return Subspace(rho.field, rho.dim ** 3 * rho.coeff_dim, [g.vector() for g in z3(rho)])


def coboundary_space(rho) -> Subspace:
    return Subspace(rho.field, rho.dim ** 3 * rho.coeff_dim, [g.vector() for g in b3(rho)])


def is_cocycle3(g: Cochain) -> bool:
    _check(g, 3)
    d1, d2 = delta3(g)
    return d1.is_zero() and d2.is_zero()


def require_cocycle3(g: Cochain) -> None:
    d1, d2 = delta3(g)
    if not (d1.is_zero() and d2.is_zero()):
        bad = [("delta3_1", tuple(int(i) for i in idx)) for idx in np.argwhere(np.any(d1.values != 0, axis=-1))]
        bad += [("delta3_2", tuple(int(i) for i in idx)) for idx in np.argwhere(np.any(d2.values != 0, axis=-1))]
        raise CocycleError(f"not a 3-cocycle: delta3 is nonzero on {len(bad)} basis 5-tuples", (d1, d2))


def is_cocycle1(f: Cochain) -> bool:
    _check(f, 1)
    return delta1(f).is_zero()


def cohomologous(g: Cochain, g2: Cochain) -> Cochain | None:
    """A 1-cochain f with delta1 f = g2 - g, or None when the classes differ."""
    _check(g, 3)
    _check(g2, 3)
    diff = g2 - g
    x = solve(delta1_matrix(g.rep), diff.vector())
    if x is None:
        return None
    return Cochain.from_vector(g.rep, 1, x)


def summary(rho: Representation, emit_basis=False) -> dict:
    n, m = rho.dim, rho.coeff_dim
    rank1 = rank(delta1_matrix(rho))
    dz3 = z3_dim(rho)
    out = {"z1": n * m - rank1, "z3": dz3, "b3": rank1,
           "h1": n * m - rank1, "h3": dz3 - rank1}
    if emit_basis:
        out["bases"] = {"z1": z1(rho), "z3": z3(rho), "b3": b3(rho)}
    return out
