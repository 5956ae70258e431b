"""Leibniz triple systems given by structure constants.

``constants[i, j, k, l]`` is the coefficient of ``e_l`` in ``{e_i, e_j, e_k}``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .linalg import Field, Matrix, Subspace, einsum, kernel_basis


class AxiomError(ValueError):
    """A structure failed the identities it was required to satisfy."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


@dataclass(frozen=True)
class Violation:
    identity: str
    indices: tuple
    residual: tuple

    def as_dict(self, field: Field) -> dict:
        return {"identity": self.identity, "indices": list(self.indices),
                "residual": [field.format(x) for x in self.residual]}


class TripleSystem:
    """Finite-dimensional space with a trilinear bracket.

    Construction checks both defining identities unless ``unchecked=True``.
    """

    def __init__(self, field: Field, constants, basis_names=None, unchecked=False):
        constants = field.array(constants)
        if constants.ndim != 4 or len(set(constants.shape)) > 1:
            raise ValueError(f"structure constants must be n x n x n x n, got {constants.shape}")
        self.field = field
        self.dim = constants.shape[0]
        constants.flags.writeable = False
        self.constants = constants
        if basis_names is None:
            basis_names = [f"e{i}" for i in range(self.dim)]
        if len(basis_names) != self.dim:
            raise ValueError("basis_names length does not match the dimension")
        self.basis_names = tuple(basis_names)
        if not unchecked:
            bad = verify_axioms(self)
            if bad:
                raise AxiomError(f"{len(bad)} violations of the triple system identities", bad)

    @classmethod
    def abelian(cls, field: Field, n: int) -> "TripleSystem":
        return cls(field, field.zeros((n, n, n, n)))

    @classmethod
    def from_brackets(cls, field, n, brackets, basis_names=None, unchecked=False):
        """Build from a sparse ``{(i, j, k): {l: coeff}}`` mapping."""
        c = field.zeros((n, n, n, n))
        for (i, j, k), out in brackets.items():
            for l, v in out.items():
                c[i, j, k, l] = field.reduce_scalar(c[i, j, k, l] + field(v))
        return cls(field, c, basis_names, unchecked)

    def __eq__(self, other):
        if not isinstance(other, TripleSystem):
            return NotImplemented
        return (self.field == other.field and self.dim == other.dim
                and bool(np.all(self.constants == other.constants)))

    def __hash__(self):
        return hash((self.dim, tuple(self.constants.reshape(-1))))

    def __repr__(self):
        return f"TripleSystem(dim={self.dim}, field={self.field!r})"

    def vector(self, v):
        v = self.field.array(v)
        if v.shape != (self.dim,):
            raise ValueError(f"expected a vector of length {self.dim}, got shape {v.shape}")
        return v

    def unit(self, i):
        v = self.field.zeros(self.dim)
        v[i] = 1
        return v

    def is_abelian(self) -> bool:
        return not np.any(self.constants != 0)

    def transported(self, P: Matrix) -> "TripleSystem":
        """The same system written in the basis given by the columns of ``P``."""
        from .linalg import inverse
        Pinv = inverse(P)
        if Pinv is None:
            raise ValueError("change of basis is singular")
        f = self.field
        Pa, Qa = P.to_array(), Pinv.to_array()
        c = einsum("ai,bj,ck,abcd,ld->ijkl", Pa, Pa, Pa, self.constants, Qa)
        return TripleSystem(f, f.reduce(c), unchecked=True)


def bracket(L: TripleSystem, x, y, z) -> tuple:
    x, y, z = L.vector(x), L.vector(y), L.vector(z)
    out = einsum("i,j,k,ijkl->l", x, y, z, L.constants) if L.dim else L.field.zeros(0)
    return tuple(L.field.reduce(out))


def identity_residuals(L: TripleSystem):
    """Residual tensors (LHS - RHS) of the two identities on basis 5-tuples.

    First:  {a,b,{c,d,e}} = {{a,b,c},d,e} - {{a,b,d},c,e} - {{a,b,e},c,d} + {{a,b,e},d,c}
    Second: {a,{b,c,d},e} = {{a,b,c},d,e} - {{a,c,b},d,e} - {{a,d,b},c,e} + {{a,d,c},b,e}
    """
    c = L.constants
    f = L.field
    if L.dim == 0:
        z = f.zeros((0,) * 6)
        return z, z
    first = (einsum("cdel,abls->abcdes", c, c)
             - einsum("abcl,ldes->abcdes", c, c)
             + einsum("abdl,lces->abcdes", c, c)
             + einsum("abel,lcds->abcdes", c, c)
             - einsum("abel,ldcs->abcdes", c, c))
    second = (einsum("bcdl,ales->abcdes", c, c)
              - einsum("abcl,ldes->abcdes", c, c)
              + einsum("acbl,ldes->abcdes", c, c)
              + einsum("adbl,lces->abcdes", c, c)
              - einsum("adcl,lbes->abcdes", c, c))
    return f.reduce(first), f.reduce(second)


def _violations(name, residual):
    out = []
    nz = np.argwhere(residual != 0)
    seen = set()
    for idx in nz:
        key = tuple(int(i) for i in idx[:-1])
        if key in seen:
            continue
        seen.add(key)
        out.append(Violation(name, key, tuple(residual[key])))
    return out


def verify_axioms(L: TripleSystem) -> list[Violation]:
    """All basis 5-tuples where one of the two identities fails (empty iff valid)."""
    first, second = identity_residuals(L)
    return _violations("first", first) + _violations("second", second)


def is_triple_system(field, constants) -> bool:
    return not verify_axioms(TripleSystem(field, constants, unchecked=True))


# ---------------------------------------------------------------------------
# Leibniz algebras


def leibniz_residual(field: Field, product):
    """Residual of the (right) Leibniz identity [[x,y],z] = [[x,z],y] + [x,[y,z]]."""
    p = field.array(product)
    r = (einsum("abl,lcs->abcs", p, p)
         - einsum("acl,lbs->abcs", p, p)
         - einsum("bcl,als->abcs", p, p))
    return field.reduce(r)


def is_leibniz_algebra(field: Field, product) -> bool:
    p = field.array(product)
    if p.size == 0:
        return True
    return not np.any(leibniz_residual(field, p) != 0)


def from_leibniz_algebra(field: Field, product, basis_names=None) -> TripleSystem:
    """Triple system {x,y,z} = [[x,y],z] of a (right) Leibniz algebra.

    ``product[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.
    """
    p = field.array(product)
    n = p.shape[0] if p.ndim == 3 else 0
    if p.ndim != 3 or p.shape != (n, n, n):
        raise ValueError("Leibniz product must be an n x n x n tensor")
    if not is_leibniz_algebra(field, p):
        raise AxiomError("input is not a Leibniz algebra")
    c = einsum("abl,lcs->abcs", p, p) if n else field.zeros((0, 0, 0, 0))
    return TripleSystem(field, field.reduce(c), basis_names)


# ---------------------------------------------------------------------------
# Subspaces: ideals, centre, centraliser, series


def _basis_products(L: TripleSystem, vectors, slot):
    """All brackets with one listed vector in ``slot`` and basis vectors elsewhere."""
    c = L.constants
    out = []
    for v in vectors:
        v = L.field.array(v)
        if slot == 0:
            t = einsum("i,ijkl->jkl", v, c)
        elif slot == 1:
            t = einsum("j,ijkl->ikl", v, c)
        else:
            t = einsum("k,ijkl->ijl", v, c)
        t = L.field.reduce(t)
        out.extend(tuple(t[a, b]) for a in range(L.dim) for b in range(L.dim))
    return out


def _subspace(L, vectors=()):
    return Subspace(L.field, L.dim, vectors)


def whole(L: TripleSystem) -> Subspace:
    return Subspace.full(L.field, L.dim)


def zero(L: TripleSystem) -> Subspace:
    return Subspace.zero(L.field, L.dim)


def _check_ambient(L, I):
    if I.ambient != L.dim:
        raise ValueError(f"subspace lives in dimension {I.ambient}, system has {L.dim}")
    L.field.check(I.field)


def bracket_span(L: TripleSystem, A: Subspace, B: Subspace, C: Subspace) -> Subspace:
    """Span of {A, B, C}."""
    c = L.constants
    vecs = []
    for a in A.basis:
        a = L.field.array(a)
        for b in B.basis:
            b = L.field.array(b)
            ab = einsum("i,j,ijkl->kl", a, b, c)
            for z in C.basis:
                vecs.append(tuple(L.field.reduce(einsum("k,kl->l", L.field.array(z), ab))))
    return _subspace(L, vecs)


def ideal_products(L: TripleSystem, I: Subspace) -> Subspace:
    """{I,L,L} + {L,I,L} + {L,L,I}."""
    _check_ambient(L, I)
    vecs = []
    for slot in range(3):
        vecs += _basis_products(L, I.basis, slot)
    return _subspace(L, vecs)


def is_ideal(L: TripleSystem, I: Subspace) -> bool:
    return ideal_products(L, I) <= I


def is_subsystem(L: TripleSystem, I: Subspace) -> bool:
    _check_ambient(L, I)
    return bracket_span(L, I, I, I) <= I


def is_abelian_ideal(L: TripleSystem, I: Subspace) -> bool:
    if not is_ideal(L, I):
        return False
    Lw = whole(L)
    return all(bracket_span(L, *t).dim == 0
               for t in ((I, I, Lw), (I, Lw, I), (Lw, I, I)))


def _slot_operator_rows(L: TripleSystem, slot: int, others):
    """Rows of the linear conditions x -> bracket with x in ``slot``.

    ``others`` is a pair of vector lists for the two remaining slots (in
    order).  Each returned row is indexed by the coordinates of ``x``; the
    condition is row . x = 0.
    """
    c = L.constants
    f = L.field
    rows = []
    for u in others[0]:
        u = f.array(u)
        for w in others[1]:
            w = f.array(w)
            if slot == 0:
                m = einsum("j,k,ijkl->li", u, w, c)
            elif slot == 1:
                m = einsum("i,k,ijkl->lj", u, w, c)
            else:
                m = einsum("i,j,ijkl->lk", u, w, c)
            m = f.reduce(m)
            rows.extend(list(r) for r in m)
    return rows


def _kernel_of_rows(L, rows):
    if not rows:
        return whole(L)
    return _subspace(L, kernel_basis(Matrix.from_rows(L.field, rows, L.dim)))


def _units(L):
    return [tuple(L.unit(i)) for i in range(L.dim)]


def center(L: TripleSystem) -> Subspace:
    """{x : {x,L,L} = {L,x,L} = {L,L,x} = 0}."""
    e = _units(L)
    rows = []
    for slot in range(3):
        rows += _slot_operator_rows(L, slot, (e, e))
    return _kernel_of_rows(L, rows)


def centralizer(L: TripleSystem, I: Subspace) -> Subspace:
    """{x : {x,I,L}={x,L,I}={L,x,I}={L,I,x}={I,x,L}={I,L,x}=0}."""
    _check_ambient(L, I)
    e = _units(L)
    Ib = list(I.basis)
    rows = (_slot_operator_rows(L, 0, (Ib, e)) + _slot_operator_rows(L, 0, (e, Ib))
            + _slot_operator_rows(L, 1, (e, Ib)) + _slot_operator_rows(L, 2, (e, Ib))
            + _slot_operator_rows(L, 1, (Ib, e)) + _slot_operator_rows(L, 2, (Ib, e)))
    return _kernel_of_rows(L, rows)


def _upper_step(L: TripleSystem, C: Subspace) -> Subspace:
    """{x : {x,L,L} + {L,x,L} + {L,L,x} lies in C}."""
    e = _units(L)
    ann = C.annihilator()
    rows = []
    for slot in range(3):
        ops = _slot_operator_rows(L, slot, (e, e))
        # each block of n rows is the matrix of x -> bracket; pair with ann
        n = L.dim
        for b in range(0, len(ops), n):
            block = ops[b:b + n]
            for w in ann.basis:
                rows.append([L.field.reduce_scalar(sum(w[l] * block[l][i] for l in range(n)))
                             for i in range(n)])
    return _kernel_of_rows(L, rows)


def central_descending(L: TripleSystem, r: int) -> Subspace:
    """C^r: C^0 = L, C^{k+1} = {C^k,L,L} + {L,C^k,L} + {L,L,C^k}."""
    if r < 0:
        raise ValueError("r must be non-negative")
    C = whole(L)
    for _ in range(r):
        nxt = ideal_products(L, C)
        if nxt == C:
            break
        C = nxt
    return C


def central_ascending(L: TripleSystem, r: int) -> Subspace:
    """C_r: C_0 = 0, C_{k+1} = {x : {x,L,L}+{L,x,L}+{L,L,x} in C_k}."""
    if r < 0:
        raise ValueError("r must be non-negative")
    C = zero(L)
    for _ in range(r):
        nxt = _upper_step(L, C)
        if nxt == C:
            break
        C = nxt
    return C


def descending_series(L: TripleSystem):
    """Terms C^0, C^1, ... up to and including the first repeated term's predecessor.

    Returns (terms, k) where k is the stabilisation index (C^k = C^{k+1}).
    """
    terms = [whole(L)]
    while True:
        nxt = ideal_products(L, terms[-1])
        if nxt == terms[-1]:
            return terms, len(terms) - 1
        terms.append(nxt)


def ascending_series(L: TripleSystem):
    terms = [zero(L)]
    while True:
        nxt = _upper_step(L, terms[-1])
        if nxt == terms[-1]:
            return terms, len(terms) - 1
        terms.append(nxt)


def is_nilpotent(L: TripleSystem) -> bool:
    terms, _ = descending_series(L)
    return terms[-1].dim == 0


# ---------------------------------------------------------------------------
# Derivations


def derivation_residual(L: TripleSystem, D):
    """D{a,b,c} - {Da,b,c} - {a,Db,c} - {a,b,Dc} on basis triples.

    ``D`` is an n x n matrix acting on column vectors (D e_j = column j).
    """
    f = L.field
    D = f.array(D.to_lists() if isinstance(D, Matrix) else D)
    if D.shape != (L.dim, L.dim):
        raise ValueError(f"expected a {L.dim} x {L.dim} matrix")
    c = L.constants
    if L.dim == 0:
        return f.zeros((0, 0, 0, 0))
    res = (einsum("ijkm,lm->ijkl", c, D)
           - einsum("mi,mjkl->ijkl", D, c)
           - einsum("mj,imkl->ijkl", D, c)
           - einsum("mk,ijml->ijkl", D, c))
    return f.reduce(res)


def is_derivation(L: TripleSystem, D) -> bool:
    return not np.any(derivation_residual(L, D) != 0)


def derivation_space(L: TripleSystem) -> list[Matrix]:
    """Basis of Der(L); matrix coordinate (r, s) is variable r*n + s."""
    n = L.dim
    f = L.field
    c = L.constants
    rows = []
    # condition for output l of triple (i,j,k)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        row = {}

        def add(col, v):
            if v:
                row[col] = row.get(col, 0) + v

        for m in range(n):
            add(l * n + m, c[i, j, k, m])            # D{ijk}
            add(m * n + i, -c[m, j, k, l])           # {D e_i, e_j, e_k}
            add(m * n + j, -c[i, m, k, l])
            add(m * n + k, -c[i, j, m, l])
        row = {a: f.reduce_scalar(b) for a, b in row.items()}
        row = {a: b for a, b in row.items() if b}
        if row:
            rows.append(row)
    m = Matrix(f, len(rows), n * n, rows)
    basis = kernel_basis(m)
    return [Matrix.from_rows(f, [v[r * n:(r + 1) * n] for r in range(n)], n) for v in basis]



# ---------------------------------------------------------------------------
# Homomorphisms


def homomorphism_residual(L1: TripleSystem, L2: TripleSystem, P):
    """P{a,b,c} - {Pa,Pb,Pc} on basis triples of L1; P is dim L2 x dim L1."""
    L1.field.check(L2.field)
    f = L1.field
    P = f.array(P.to_lists() if isinstance(P, Matrix) else P)
    if P.shape != (L2.dim, L1.dim):
        raise ValueError(f"expected a {L2.dim} x {L1.dim} matrix")
    if L1.dim == 0:
        return f.zeros((0, 0, 0, L2.dim))
    lhs = einsum("ijkm,lm->ijkl", L1.constants, P)
    rhs = einsum("ai,bj,ck,abcl->ijkl", P, P, P, L2.constants)
    return f.reduce(lhs - rhs)


def is_homomorphism(L1: TripleSystem, L2: TripleSystem, P) -> bool:
    return not np.any(homomorphism_residual(L1, L2, P) != 0)


def is_isomorphism(L1: TripleSystem, L2: TripleSystem, P) -> bool:
    from .linalg import det
    P = P if isinstance(P, Matrix) else Matrix.from_array(L1.field, P)
    return (L1.dim == L2.dim and P.shape == (L1.dim, L1.dim) and det(P) != 0
            and is_homomorphism(L1, L2, P))
