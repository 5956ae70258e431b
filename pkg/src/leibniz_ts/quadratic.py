"""Bilinear forms on triple systems: invariance, orthogonality, decompositions."""
from __future__ import annotations

import itertools

import numpy as np

from .core import TripleSystem, central_ascending, central_descending, centralizer, ideal_products, is_ideal
from .linalg import Matrix, Subspace, det, einsum, kernel_basis, rank


class DegenerateForm(ValueError):
    pass


class BilinearForm:
    """B(e_i, e_j) = gram[i][j]."""

    def __init__(self, field, gram):
        g = field.array(gram.to_lists() if isinstance(gram, Matrix) else gram)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"gram must be square, got shape {g.shape}")
        g.flags.writeable = False
        self.field = field
        self.gram = g

    @property
    def dim(self):
        return self.gram.shape[0]

    def __call__(self, x, y):
        f = self.field
        return f.reduce_scalar(einsum("i,ij,j->", f.array(x), self.gram, f.array(y)))

    def matrix(self) -> Matrix:
        return Matrix.from_array(self.field, self.gram) if self.dim else Matrix.zeros(self.field, 0, 0)

    def is_symmetric(self) -> bool:
        return bool(np.all(self.gram == self.gram.T))

    def is_skew(self) -> bool:
        return bool(np.all(self.gram == self.field.reduce(-self.gram.T)))

    def is_nondegenerate(self) -> bool:
        return self.dim == 0 or det(self.matrix()) != 0

    def restricted_rank(self, I: Subspace) -> int:
        if I.dim == 0:
            return 0
        S = self.field.array([list(v) for v in I.basis])
        return rank(Matrix.from_array(self.field, self.field.reduce(S @ self.gram @ S.T)))

    def __eq__(self, other):
        return isinstance(other, BilinearForm) and self.field == other.field and \
            self.gram.shape == other.gram.shape and bool(np.all(self.gram == other.gram))

    def __hash__(self):
        return hash(tuple(self.gram.reshape(-1)))

    def __repr__(self):
        return f"BilinearForm({self.gram.tolist()})"


def _check(L: TripleSystem, B: BilinearForm):
    L.field.check(B.field)
    if B.dim != L.dim:
        raise ValueError(f"form has dimension {B.dim}, system has {L.dim}")


def invariance_residuals(L: TripleSystem, B: BilinearForm) -> dict:
    """Tensors (a, b, x, y) of LHS - RHS for the three invariances.

    right:  B({x,a,b}, y) = B(x, {y,b,a})
    middle: B({a,x,b}, y) = B(x, {b,y,a})
    left:   B({a,b,x}, y) = B(x, {b,a,y})
    """
    _check(L, B)
    c, g, f = L.constants, B.gram, L.field
    if L.dim == 0:
        z = f.zeros((0,) * 4)
        return {"right": z, "middle": z, "left": z}
    e = einsum
    return {
        "right": f.reduce(e("xabl,ly->abxy", c, g) - e("xl,ybal->abxy", g, c)),
        "middle": f.reduce(e("axbl,ly->abxy", c, g) - e("xl,byal->abxy", g, c)),
        "left": f.reduce(e("abxl,ly->abxy", c, g) - e("xl,bayl->abxy", g, c)),
    }


def check_quadratic(L: TripleSystem, B: BilinearForm) -> dict:
    res = invariance_residuals(L, B)
    return {
        "symmetric": B.is_symmetric(),
        "nondegenerate": B.is_nondegenerate(),
        "right_inv": not np.any(res["right"] != 0),
        "middle_inv": not np.any(res["middle"] != 0),
        "left_inv": not np.any(res["left"] != 0),
    }


def is_quadratic(L, B) -> bool:
    return all(check_quadratic(L, B).values())


def any_two_imply_third(L: TripleSystem, B: BilinearForm) -> bool:
    """For symmetric B: whenever two invariances hold, so does the third."""
    if not B.is_symmetric():
        raise ValueError("the implication is stated for symmetric forms")
    rep = check_quadratic(L, B)
    flags = [rep["right_inv"], rep["middle_inv"], rep["left_inv"]]
    return sum(flags) != 2


def orthogonal_complement(L: TripleSystem, B: BilinearForm, I: Subspace) -> Subspace:
    """I-perp = {x : B(v, x) = 0 for all v in I}."""
    _check(L, B)
    if not B.is_nondegenerate():
        raise DegenerateForm("orthogonal complements need a nondegenerate form")
    if I.ambient != L.dim:
        raise ValueError("subspace lives in a different ambient space")
    if I.dim == 0:
        return Subspace.full(L.field, L.dim)
    f = L.field
    rows = f.reduce(f.array([list(v) for v in I.basis]) @ B.gram)
    return Subspace(f, L.dim, kernel_basis(Matrix.from_array(f, rows)))


def is_isotropic(B: BilinearForm, I: Subspace) -> bool:
    f = B.field
    if I.dim == 0:
        return True
    S = f.array([list(v) for v in I.basis])
    return not np.any(f.reduce(S @ B.gram @ S.T) != 0)


def is_nondegenerate_on(B: BilinearForm, I: Subspace) -> bool:
    return B.restricted_rank(I) == I.dim


def verify_series_orthogonality(L: TripleSystem, B: BilinearForm, r_max: int) -> bool:
    """(C^r)-perp == C_r for 0 <= r <= r_max."""
    return all(series_orthogonality_table(L, B, r_max).values())


def series_orthogonality_table(L, B, r_max) -> dict:
    return {r: orthogonal_complement(L, B, central_descending(L, r)) == central_ascending(L, r)
            for r in range(r_max + 1)}


def ideal_iff_centralizer(L: TripleSystem, B: BilinearForm, I: Subspace) -> tuple[bool, bool]:
    """(I is an ideal, Z_L(I) contains I-perp)."""
    perp = orthogonal_complement(L, B, I)
    return is_ideal(L, I), perp <= centralizer(L, I)


def verify_decomposition(L: TripleSystem, B: BilinearForm, parts) -> bool:
    """Parts are nondegenerate ideals, pairwise B-orthogonal, and sum to L."""
    _check(L, B)
    parts = list(parts)
    if sum(p.dim for p in parts) != L.dim:
        return False
    total = Subspace.zero(L.field, L.dim)
    for p in parts:
        total = total + p
    if total.dim != L.dim:
        return False
    for p in parts:
        if not is_ideal(L, p) or not is_nondegenerate_on(B, p):
            return False
    f = L.field
    for p, q in itertools.combinations(parts, 2):
        P = f.array([list(v) for v in p.basis])
        Q = f.array([list(v) for v in q.basis])
        if p.dim and q.dim and np.any(f.reduce(P @ B.gram @ Q.T) != 0):
            return False
    return True


def generated_ideal(L: TripleSystem, vectors) -> Subspace:
    I = Subspace(L.field, L.dim, vectors)
    while True:
        nxt = I + ideal_products(L, I)
        if nxt == I:
            return I
        I = nxt


def search_irreducible_split(L: TripleSystem, B: BilinearForm, budget: int = 256):
    """Refine L into pairwise orthogonal nondegenerate ideals.

    Candidates are the ideals generated by subsets of a part's basis, smallest
    subsets first.  Returns the parts when at least one split was found within
    ``budget`` candidate evaluations, otherwise None.
    """
    _check(L, B)
    if not is_quadratic(L, B):
        raise ValueError("search needs a quadratic system")
    parts = [Subspace.full(L.field, L.dim)]
    spent = 0
    changed = True
    while changed and spent < budget:
        changed = False
        for idx, P in enumerate(parts):
            found = None
            for size in range(1, P.dim):
                for subset in itertools.combinations(P.basis, size):
                    if spent >= budget:
                        break
                    spent += 1
                    J = generated_ideal(L, subset)
                    if 0 < J.dim < P.dim and J <= P and is_nondegenerate_on(B, J):
                        found = J
                        break
                if found is not None or spent >= budget:
                    break
            if found is not None:
                rest = orthogonal_complement(L, B, found) & P
                parts[idx:idx + 1] = [found, rest]
                changed = True
                break
    if len(parts) < 2:
        return None
    return parts if verify_decomposition(L, B, parts) else None
