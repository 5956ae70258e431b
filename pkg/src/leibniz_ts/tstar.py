"""T*-extensions L + L* and reconstruction from isotropic ideals."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .cohomology import Cochain, require_cocycle3
from .core import TripleSystem, ascending_series, center, descending_series, is_ideal, is_isomorphism
from .linalg import Matrix, PrimeField, Subspace, einsum, inverse
from .quadratic import BilinearForm, check_quadratic, generated_ideal, is_isotropic, orthogonal_complement
from .representation import dual, twisted_sum_constants


@dataclass(frozen=True)
class TStarExtension:
    total: TripleSystem
    form: BilinearForm
    base: TripleSystem
    theta: Cochain

    @property
    def fiber(self) -> Subspace:
        """The copy of L* inside L + L*."""
        n = self.base.dim
        f = self.base.field
        return Subspace(f, 2 * n, [tuple(1 if k == n + i else 0 for k in range(2 * n)) for i in range(n)])


def canonical_form(field, n: int) -> BilinearForm:
    """B(x+f, y+g) = g(x) + f(y) in the basis e_1..e_n, e_1*..e_n*."""
    g = field.zeros((2 * n, 2 * n))
    for i in range(n):
        g[i, n + i] = 1
        g[n + i, i] = 1
    return BilinearForm(field, g)


def _dual_cochain(L: TripleSystem, theta) -> Cochain:
    rho = dual(L)
    if theta is None:
        return Cochain.zero(rho, 3)
    if isinstance(theta, Cochain):
        theta = theta.values
    return Cochain(rho, 3, theta)


def tstar_extend(L: TripleSystem, theta=None, unchecked=False) -> TStarExtension:
    """{x+f, y+g, z+h} = {x,y,z} + theta(x,y,z) + {f,y,z} + {x,g,z} + {x,y,h}.

    The actions on L* are those of ``representation.dual``.  Unless
    ``unchecked``, theta must be a dual 3-cocycle (CocycleError) and the
    result must satisfy both identities (AxiomError).
    """
    theta = _dual_cochain(L, theta)
    if not unchecked:
        require_cocycle3(theta)
    names = list(L.basis_names) + [f"{b}*" for b in L.basis_names]
    total = TripleSystem(L.field, twisted_sum_constants(theta.rep, theta.values), names, unchecked=unchecked)
    return TStarExtension(total, canonical_form(L.field, L.dim), L, theta)


def cyclic_residuals(theta_values):
    """t[x,y,z,u] - t[y,x,u,z] and t[x,y,z,u] - t[u,z,y,x], with t[x,y,z,u] = theta(x,y,z)(u)."""
    t = np.asarray(theta_values, dtype=object)
    return t - einsum("yxuz->xyzu", t), t - einsum("uzyx->xyzu", t)


def cyclic_condition(L: TripleSystem, theta) -> bool:
    """theta(x,y,z)(u) = theta(y,x,u)(z) = theta(u,z,y)(x) on all basis 4-tuples."""
    theta = _dual_cochain(L, theta)
    f = L.field
    a, b = cyclic_residuals(theta.values)
    return not np.any(f.reduce(a) != 0) and not np.any(f.reduce(b) != 0)


def symmetrize_cyclic(L: TripleSystem, theta) -> Cochain:
    """Average of theta over the group generated by the two position swaps of the cyclic condition."""
    theta = _dual_cochain(L, theta)
    f = L.field
    t = theta.values
    s = (t + einsum("yxuz->xyzu", t) + einsum("uzyx->xyzu", t) + einsum("zuxy->xyzu", t))
    return Cochain(theta.rep, 3, f.reduce(s * f.inv(f(4))))


@dataclass(frozen=True)
class Reconstruction:
    system: TripleSystem     # J, isomorphic to L/I
    theta: Cochain           # dual-coefficient cochain on J
    phi: Matrix              # L -> J + J*
    complement: Matrix       # columns w'_a spanning the isotropic complement


def _complement_vectors(field, N, I: Subspace):
    ech = Subspace(field, N, I.basis)
    out = []
    for k in range(N):
        e = tuple(1 if j == k else 0 for j in range(N))
        if e not in ech:
            out.append(e)
            ech = ech + Subspace(field, N, [e])
    return out


def reconstruct(L2n: TripleSystem, B: BilinearForm, I: Subspace) -> Reconstruction:
    """Isometry of (L2n, B) onto a T*-extension of J = L2n / I.

    Steps: extend a basis of I by complement vectors w, rescale so that
    B(w_a, i_b) = delta_ab, subtract half of B(w_a, w_b) i_b to make the
    complement isotropic, then read the bracket in the frame (w', i).
    """
    f = L2n.field
    N = L2n.dim
    if isinstance(f, PrimeField) and f.p == 2:
        raise ValueError("reconstruction needs characteristic other than 2")
    if N % 2:
        raise ValueError("dimension must be even")
    n = N // 2
    if I.ambient != N or I.dim != n:
        raise ValueError(f"I must have dimension {n}")
    rep = check_quadratic(L2n, B)
    if not all(rep.values()):
        raise ValueError(f"(L, B) is not quadratic: {rep}")
    if not is_isotropic(B, I):
        raise ValueError("I is not isotropic")
    if not is_ideal(L2n, I):
        raise ValueError("I is not an ideal")

    ivecs = [f.array(list(v)) for v in I.basis]
    w = [f.array(list(v)) for v in _complement_vectors(f, N, I)]
    A = Matrix.from_rows(f, [[B(wa, ib) for ib in ivecs] for wa in w], n)
    Ainv = inverse(A)
    if Ainv is None:
        raise ValueError("B pairs the complement degenerately with I")
    Ai = Ainv.to_array()
    w = [f.reduce(sum(Ai[a, c] * w[c] for c in range(n))) for a in range(n)]
    half = f.inv(f(2))
    w = [f.reduce(w[a] - sum(half * B(w[a], w[b]) * ivecs[b] for b in range(n))) for a in range(n)]

    frame = Matrix.from_columns(f, [tuple(v) for v in w] + [tuple(v) for v in ivecs], N)
    phi = inverse(frame)
    # coordinates of brackets of complement vectors in the frame (w', i)
    W = f.array([list(v) for v in w])
    br = f.reduce(einsum("ai,bj,ck,ijkl->abcl", W, W, W, L2n.constants))
    coords = f.reduce(einsum("ql,abcl->abcq", phi.to_array(), br))
    J = TripleSystem(f, coords[..., :n], [f"p{a}" for a in range(n)], unchecked=True)
    theta = Cochain(dual(J), 3, coords[..., n:])
    return Reconstruction(J, theta, phi, Matrix.from_columns(f, [tuple(v) for v in w], N))


def check_reconstruction(L2n: TripleSystem, B: BilinearForm, rec: Reconstruction) -> dict:
    """phi is an isomorphism onto T*_theta J and an isometry onto its canonical form."""
    target = tstar_extend(rec.system, rec.theta, unchecked=True)
    f = L2n.field
    P = rec.phi.to_array()
    iso = is_isomorphism(L2n, target.total, rec.phi)
    isometric = not np.any(f.reduce(P.T @ target.form.gram @ P - B.gram) != 0)
    return {"isomorphism": bool(iso), "isometry": bool(isometric)}


def _seeds(L: TripleSystem, B: BilinearForm):
    seeds = []
    desc, _ = descending_series(L)
    asc, _ = ascending_series(L)
    for S in desc + asc + [center(L)]:
        seeds.append(S)
        seeds.append(orthogonal_complement(L, B, S))
    out = []
    for S in seeds:
        if S not in out:
            out.append(S)
    return out


def find_isotropic_ideal(L2n: TripleSystem, B: BilinearForm, budget: int = 500):
    """An isotropic ideal of half dimension, or None within ``budget`` trials.

    Seeds are series terms, the center and their complements; isotropic seed
    ideals are grown by adjoining isotropic vectors of their complements while
    the generated ideal stays isotropic.
    """
    N = L2n.dim
    if N % 2 or budget <= 0:
        return None
    n = N // 2
    f = L2n.field
    spent = 0
    zero = Subspace.zero(f, N)
    starts = [S for S in _seeds(L2n, B) if is_isotropic(B, S) and is_ideal(L2n, S)]
    if zero not in starts:
        starts.append(zero)
    for S in starts:
        while S.dim < n and spent < budget:
            perp = orthogonal_complement(L2n, B, S)
            basis = [f.array(list(v)) for v in perp.basis]
            cands = basis + [f.reduce(a + c) for a, c in itertools.combinations(basis, 2)] \
                + [f.reduce(a - c) for a, c in itertools.combinations(basis, 2)]
            grown = None
            for v in cands:
                if spent >= budget:
                    break
                spent += 1
                if B(v, v) != 0 or tuple(v) in S:
                    continue
                T = generated_ideal(L2n, list(S.basis) + [tuple(v)])
                if is_isotropic(B, T) and T.dim <= n:
                    grown = T
                    break
            if grown is None:
                break
            S = grown
        if S.dim == n:
            return S
        if spent >= budget:
            break
    return None
