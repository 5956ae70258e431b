"""Symplectic forms and invertible skewsymmetric derivations of quadratic systems."""
from __future__ import annotations

import itertools
import random

import numpy as np

from .core import TripleSystem, derivation_space, is_derivation
from .linalg import Matrix, det, einsum, inverse, kernel_basis
from .quadratic import BilinearForm, is_quadratic
from .tstar import tstar_extend


def symplectic_residual(L: TripleSystem, omega: BilinearForm):
    """w(u,{x,y,z}) + w(x,{u,z,y}) + w(y,{z,u,x}) + w(z,{y,x,u}) on basis (u,x,y,z)."""
    c, W, f = L.constants, omega.gram, L.field
    if L.dim == 0:
        return f.zeros((0,) * 4)
    e = einsum
    return f.reduce(e("ul,xyzl->uxyz", W, c) + e("xl,uzyl->uxyz", W, c)
                    + e("yl,zuxl->uxyz", W, c) + e("zl,yxul->uxyz", W, c))


def is_symplectic(L: TripleSystem, omega: BilinearForm) -> bool:
    L.field.check(omega.field)
    if omega.dim != L.dim:
        raise ValueError("form and system dimensions differ")
    return (omega.is_skew() and omega.is_nondegenerate()
            and not np.any(symplectic_residual(L, omega) != 0))


def _mat(L, D) -> Matrix:
    D = D if isinstance(D, Matrix) else Matrix.from_array(L.field, D)
    if D.shape != (L.dim, L.dim):
        raise ValueError(f"expected a {L.dim} x {L.dim} matrix")
    return D


def is_skewsymmetric(B: BilinearForm, D) -> bool:
    """B(Dx, y) = -B(x, Dy), i.e. D^T G + G D = 0."""
    f = B.field
    D = f.array(D.to_lists() if isinstance(D, Matrix) else D)
    return not np.any(f.reduce(D.T @ B.gram + B.gram @ D) != 0)


def derivation_checks(L: TripleSystem, B: BilinearForm, D) -> dict:
    D = _mat(L, D)
    return {"derivation": is_derivation(L, D), "skewsymmetric": is_skewsymmetric(B, D),
            "invertible": L.dim == 0 or det(D) != 0}


def symplectic_from_derivation(L: TripleSystem, B: BilinearForm, D) -> BilinearForm:
    """omega(x, y) = B(Dx, y), gram D^T G."""
    if not is_quadratic(L, B):
        raise ValueError("(L, B) is not quadratic")
    D = _mat(L, D)
    bad = [k for k, ok in derivation_checks(L, B, D).items() if not ok]
    if bad:
        raise ValueError("D fails: " + ", ".join(bad))
    f = L.field
    return BilinearForm(f, f.reduce(D.to_array().T @ B.gram))


def derivation_from_symplectic(L: TripleSystem, B: BilinearForm, omega: BilinearForm) -> Matrix:
    """The D with omega(x, y) = B(Dx, y), namely G^-1 W^T."""
    if not is_quadratic(L, B):
        raise ValueError("(L, B) is not quadratic")
    if not is_symplectic(L, omega):
        raise ValueError("omega is not symplectic")
    Ginv = inverse(B.matrix())
    return Ginv @ omega.matrix().T


def derivation_inverse_from_forms(B: BilinearForm, omega: BilinearForm) -> Matrix:
    """D' with omega(D'x, y) = B(x, y): D'^T = G W^-1."""
    Winv = inverse(omega.matrix())
    if Winv is None:
        raise ValueError("omega is degenerate")
    return (B.matrix() @ Winv).T


def nilpotent_tensor_system(L: TripleSystem, n: int) -> TripleSystem:
    """L_n = L (x) tF[t]/t^n F[t]; x_i (x) t^p sits at index (p-1)*dim L + i."""
    if n < 2:
        raise ValueError("n must be at least 2")
    d = L.dim
    f = L.field
    N = (n - 1) * d
    c = f.zeros((N, N, N, N))
    for p, q, r in itertools.product(range(1, n), repeat=3):
        s = p + q + r
        if s >= n:
            continue
        c[(p - 1) * d:p * d, (q - 1) * d:q * d, (r - 1) * d:r * d, (s - 1) * d:s * d] = L.constants
    names = [f"{b}t{p}" for p in range(1, n) for b in L.basis_names]
    return TripleSystem(f, c, names)


def canonical_grading_derivation(L: TripleSystem, n: int) -> Matrix:
    """D(x (x) t^p) = p x (x) t^p."""
    if n < 2:
        raise ValueError("n must be at least 2")
    d = L.dim
    return Matrix.from_rows(L.field, [[(i // d + 1) if i == j else 0 for j in range((n - 1) * d)]
                                      for i in range((n - 1) * d)], (n - 1) * d)


def lift_to_trivial_tstar(L: TripleSystem, D, unchecked=False):
    """Trivial T*-extension with canonical B and D~(x+f) = Dx - f o D.

    In dual coordinates f o D is D^T f, so D~ = diag(D, -D^T).
    """
    D = _mat(L, D)
    if L.dim and det(D) == 0:
        raise ValueError("D is singular")
    T = tstar_extend(L, None, unchecked=unchecked)
    f = L.field
    n = L.dim
    Da = D.to_array()
    Dt = f.zeros((2 * n, 2 * n))
    Dt[:n, :n] = Da
    Dt[n:, n:] = f.reduce(-Da.T)
    return T.total, T.form, Matrix.from_array(f, Dt) if n else Matrix.zeros(f, 0, 0)


def skew_derivation_basis(L: TripleSystem, B: BilinearForm) -> list[Matrix]:
    """Basis of {D in Der(L) : D^T G + G D = 0}."""
    f = L.field
    ders = derivation_space(L)
    if not ders:
        return []
    G = B.gram
    conds = [f.reduce(D.to_array().T @ G + G @ D.to_array()).reshape(-1) for D in ders]
    # rows indexed by matrix entry, columns by derivation basis element
    rows = [[conds[s][k] for s in range(len(ders))] for k in range(L.dim ** 2)]
    coeffs = kernel_basis(Matrix.from_rows(f, rows, len(ders)))
    out = []
    for a in coeffs:
        acc = Matrix.zeros(f, L.dim, L.dim)
        for s, x in enumerate(a):
            if x:
                acc = acc + ders[s].scale(x)
        out.append(acc)
    return out


def find_invertible_skewsymmetric_derivation(L: TripleSystem, B: BilinearForm, budget: int = 200, seed: int = 0):
    """Witness D (derivation, skewsymmetric, invertible) or None within ``budget`` trials.

    Tries the basis of the skew derivation space first, then random
    combinations with coefficients in [-3, 3].
    """
    if budget <= 0:
        return None
    if not is_quadratic(L, B):
        raise ValueError("(L, B) is not quadratic")
    basis = skew_derivation_basis(L, B)
    if not basis:
        return None
    f = L.field
    rng = random.Random(seed)
    trials = 0
    for D in basis:
        if trials >= budget:
            return None
        trials += 1
        if det(D) != 0:
            return D
    while trials < budget:
        trials += 1
        acc = Matrix.zeros(f, L.dim, L.dim)
        for D in basis:
            acc = acc + D.scale(rng.randint(-3, 3))
        if det(acc) != 0:
            return acc
    return None
