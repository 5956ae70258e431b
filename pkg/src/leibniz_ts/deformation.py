"""Truncated one-parameter formal deformations d_t = d_0 + d_1 t + ... + d_N t^N.

Every d_i is a trilinear map L^3 -> L stored as an n x n x n x n tensor in
the same layout as structure constants, i.e. a 3-cochain with adjoint
coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .cohomology import Cochain, delta1_matrix, delta3_matrix, is_cocycle3
from .core import TripleSystem, Violation
from .linalg import Matrix, einsum, solve
from .representation import adjoint


# ---------------------------------------------------------------------------
# the bilinear pieces of the deformation equations


def e1(a, b):
    """a(b(x1,x2,x3),x4,x5) - a(b(x1,x2,x4),x3,x5) - a(b(x1,x2,x5),x3,x4)
    + a(b(x1,x2,x5),x4,x3) - a(x1,x2,b(x3,x4,x5))."""
    e = einsum
    return (e("abcq,qdeo->abcdeo", b, a) - e("abdq,qceo->abcdeo", b, a)
            - e("abeq,qcdo->abcdeo", b, a) + e("abeq,qdco->abcdeo", b, a)
            - e("cdeq,abqo->abcdeo", b, a))


def e2(a, b):
    """a(b(x1,x2,x3),x4,x5) - a(b(x1,x3,x2),x4,x5) - a(b(x1,x4,x2),x3,x5)
    + a(b(x1,x4,x3),x2,x5) - a(x1,b(x2,x3,x4),x5)."""
    e = einsum
    return (e("abcq,qdeo->abcdeo", b, a) - e("acbq,qdeo->abcdeo", b, a)
            - e("adbq,qceo->abcdeo", b, a) + e("adcq,qbeo->abcdeo", b, a)
            - e("bcdq,aqeo->abcdeo", b, a))


@dataclass(frozen=True)
class Deformation:
    base: TripleSystem
    terms: tuple = ()

    def __post_init__(self):
        f = self.base.field
        n = self.base.dim
        ts = []
        for t in self.terms:
            t = f.array(t.values if isinstance(t, Cochain) else t)
            if t.shape != (n, n, n, n):
                raise ValueError(f"deformation terms must have shape {(n,) * 4}, got {t.shape}")
            t.flags.writeable = False
            ts.append(t)
        object.__setattr__(self, "terms", tuple(ts))

    @property
    def order(self) -> int:
        return len(self.terms)

    @property
    def field(self):
        return self.base.field

    def coefficient(self, i):
        """d_i, with d_0 the base bracket and zero beyond the order."""
        if i == 0:
            return self.base.constants
        if i <= self.order:
            return self.terms[i - 1]
        return self.field.zeros(self.base.constants.shape)

    def cochain(self, i) -> Cochain:
        return Cochain(adjoint(self.base), 3, self.coefficient(i))

    def first_nonzero(self):
        for i, t in enumerate(self.terms, start=1):
            if np.any(t != 0):
                return i
        return None

    def truncated(self, N) -> "Deformation":
        return Deformation(self.base, self.terms[:N])

    def extended(self, term) -> "Deformation":
        return Deformation(self.base, self.terms + (term,))

    def __eq__(self, other):
        return (isinstance(other, Deformation) and self.base == other.base and self.order == other.order
                and all(bool(np.all(a == b)) for a, b in zip(self.terms, other.terms)))

    def __hash__(self):
        return hash((self.base, self.order))


def null_deformation(L: TripleSystem, order: int) -> Deformation:
    return Deformation(L, tuple(L.field.zeros((L.dim,) * 4) for _ in range(order)))


def order_residuals(d: Deformation, r: int, skip=()):
    """sum over i+j=r of (E1(d_i,d_j), E2(d_i,d_j)), leaving out pairs touching indices in ``skip``."""
    f = d.field
    n = d.base.dim
    s1 = f.zeros((n,) * 6)
    s2 = f.zeros((n,) * 6)
    for i in range(r + 1):
        j = r - i
        if i in skip or j in skip:
            continue
        a, b = d.coefficient(i), d.coefficient(j)
        s1 = s1 + e1(a, b)
        s2 = s2 + e2(a, b)
    return f.reduce(s1), f.reduce(s2)


def verify_deformation(d: Deformation) -> list[Violation]:
    """Violations of the order-r coefficient equations for r = 0..N.

    The identity label is ``"r=<order>:first"`` or ``"r=<order>:second"``.
    """
    out = []
    if d.base.dim == 0:
        return out
    for r in range(d.order + 1):
        for name, res in zip(("first", "second"), order_residuals(d, r)):
            for idx in np.argwhere(np.any(res != 0, axis=-1)):
                key = tuple(int(i) for i in idx)
                out.append(Violation(f"r={r}:{name}", key, tuple(res[key])))
    return out


def infinitesimal_is_cocycle(d: Deformation) -> bool:
    """The first nonzero d_k lies in Z^3(L, adjoint); vacuous for the null deformation."""
    k = d.first_nonzero()
    if k is None:
        return True
    return is_cocycle3(d.cochain(k))


# ---------------------------------------------------------------------------
# equivalences


@dataclass(frozen=True)
class EquivalenceTransform:
    """phi_t = id + phi_1 t + ... + phi_N t^N; matrices act on column vectors."""
    maps: tuple = dc_field(default_factory=tuple)

    @property
    def order(self):
        return len(self.maps)

    def coefficient(self, field, n, i) -> Matrix:
        if i == 0:
            return Matrix.identity(field, n)
        if i <= self.order:
            return self.maps[i - 1]
        return Matrix.zeros(field, n, n)

    def inverse_series(self, field, n, N) -> list[Matrix]:
        """psi_0 = id, psi_k = -sum_{i=1..k} phi_i psi_{k-i}."""
        psi = [Matrix.identity(field, n)]
        for k in range(1, N + 1):
            acc = Matrix.zeros(field, n, n)
            for i in range(1, k + 1):
                acc = acc + self.coefficient(field, n, i) @ psi[k - i]
            psi.append(-acc)
        return psi

    def compose(self, other: "EquivalenceTransform", field, n, N) -> "EquivalenceTransform":
        """Truncated product self * other (apply other first)."""
        maps = []
        for k in range(1, N + 1):
            acc = Matrix.zeros(field, n, n)
            for i in range(k + 1):
                acc = acc + self.coefficient(field, n, i) @ other.coefficient(field, n, k - i)
            maps.append(acc)
        return EquivalenceTransform(tuple(maps))

    def is_identity(self):
        return all(m.is_zero() for m in self.maps)


def identity_transform(N=0) -> EquivalenceTransform:
    return EquivalenceTransform(())


def apply_equivalence(d: Deformation, phi: EquivalenceTransform) -> Deformation:
    """d'_t = phi_t^-1 o d_t o (phi_t x phi_t x phi_t), truncated at the order of d."""
    f = d.field
    n = d.base.dim
    N = d.order
    ph = [phi.coefficient(f, n, i).to_array() if n else None for i in range(N + 1)]
    psi = [m.to_array() if n else None for m in phi.inverse_series(f, n, N)]
    terms = []
    for r in range(1, N + 1):
        acc = f.zeros((n,) * 4)
        if n:
            for a in range(r + 1):
                for i in range(r - a + 1):
                    rest = r - a - i
                    di = d.coefficient(i)
                    if not np.any(di != 0):
                        continue
                    for p in range(rest + 1):
                        for q in range(rest - p + 1):
                            s = rest - p - q
                            t = einsum("uvwo,ux,vy,wz,ko->xyzk", di, ph[p], ph[q], ph[s], psi[a])
                            acc = acc + t
        terms.append(f.reduce(acc))
    return Deformation(d.base, tuple(terms))


def elementary_transform(field, n, k, f_matrix: Matrix) -> EquivalenceTransform:
    """phi_t = id - f t^k."""
    maps = [Matrix.zeros(field, n, n) for _ in range(k)]
    maps[k - 1] = -f_matrix
    return EquivalenceTransform(tuple(maps))


# ---------------------------------------------------------------------------
# obstructions and extension


class UnverifiedPrefix(ValueError):
    pass


def obstruction(d: Deformation) -> tuple[Cochain, Cochain]:
    """(Ob^1, Ob^2) for extending d from order n to n+1: sum over i+j=n+1 with i,j>0."""
    if verify_deformation(d):
        raise UnverifiedPrefix("deformation equations fail below the requested order")
    r = d.order + 1
    ob1, ob2 = order_residuals(d, r, skip=(0, r))
    rho = adjoint(d.base)
    return Cochain(rho, 5, ob1), Cochain(rho, 5, ob2)


def extend_one_order(d: Deformation) -> Deformation | None:
    """Solve delta3 d_{n+1} = (Ob^1, Ob^2); None when the system is inconsistent."""
    ob1, ob2 = obstruction(d)
    rho = ob1.rep
    M = delta3_matrix(rho)
    x = solve(M, ob1.vector() + ob2.vector())
    if x is None:
        return None
    n = d.base.dim
    term = np.array(list(x), dtype=object).reshape((n,) * 4)
    out = d.extended(term)
    bad = verify_deformation(out)
    if bad:
        raise ArithmeticError(f"solved order {out.order} but {len(bad)} equations fail")
    return out


def rigidity_trivialize(d: Deformation, max_steps: int = 16) -> EquivalenceTransform | None:
    """Compose phi = id - f_k t^k over leading terms d_k = delta1 f_k until d is null."""
    f = d.field
    n = d.base.dim
    N = d.order
    total = EquivalenceTransform(())
    current = d
    rho = adjoint(d.base)
    for _ in range(max_steps + 1):
        k = current.first_nonzero()
        if k is None:
            return total
        x = solve(delta1_matrix(rho), tuple(current.coefficient(k).reshape(-1)))
        if x is None:
            return None
        fk = Matrix.from_rows(f, [[x[i * n + o] for i in range(n)] for o in range(n)], n)
        step = elementary_transform(f, n, k, fk)
        current = apply_equivalence(current, step)
        total = total.compose(step, f, n, N)
    return None
