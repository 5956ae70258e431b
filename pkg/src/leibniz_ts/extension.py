"""Central extensions 0 -> V -> L_c -> L -> 0 and their cocycles.

Central extensions carry no module action, so every cochain here lives over
the trivial representation of L on V.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cohomology import Cochain, cohomologous, require_cocycle3
from .core import TripleSystem, center, is_homomorphism
from .linalg import Matrix, Subspace, einsum, inverse, rank
from .representation import Representation, trivial, twisted_sum_constants


@dataclass(frozen=True)
class CentralExtension:
    total: TripleSystem
    inject: Matrix    # (n+m) x m, the map iota
    project: Matrix   # n x (n+m), the map pi
    base: TripleSystem

    def __post_init__(self):
        bad = extension_problems(self)
        if bad:
            raise ValueError("not a central extension: " + "; ".join(bad))

    @property
    def fiber_dim(self) -> int:
        return self.inject.cols

    @property
    def fiber(self) -> Subspace:
        return Subspace(self.base.field, self.total.dim, [self.inject.column(j) for j in range(self.fiber_dim)])

    def rep(self) -> Representation:
        return trivial(self.base, self.fiber_dim)

    def canonical_section(self) -> Matrix:
        """The section s with pi s = id read off column by column."""
        return section_of(self.project)


def extension_problems(ext: CentralExtension) -> list[str]:
    n, N = ext.base.dim, ext.total.dim
    m = N - n
    out = []
    if ext.inject.shape != (N, m) or ext.project.shape != (n, N):
        return ["shapes of iota/pi do not fit dim total = dim base + dim fiber"]
    if not (ext.project @ ext.inject).is_zero():
        out.append("pi iota != 0")
    if rank(ext.inject) != m:
        out.append("iota is not injective")
    if rank(ext.project) != n:
        out.append("pi is not surjective")
    if not ext.fiber <= center(ext.total):
        out.append("iota(V) is not central")
    if not is_homomorphism(ext.total, ext.base, ext.project):
        out.append("pi is not a homomorphism")
    return out


def section_of(project: Matrix) -> Matrix:
    """A right inverse of a surjective map, built from its pivot columns."""
    from .linalg import solve
    n, N = project.shape
    cols = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        x = solve(project, e)
        if x is None:
            raise ValueError("projection is not surjective")
        cols.append(x)
    return Matrix.from_columns(project.field, cols, N)


def _as_trivial_cochain(L: TripleSystem, m: int, theta) -> Cochain:
    rho = trivial(L, m)
    if isinstance(theta, Cochain):
        if theta.rep != rho:
            # accept any cochain of the right shape and reread it over trivial coefficients
            theta = theta.values
        else:
            return theta
    return Cochain(rho, 3, theta)


def extend_by_cocycle(L: TripleSystem, m: int, theta) -> CentralExtension:
    """L + V with {(x,a),(y,b),(z,c)} = ({x,y,z}, theta(x,y,z))."""
    theta = _as_trivial_cochain(L, m, theta)
    require_cocycle3(theta)
    f = L.field
    n = L.dim
    c = twisted_sum_constants(theta.rep, theta.values)
    names = list(L.basis_names) + [f"c{i}" for i in range(m)]
    total = TripleSystem(f, c, names)
    inject = Matrix.from_columns(f, [[0] * n + [1 if k == j else 0 for k in range(m)] for j in range(m)], n + m)
    project = Matrix.from_rows(f, [[1 if k == i else 0 for k in range(n + m)] for i in range(n)], n + m)
    return CentralExtension(total, inject, project, L)


def _frame_inverse(ext: CentralExtension, s: Matrix) -> Matrix:
    """Inverse of the square matrix [s | iota]."""
    N = ext.total.dim
    cols = [s.column(j) for j in range(s.cols)] + [ext.inject.column(j) for j in range(ext.fiber_dim)]
    inv = inverse(Matrix.from_columns(ext.base.field, cols, N))
    if inv is None:
        raise ValueError("s(L) and iota(V) do not span the total space")
    return inv


def check_section(ext: CentralExtension, s: Matrix) -> None:
    n = ext.base.dim
    if s.shape != (ext.total.dim, n) or ext.project @ s != Matrix.identity(ext.base.field, n):
        raise ValueError("s is not a section of pi")


def cocycle_of(ext: CentralExtension, s: Matrix | None = None) -> Cochain:
    """g with iota g(x,y,z) = {s x, s y, s z} - s{x,y,z}."""
    if s is None:
        s = ext.canonical_section()
    check_section(ext, s)
    f = ext.base.field
    n = ext.base.dim
    S = s.to_array()
    diff = (einsum("ai,bj,ck,abcl->ijkl", S, S, S, ext.total.constants)
            - einsum("ijkq,lq->ijkl", ext.base.constants, S))
    # the difference lies in iota(V); read off its fiber coordinates
    K = _frame_inverse(ext, s).to_array()[n:]
    g = f.reduce(einsum("ol,ijkl->ijko", K, f.reduce(diff)))
    return Cochain(ext.rep(), 3, g)


def equivalent(ext1: CentralExtension, ext2: CentralExtension) -> Matrix | None:
    """phi: total1 -> total2 with phi iota1 = iota2 and pi2 phi = pi1, or None.

    With sections s1, s2 and delta1 f = g2 - g1, phi(s1 x + iota1 a) = s2 x + iota2(a - f(x)).
    """
    if ext1.base != ext2.base:
        raise ValueError("extensions of different base systems")
    if ext1.fiber_dim != ext2.fiber_dim:
        raise ValueError("extensions with different fiber dimensions")
    s1, s2 = ext1.canonical_section(), ext2.canonical_section()
    g1, g2 = cocycle_of(ext1, s1), cocycle_of(ext2, s2)
    fc = cohomologous(g1, g2)
    if fc is None:
        return None
    F = Matrix.from_array(ext1.base.field, fc.values.T) if fc.values.size else Matrix.zeros(ext1.base.field, ext1.fiber_dim, ext1.base.dim)
    image = (s2 - ext2.inject @ F).to_lists()
    N, n = ext1.total.dim, ext1.base.dim
    cols = [[image[r][j] for r in range(N)] for j in range(n)] + [ext2.inject.column(j) for j in range(ext2.fiber_dim)]
    phi = Matrix.from_columns(ext1.base.field, cols, N) @ _frame_inverse(ext1, s1)
    return phi


def is_equivalence(ext1: CentralExtension, ext2: CentralExtension, phi: Matrix) -> bool:
    from .core import is_isomorphism
    return (phi @ ext1.inject == ext2.inject and ext2.project @ phi == ext1.project
            and is_isomorphism(ext1.total, ext2.total, phi))
