"""Representations (r, m, l) of a triple system on a coefficient space V.

Each of ``r, m, l`` is an ``n x n x dimV x dimV`` tensor; ``r[i, j]`` is the
matrix of r(e_i, e_j) acting on column vectors of V.
"""
from __future__ import annotations

import numpy as np

from .core import AxiomError, TripleSystem, Violation, verify_axioms
from .linalg import einsum

# identity labels follow the usual numbering (3)..(12) of the ten module identities
IDENTITIES = tuple(range(3, 13))


class Representation:
    def __init__(self, system: TripleSystem, coeff_dim: int, r, m, l, unchecked=False):
        f = system.field
        n = system.dim
        shape = (n, n, coeff_dim, coeff_dim)
        r, m, l = (f.array(t) if np.size(t) else f.zeros(shape) for t in (r, m, l))
        for name, t in (("r", r), ("m", m), ("l", l)):
            if t.shape != shape:
                raise ValueError(f"{name} has shape {t.shape}, expected {shape}")
            t.flags.writeable = False
        self.system = system
        self.coeff_dim = coeff_dim
        self.r, self.m, self.l = r, m, l
        if not unchecked:
            bad = verify_representation(self)
            if bad:
                raise AxiomError(f"{len(bad)} violations of the representation identities", bad)

    @property
    def field(self):
        return self.system.field

    @property
    def dim(self):
        return self.system.dim

    def replace(self, r=None, m=None, l=None, unchecked=True) -> "Representation":
        return Representation(self.system, self.coeff_dim,
                              self.r if r is None else r,
                              self.m if m is None else m,
                              self.l if l is None else l, unchecked=unchecked)

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return (self.system == other.system and self.coeff_dim == other.coeff_dim
                and all(bool(np.all(a == b)) for a, b in
                        ((self.r, other.r), (self.m, other.m), (self.l, other.l))))

    def __hash__(self):
        return hash((self.system, self.coeff_dim))

    def __repr__(self):
        return f"Representation(dim L={self.dim}, dim V={self.coeff_dim})"


def trivial(L: TripleSystem, coeff_dim: int) -> Representation:
    z = L.field.zeros((L.dim, L.dim, coeff_dim, coeff_dim))
    return Representation(L, coeff_dim, z, z.copy(), z.copy(), unchecked=True)


def adjoint(L: TripleSystem) -> Representation:
    """l(a,b)c = {a,b,c}, m(a,b)c = {a,c,b}, r(a,b)c = {c,a,b}."""
    c = L.constants
    l = einsum("ijpo->ijop", c)
    m = einsum("ipjo->ijop", c)
    r = einsum("pijo->ijop", c)
    return Representation(L, L.dim, r.copy(), m.copy(), l.copy(), unchecked=True)


def dual(L: TripleSystem) -> Representation:
    """Action on L* by (r(b,c)f)(u) = f({u,c,b}), (m(a,c)g)(u) = g({c,u,a}), (l(a,b)h)(u) = h({b,a,u}).

    Functionals are coordinate vectors in the dual basis.
    """
    c = L.constants
    r = einsum("kjiq->ijkq", c)
    m = einsum("jkiq->ijkq", c)
    l = einsum("jikq->ijkq", c)
    return Representation(L, L.dim, r.copy(), m.copy(), l.copy(), unchecked=True)


def _residuals(rho: Representation):
    """The ten identities as tensors indexed (a, b, c, d, out, in)."""
    L = rho.system
    f = L.field
    c = L.constants
    r, m, l = rho.r, rho.m, rho.l

    def prod(x, sx, y, sy):
        # x(sx) y(sy) as composition of operators
        return einsum(f"{sx}op,{sy}pq->abcdoq", x, y)

    def arg(t, inner, outer):
        # t evaluated with a bracket in one argument; inner e.g. "bcd", outer e.g. "a_" with '_' the bracket slot
        spec_t = outer.replace("_", "z") + "oq"
        return einsum(f"{inner}z,{spec_t}->abcdoq", c, t)

    res = {
        3: arg(l, "bcd", "a_") - (arg(l, "abc", "_d") - arg(l, "acb", "_d")
                                  - arg(l, "adb", "_c") + arg(l, "adc", "_b")),
        4: prod(m, "ad", l, "bc") - (arg(m, "abc", "_d") - arg(m, "acb", "_d")
                                     - prod(r, "cd", m, "ab") + prod(r, "bd", m, "ac")),
        5: prod(m, "ad", m, "bc") - (prod(r, "cd", l, "ab") - prod(r, "cd", m, "ab")
                                     - arg(m, "acb", "_d") + prod(r, "bd", l, "ac")),
        6: prod(m, "ad", r, "bc") - (prod(r, "cd", m, "ab") - prod(r, "cd", l, "ab")
                                     - prod(r, "bd", l, "ac") + arg(m, "acb", "_d")),
        7: arg(r, "abc", "_d") - (prod(r, "cd", r, "ab") - prod(r, "cd", r, "ba")
                                  - prod(r, "bd", r, "ca") + prod(r, "ad", r, "cb")),
        8: prod(l, "ab", l, "cd") - (arg(l, "abc", "_d") - arg(l, "abd", "_c")
                                     - prod(r, "cd", l, "ab") + prod(r, "dc", l, "ab")),
        9: prod(l, "ab", m, "cd") - (arg(m, "abc", "_d") - prod(r, "cd", l, "ab")
                                     - arg(l, "abd", "_c") + arg(m, "abd", "_c")),
        10: prod(l, "ab", r, "cd") - (prod(r, "cd", l, "ab") - arg(m, "abc", "_d")
                                      - arg(m, "abd", "_c") + arg(l, "abd", "_c")),
        11: arg(m, "bcd", "a_") - (prod(r, "cd", m, "ab") - prod(r, "bd", m, "ac")
                                   - prod(r, "bc", m, "ad") + prod(r, "cb", m, "ad")),
        12: arg(r, "bcd", "a_") - (prod(r, "cd", r, "ab") - prod(r, "bd", r, "ac")
                                   - prod(r, "bc", r, "ad") + prod(r, "cb", r, "ad")),
    }
    return {k: f.reduce(v) for k, v in res.items()}


def verify_representation(rho: Representation) -> list[Violation]:
    """Violations of the ten module identities on basis 4-tuples, tagged by number."""
    if rho.dim == 0 or rho.coeff_dim == 0:
        return []
    out = []
    for k, res in _residuals(rho).items():
        for idx in np.argwhere(np.any(res != 0, axis=(4, 5))):
            key = tuple(int(i) for i in idx)
            out.append(Violation(f"({k})", key, tuple(res[key].reshape(-1))))
    return out


def is_representation(rho: Representation) -> bool:
    return not verify_representation(rho)


def twisted_sum_constants(rho: Representation, theta=None):
    """Structure constants on L + V with optional 3-cochain twist theta: L^3 -> V.

    {x+u, y+v, z+w} = {x,y,z} + theta(x,y,z) + r(y,z)u + m(x,z)v + l(x,y)w
    """
    L = rho.system
    f = L.field
    n, k = L.dim, rho.coeff_dim
    N = n + k
    c = f.zeros((N, N, N, N))
    c[:n, :n, :n, :n] = L.constants
    if theta is not None:
        c[:n, :n, :n, n:] = theta
    # r(y,z)u : {u, y, z}, entry [n+p, j, k, n+o] = r[j,k,o,p]
    c[n:, :n, :n, n:] = einsum("jkop->pjko", rho.r)
    c[:n, n:, :n, n:] = einsum("ikop->ipko", rho.m)
    c[:n, :n, n:, n:] = einsum("ijop->ijpo", rho.l)
    return c


def semidirect_sum(L: TripleSystem, rho: Representation, unchecked=False) -> TripleSystem:
    """L + V with {x+u,y+v,z+w} = {x,y,z} + r(y,z)u + m(x,z)v + l(x,y)w."""
    if rho.system != L:
        raise ValueError("representation belongs to a different system")
    if not unchecked:
        bad = verify_representation(rho)
        if bad:
            raise AxiomError("representation does not verify", bad)
    names = list(L.basis_names) + [f"v{i}" for i in range(rho.coeff_dim)]
    return TripleSystem(L.field, twisted_sum_constants(rho), names, unchecked=unchecked)


def semidirect_violations(rho: Representation) -> list[Violation]:
    """Axiom violations of L + V without first checking rho."""
    return verify_axioms(semidirect_sum(rho.system, rho, unchecked=True))
