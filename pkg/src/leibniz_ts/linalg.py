"""Exact dense/sparse linear algebra over the rationals and prime fields.

Everything downstream (cocycle spaces, ideals, centres, derivations) is a
rank computation, so nothing here ever touches floating point.

Over QQ the elimination is fraction free: each row is scaled to a primitive
integer row, combined with integer multipliers and stripped of its content
after every step.  Over GF(p) rows are kept monic.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from heapq import heapify, heappop, heappush
from math import gcd, lcm

import numpy as np


class FieldMismatch(ValueError):
    """Raised when operands live over different fields."""


class Field:
    characteristic = 0

    def __call__(self, x):
        raise NotImplementedError

    def array(self, data):
        """Object array with every entry coerced into the field."""
        arr = np.array(data, dtype=object)
        flat = arr.reshape(-1)
        for i, x in enumerate(flat):
            flat[i] = self(x)
        return flat.reshape(arr.shape)

    def zeros(self, shape):
        arr = np.empty(shape, dtype=object)
        arr.fill(0)
        return arr

    def reduce(self, arr):
        return arr

    def inv(self, x):
        raise NotImplementedError

    def div(self, a, b):
        return self.reduce_scalar(a * self.inv(b))

    def reduce_scalar(self, x):
        return x

    def format(self, x) -> str:
        raise NotImplementedError

    def check(self, other: "Field") -> None:
        if other != self:
            raise FieldMismatch(f"{self} vs {other}")


class Rationals(Field):
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, str):
            return self(Fraction(x.strip()))
        if isinstance(x, (np.integer,)):
            return int(x)
        raise FieldMismatch(f"cannot interpret {x!r} as a rational")

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self(Fraction(1) / x)

    def reduce_scalar(self, x):
        return self(x)

    def format(self, x) -> str:
        x = Fraction(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    @property
    def name(self) -> str:
        return "Q"


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or p >= 2**31 or not _is_prime(p):
            raise ValueError(f"{p} is not a prime below 2**31")
        self.p = p
        self.characteristic = p

    def __call__(self, x):
        p = self.p
        if isinstance(x, (bool, int, np.integer)):
            return int(x) % p
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise FieldMismatch(f"{x} has no image in GF({p})")
            return x.numerator * pow(x.denominator, -1, p) % p
        if isinstance(x, str):
            return self(Fraction(x.strip()))
        raise FieldMismatch(f"cannot interpret {x!r} in GF({p})")

    def reduce(self, arr):
        return arr % self.p

    def reduce_scalar(self, x):
        return x % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(int(x), -1, self.p)

    def format(self, x) -> str:
        return str(int(x) % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    @property
    def name(self) -> str:
        return f"Fp:{self.p}"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(name: str) -> Field:
    name = name.strip()
    if name in ("Q", "QQ"):
        return QQ
    if name.startswith("Fp:"):
        return GF(int(name[3:]))
    raise ValueError(f"unknown field {name!r}")


# ---------------------------------------------------------------------------
# exact tensor contraction

_INT64_BOUND = 2 ** 62


def _as_integers(arr):
    """(integer object array, common denominator d) with arr == ints / d."""
    arr = np.asarray(arr)
    if arr.dtype != object:
        return arr.astype(object), 1
    flat = arr.reshape(-1)
    den = 1
    for x in flat:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = lcm(den, x.denominator)
    ints = np.empty(flat.shape, dtype=object)
    for i, x in enumerate(flat):
        ints[i] = int(x * den) if den != 1 else int(x)
    return ints.reshape(arr.shape), den


def einsum(subscripts: str, *operands):
    """np.einsum for exact entries (ints and Fractions), returning an object array.

    Denominators are cleared per operand.  When a magnitude bound shows that no
    partial sum can overflow, the contraction runs in int64; otherwise it runs
    on Python integers.  Field reduction is left to the caller.
    """
    ints, den = [], 1
    for op in operands:
        a, d = _as_integers(op)
        ints.append(a)
        den *= d
    inputs, output = subscripts.replace(" ", "").split("->")
    sizes = {}
    for spec, a in zip(inputs.split(","), ints):
        sizes.update(zip(spec, a.shape))
    out_shape = tuple(sizes[c] for c in output)
    if any(a.size == 0 for a in ints):
        res = np.zeros(out_shape, dtype=object)
        res[...] = 0
        return res if out_shape else res.item()
    bound = 1
    for c in set(sizes) - set(output):
        bound *= sizes[c]
    for a in ints:
        bound *= max(abs(int(x)) for x in a.reshape(-1))
    if bound == 0:
        res = np.empty(out_shape, dtype=object)
        res[...] = 0
        return res if out_shape else res.item()
    if bound < _INT64_BOUND:
        res = np.einsum(subscripts, *[a.astype(np.int64) for a in ints], optimize=len(ints) > 2)
        res = np.asarray(res).astype(object)
    else:
        res = np.asarray(np.einsum(subscripts, *ints, optimize=len(ints) > 2), dtype=object)
    if den != 1:
        # einsum may hand back a strided view; reshape would then copy
        res = res.copy(order="C")
        flat = res.reshape(-1)
        for i, x in enumerate(flat):
            q = Fraction(int(x), den)
            flat[i] = q.numerator if q.denominator == 1 else q
    return res if res.shape else res.item()


# ---------------------------------------------------------------------------
# Matrices (sparse rows, immutable)


class Matrix:
    """Immutable matrix; rows are stored as ``{col: nonzero value}``."""

    __slots__ = ("field", "rows", "cols", "_data")

    def __init__(self, field: Field, rows: int, cols: int, data=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [{} for _ in range(rows)]
        if len(data) != rows:
            raise ValueError("row count mismatch")
        clean = []
        for row in data:
            r = {}
            for j, v in row.items():
                if not 0 <= j < cols:
                    raise IndexError(f"column {j} out of range")
                v = field(v)
                if v != 0:
                    r[j] = v
            clean.append(r)
        self._data = tuple(clean)

    @classmethod
    def _raw(cls, field, rows, cols, data):
        m = object.__new__(cls)
        m.field, m.rows, m.cols, m._data = field, rows, cols, tuple(data)
        return m

    @classmethod
    def from_rows(cls, field: Field, rows, cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(field, len(rows), cols, [{j: v for j, v in enumerate(r) if v != 0} for r in rows])

    @classmethod
    def from_columns(cls, field: Field, columns, rows: int) -> "Matrix":
        data = [{} for _ in range(rows)]
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length mismatch")
            for i, v in enumerate(col):
                if v != 0:
                    data[i][j] = v
        return cls(field, rows, len(columns), data)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls._raw(field, rows, cols, [{} for _ in range(rows)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        one = field(1)
        return cls._raw(field, n, n, [{i: one} for i in range(n)])

    @classmethod
    def from_array(cls, field: Field, arr) -> "Matrix":
        arr = np.asarray(arr, dtype=object)
        return cls.from_rows(field, arr.tolist(), arr.shape[1])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def row(self, i: int) -> dict:
        return dict(self._data[i])

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i].get(j, 0)

    def to_lists(self):
        out = []
        for r in self._data:
            line = [0] * self.cols
            for j, v in r.items():
                line[j] = v
            out.append(line)
        return out

    def to_array(self):
        arr = self.field.zeros((self.rows, self.cols))
        for i, r in enumerate(self._data):
            for j, v in r.items():
                arr[i, j] = v
        return arr

    def column(self, j: int) -> tuple:
        return tuple(r.get(j, 0) for r in self._data)

    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    def is_zero(self) -> bool:
        return all(not r for r in self._data)

    @property
    def T(self) -> "Matrix":
        data = [{} for _ in range(self.cols)]
        for i, r in enumerate(self._data):
            for j, v in r.items():
                data[j][i] = v
        return Matrix._raw(self.field, self.cols, self.rows, data)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self._data == other._data)

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(r.items())) for r in self._data)))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.to_lists()!r})"

    def _combine(self, other, sign):
        self.field.check(other.field)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        red = self.field.reduce_scalar
        data = []
        for a, b in zip(self._data, other._data):
            r = dict(a)
            for j, v in b.items():
                nv = red(r.get(j, 0) + sign * v)
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
            data.append(r)
        return Matrix._raw(self.field, self.rows, self.cols, data)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        red = self.field.reduce_scalar
        return Matrix._raw(self.field, self.rows, self.cols,
                           [{j: red(-v) for j, v in r.items()} for r in self._data])

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        red = self.field.reduce_scalar
        if c == 0:
            return Matrix.zeros(self.field, self.rows, self.cols)
        return Matrix._raw(self.field, self.rows, self.cols,
                           [{j: red(c * v) for j, v in r.items()} for r in self._data])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            self.field.check(other.field)
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            red = self.field.reduce_scalar
            odata = other._data
            data = []
            for r in self._data:
                acc = {}
                for k, v in r.items():
                    for j, w in odata[k].items():
                        acc[j] = acc.get(j, 0) + v * w
                data.append({j: x for j, x in ((j, red(x)) for j, x in acc.items()) if x})
            return Matrix._raw(self.field, self.rows, other.cols, data)
        return self.apply(other)

    def apply(self, vec) -> tuple:
        """Matrix times column vector."""
        vec = tuple(vec)
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} for {self.shape} matrix")
        red = self.field.reduce_scalar
        return tuple(red(sum((v * vec[j] for j, v in r.items()), 0)) for r in self._data)

    def stack(self, other: "Matrix") -> "Matrix":
        """Vertical concatenation."""
        self.field.check(other.field)
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return Matrix._raw(self.field, self.rows + other.rows, self.cols, self._data + other._data)


# ---------------------------------------------------------------------------
# Elimination engine


class _Echelon:
    """Incremental row echelon form of a growing set of rows.

    Pivot rows are kept with distinct leading columns; a new row is reduced
    against the pivots in increasing column order and becomes a pivot itself
    if anything survives.
    """

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.pivots: dict[int, dict] = {}
        self.order: list[int] = []  # pivot columns in insertion order
        self._modular = field.characteristic != 0
        self._p = field.characteristic

    def _prepare(self, row):
        if self._modular:
            p = self._p
            return {j: v % p for j, v in row.items() if v % p}
        den = 1
        for v in row.values():
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        if den == 1:
            out = {j: int(v) for j, v in row.items() if v}
        else:
            out = {j: int(v * den) for j, v in row.items() if v}
        return _strip(out)

    def reduce(self, row):
        """Return the remainder of ``row`` (sparse dict) modulo the pivots."""
        row = self._prepare(row)
        pivots = self.pivots
        heap = [j for j in row if j in pivots]
        heapify(heap)
        if self._modular:
            p = self._p
            while heap:
                c = heappop(heap)
                b = row.get(c)
                if not b:
                    continue
                for k, v in pivots[c].items():
                    old = row.get(k)
                    nv = ((old or 0) - b * v) % p
                    if nv:
                        row[k] = nv
                        if old is None and k in pivots:
                            heappush(heap, k)
                    elif old is not None:
                        del row[k]
            return row
        while heap:
            c = heappop(heap)
            b = row.get(c)
            if not b:
                continue
            prow = pivots[c]
            a = prow[c]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            if fa != 1:
                for k in row:
                    row[k] *= fa
            for k, v in prow.items():
                old = row.get(k)
                nv = (old or 0) - fb * v
                if nv:
                    row[k] = nv
                    if old is None and k in pivots:
                        heappush(heap, k)
                elif old is not None:
                    del row[k]
            row = _strip(row)
        return row

    def add(self, row) -> int | None:
        """Insert a row; returns the new pivot column or None if dependent."""
        rem = self.reduce(row)
        if not rem:
            return None
        c = min(rem)
        if self._modular:
            p = self._p
            inv = pow(rem[c], -1, p)
            rem = {k: v * inv % p for k, v in rem.items()}
        self.pivots[c] = rem
        self.order.append(c)
        return c

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduced_rows(self) -> list[tuple[int, dict]]:
        """Fully reduced echelon rows, sorted by pivot, with field entries and unit pivots."""
        cols = sorted(self.pivots)
        rows = {c: dict(self.pivots[c]) for c in cols}
        if self._modular:
            p = self._p
            for idx in range(len(cols) - 1, -1, -1):
                cj = cols[idx]
                pj = rows[cj]
                for ci in cols[:idx]:
                    ri = rows[ci]
                    b = ri.get(cj)
                    if not b:
                        continue
                    for k, v in pj.items():
                        nv = (ri.get(k, 0) - b * v) % p
                        if nv:
                            ri[k] = nv
                        else:
                            ri.pop(k, None)
            return [(c, rows[c]) for c in cols]
        for idx in range(len(cols) - 1, -1, -1):
            cj = cols[idx]
            pj = rows[cj]
            a = pj[cj]
            for ci in cols[:idx]:
                ri = rows[ci]
                b = ri.get(cj)
                if not b:
                    continue
                g = gcd(a, b)
                fa, fb = a // g, b // g
                new = {k: v * fa for k, v in ri.items()}
                for k, v in pj.items():
                    nv = new.get(k, 0) - fb * v
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                rows[ci] = _strip(new)
        out = []
        for c in cols:
            r = rows[c]
            lead = r[c]
            out.append((c, {k: QQ(Fraction(v, lead)) for k, v in r.items()}))
        return out


def _strip(row: dict) -> dict:
    """Divide an integer row by its content, making the leading entry positive."""
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if row[min(row)] < 0:
        g = -g
    if g != 1:
        row = {k: v // g for k, v in row.items()}
    return row


def _echelon_of(m: Matrix) -> _Echelon:
    ech = _Echelon(m.field, m.cols)
    for r in m._data:
        if r:
            ech.add(r)
    return ech


def rref(m: Matrix):
    """Reduced row echelon form and the (strictly increasing) pivot columns."""
    rows = _echelon_of(m).reduced_rows()
    pivots = [c for c, _ in rows]
    data = [r for _, r in rows] + [{} for _ in range(m.rows - len(rows))]
    return Matrix._raw(m.field, m.rows, m.cols, data), pivots


def rank(m: Matrix) -> int:
    return _echelon_of(m).rank


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of the null space, one vector per free column (in column order)."""
    return _kernel_from_rows(m.field, m.cols, _echelon_of(m).reduced_rows())


def _kernel_from_rows(field, ncols, rows):
    pivot_cols = {c for c, _ in rows}
    red = field.reduce_scalar
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        v = [0] * ncols
        v[f] = field(1)
        for c, r in rows:
            x = r.get(f)
            if x:
                v[c] = red(-x)
        basis.append(tuple(v))
    return basis


def image_basis(m: Matrix) -> list[tuple]:
    """Columns of ``m`` at the pivot positions: a basis of the column space."""
    _, pivots = rref(m)
    return [m.column(j) for j in pivots]


def solve(m: Matrix, b) -> tuple | None:
    """One solution of ``m x = b`` (free variables zero), or None."""
    b = [m.field(x) for x in b]
    if len(b) != m.rows:
        raise ValueError("right-hand side length mismatch")
    n = m.cols
    ech = _Echelon(m.field, n + 1)
    for r, bi in zip(m._data, b):
        row = dict(r)
        if bi:
            row[n] = bi
        if row:
            ech.add(row)
    if n in ech.pivots:
        return None
    x = [0] * n
    for c, r in ech.reduced_rows():
        x[c] = r.get(n, 0)
    return tuple(x)


def det(m: Matrix):
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    f = m.field
    a = [[f(x) for x in row] for row in m.to_lists()]
    n = len(a)
    d = f(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return f(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = f.reduce_scalar(-d)
        d = f.reduce_scalar(d * a[c][c])
        inv = f.inv(a[c][c])
        for i in range(c + 1, n):
            if a[i][c] != 0:
                k = f.reduce_scalar(a[i][c] * inv)
                a[i] = [f.reduce_scalar(x - k * y) for x, y in zip(a[i], a[c])]
    return d


def inverse(m: Matrix) -> Matrix | None:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    one = m.field(1)
    aug = Matrix._raw(m.field, n, 2 * n, [{**r, n + i: one} for i, r in enumerate(m._data)])
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return Matrix._raw(m.field, n, n,
                       [{j - n: v for j, v in r.row(i).items() if j >= n} for i in range(n)])


# ---------------------------------------------------------------------------
# Subspaces


class Subspace:
    """Subspace of F^n stored by its reduced echelon basis (syntactic equality)."""

    __slots__ = ("field", "ambient", "basis")

    def __init__(self, field: Field, ambient: int, vectors=()):
        self.field = field
        self.ambient = ambient
        ech = _Echelon(field, ambient)
        for v in vectors:
            v = tuple(v)
            if len(v) != ambient:
                raise ValueError(f"vector of length {len(v)} in ambient {ambient}")
            row = {j: field(x) for j, x in enumerate(v) if x != 0}
            if row:
                ech.add(row)
        self.basis = tuple(_dense(r, ambient) for _, r in ech.reduced_rows())

    @classmethod
    def zero(cls, field, n):
        return cls(field, n)

    @classmethod
    def full(cls, field, n):
        return cls(field, n, [_unit(field, n, i) for i in range(n)])

    @classmethod
    def span(cls, field, n, vectors):
        return cls(field, n, vectors)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    def _echelon(self):
        ech = _Echelon(self.field, self.ambient)
        for v in self.basis:
            ech.add({j: x for j, x in enumerate(v) if x != 0})
        return ech

    def contains(self, v) -> bool:
        v = tuple(v)
        if len(v) != self.ambient:
            raise ValueError("ambient mismatch")
        row = {j: self.field(x) for j, x in enumerate(v) if x != 0}
        return not self._echelon().reduce(row)

    __contains__ = contains

    def _check(self, other):
        self.field.check(other.field)
        if self.ambient != other.ambient:
            raise ValueError("ambient dimension mismatch")

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        ech = other._echelon()
        return all(not ech.reduce({j: x for j, x in enumerate(v) if x != 0}) for v in self.basis)

    def __ge__(self, other):
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field == other.field and self.ambient == other.ambient
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.field, self.ambient, self.basis + other.basis)

    def annihilator(self) -> "Subspace":
        """{w : w . v = 0 for all basis v} for the standard dot product."""
        m = Matrix.from_rows(self.field, self.basis, self.ambient)
        return Subspace(self.field, self.ambient, kernel_basis(m))

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return (self.annihilator() + other.annihilator()).annihilator()

    __and__ = intersection

    def matrix(self) -> Matrix:
        """Basis vectors as rows."""
        return Matrix.from_rows(self.field, self.basis, self.ambient)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, basis={[list(b) for b in self.basis]})"


def _dense(row: dict, n: int) -> tuple:
    v = [0] * n
    for j, x in row.items():
        v[j] = x
    return tuple(v)


def _unit(field, n, i):
    v = [0] * n
    v[i] = field(1)
    return tuple(v)
