"""JSON documents for systems, cochains, forms, representations and deformations.

Scalars are strings ("p/q", or "p" when the denominator is 1) so that parsing
is exact.  Emission sorts keys and entries, so equal objects give equal bytes.
"""
from __future__ import annotations

import json

import numpy as np

from .core import TripleSystem
from .linalg import Field, Matrix, parse_field


class ParseError(ValueError):
    def __init__(self, message, location="$"):
        super().__init__(f"{location}: {message}")
        self.location = location


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", str(path)) from None
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON: {e.msg}", f"{path}:{e.lineno}:{e.colno}") from None


def _scalar(field: Field, x, loc):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ParseError(f"expected a scalar string, got {x!r}", loc)
    try:
        return field(x)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad scalar {x!r}: {e}", loc) from None


def _index(x, bound, loc):
    if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < bound:
        raise ParseError(f"index {x!r} out of range 0..{bound - 1}", loc)
    return x


def _require(doc, key, loc, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"missing key {key!r}", loc)
    v = doc[key]
    if kind is not None and not isinstance(v, kind):
        raise ParseError(f"{key!r} has the wrong type", f"{loc}.{key}")
    return v


# ---------------------------------------------------------------------------
# systems


def system_to_json(L: TripleSystem) -> dict:
    f = L.field
    brackets = []
    n = L.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                out = [[f.format(L.constants[i, j, k, l]), l] for l in range(n) if L.constants[i, j, k, l] != 0]
                if out:
                    brackets.append([i, j, k, out])
    return {"field": f.name, "dim": n, "basis": list(L.basis_names), "brackets": brackets}


def system_from_json(doc, unchecked=True, loc="$") -> TripleSystem:
    """Parse a SystemFile document; axioms are checked by the caller unless ``unchecked=False``."""
    if not isinstance(doc, dict):
        raise ParseError("system document must be an object", loc)
    try:
        field = parse_field(_require(doc, "field", loc, str))
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(str(e), f"{loc}.field") from None
    n = _require(doc, "dim", loc, int)
    if isinstance(n, bool) or n < 0:
        raise ParseError("dim must be a non-negative integer", f"{loc}.dim")
    basis = doc.get("basis")
    if basis is not None and (not isinstance(basis, list) or len(basis) != n
                              or not all(isinstance(b, str) for b in basis)):
        raise ParseError(f"basis must be a list of {n} names", f"{loc}.basis")
    c = field.zeros((n, n, n, n))
    for a, entry in enumerate(_require(doc, "brackets", loc, list)):
        eloc = f"{loc}.brackets[{a}]"
        if not isinstance(entry, list) or len(entry) != 4 or not isinstance(entry[3], list):
            raise ParseError("expected [i, j, k, [[coeff, l], ...]]", eloc)
        i, j, k = (_index(entry[t], n, f"{eloc}[{t}]") for t in range(3))
        for b, term in enumerate(entry[3]):
            tloc = f"{eloc}[3][{b}]"
            if not isinstance(term, list) or len(term) != 2:
                raise ParseError("expected [coeff, l]", tloc)
            v = _scalar(field, term[0], f"{tloc}[0]")
            l = _index(term[1], n, f"{tloc}[1]")
            c[i, j, k, l] = field.reduce_scalar(c[i, j, k, l] + v)
    return TripleSystem(field, c, basis, unchecked=unchecked)


# ---------------------------------------------------------------------------
# tensors as sparse entry lists


def tensor_to_entries(field: Field, t) -> list:
    t = np.asarray(t, dtype=object)
    return [[*(int(i) for i in idx), field.format(t[tuple(idx)])] for idx in np.argwhere(t != 0)]


def entries_to_tensor(field: Field, entries, shape, loc="$.entries"):
    if not isinstance(entries, list):
        raise ParseError("entries must be a list", loc)
    t = field.zeros(shape)
    for a, e in enumerate(entries):
        eloc = f"{loc}[{a}]"
        if not isinstance(e, list) or len(e) != len(shape) + 1:
            raise ParseError(f"expected {len(shape)} indices and a scalar", eloc)
        idx = tuple(_index(e[t_], shape[t_], f"{eloc}[{t_}]") for t_ in range(len(shape)))
        t[idx] = field.reduce_scalar(t[idx] + _scalar(field, e[-1], f"{eloc}[{len(shape)}]"))
    return t


def cochain_to_json(field: Field, values, arity: int) -> dict:
    values = np.asarray(values, dtype=object)
    return {"arity": arity, "coeff_dim": int(values.shape[-1]), "entries": tensor_to_entries(field, values)}


def cochain_from_json(doc, field: Field, n: int, arity: int = 3, coeff_dim=None, loc="$"):
    """Values tensor of shape (n,)*arity + (m,); m from the document, else ``coeff_dim``."""
    if not isinstance(doc, dict):
        raise ParseError("cochain document must be an object", loc)
    if doc.get("arity", arity) != arity:
        raise ParseError(f"expected a {arity}-cochain", f"{loc}.arity")
    m = doc.get("coeff_dim", coeff_dim)
    if m is None or isinstance(m, bool) or not isinstance(m, int) or m < 0:
        raise ParseError("coeff_dim missing or invalid", f"{loc}.coeff_dim")
    if coeff_dim is not None and m != coeff_dim:
        raise ParseError(f"coeff_dim must be {coeff_dim}", f"{loc}.coeff_dim")
    return entries_to_tensor(field, _require(doc, "entries", loc), (n,) * arity + (m,), f"{loc}.entries")


# ---------------------------------------------------------------------------
# forms, matrices, representations


def matrix_to_json(field: Field, M) -> list:
    rows = M.to_lists() if isinstance(M, Matrix) else np.asarray(M, dtype=object).tolist()
    return [[field.format(x) for x in r] for r in rows]


def matrix_from_json(doc, field: Field, shape, loc="$") -> Matrix:
    rows, cols = shape
    if not isinstance(doc, list) or len(doc) != rows:
        raise ParseError(f"expected {rows} rows", loc)
    out = []
    for i, r in enumerate(doc):
        if not isinstance(r, list) or len(r) != cols:
            raise ParseError(f"expected {cols} entries", f"{loc}[{i}]")
        out.append([_scalar(field, x, f"{loc}[{i}][{j}]") for j, x in enumerate(r)])
    return Matrix.from_rows(field, out, cols)


def form_to_json(B) -> dict:
    return {"gram": matrix_to_json(B.field, B.gram)}


def form_from_json(doc, field: Field, n: int, loc="$"):
    from .quadratic import BilinearForm
    gram = matrix_from_json(_require(doc, "gram", loc), field, (n, n), f"{loc}.gram")
    return BilinearForm(field, gram)


def representation_to_json(rho) -> dict:
    f = rho.field
    return {"coeff_dim": rho.coeff_dim, "r": tensor_to_entries(f, rho.r),
            "m": tensor_to_entries(f, rho.m), "l": tensor_to_entries(f, rho.l)}


def representation_from_json(doc, L: TripleSystem, loc="$"):
    from .representation import Representation
    m = _require(doc, "coeff_dim", loc, int)
    shape = (L.dim, L.dim, m, m)
    parts = [entries_to_tensor(L.field, _require(doc, k, loc), shape, f"{loc}.{k}") for k in ("r", "m", "l")]
    return Representation(L, m, *parts, unchecked=True)


# ---------------------------------------------------------------------------
# deformations


def deformation_to_json(d) -> dict:
    f = d.field
    return {"base": system_to_json(d.base), "order": d.order,
            "terms": [cochain_to_json(f, t, 3) for t in d.terms]}


def deformation_from_json(doc, base: TripleSystem | None = None, loc="$"):
    """A bundle {base?, order, terms}; ``base`` overrides or supplies the base system."""
    from .deformation import Deformation
    if not isinstance(doc, dict):
        raise ParseError("deformation document must be an object", loc)
    if base is None:
        base = system_from_json(_require(doc, "base", loc), loc=f"{loc}.base")
    terms = _require(doc, "terms", loc, list)
    order = doc.get("order", len(terms))
    if order != len(terms):
        raise ParseError(f"order {order} but {len(terms)} terms", f"{loc}.order")
    n = base.dim
    vals = [cochain_from_json(t, base.field, n, 3, n, f"{loc}.terms[{a}]") for a, t in enumerate(terms)]
    return Deformation(base, tuple(vals))
