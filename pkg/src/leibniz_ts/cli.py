"""Command line interface.

Every command prints one JSON report on stdout (sorted keys) and logs to
stderr.  Exit codes: 0 success, 1 negative mathematical verdict, 2 input error.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import cohomology, core, io
from .core import AxiomError, TripleSystem, verify_axioms

log = logging.getLogger("leibniz_ts")

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _system(path, require_valid=True) -> TripleSystem:
    L = io.system_from_json(io.load_json(path))
    if require_valid:
        bad = verify_axioms(L)
        if bad:
            raise InputError(f"{path}: system violates the identities ({len(bad)} basis 5-tuples); run 'verify'")
    return L


def _subspace_json(field, S):
    return [[field.format(x) for x in v] for v in S.basis]


def _violations(field, bad, limit=50):
    return {"count": len(bad), "violations": [v.as_dict(field) for v in bad[:limit]]}


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args):
    L = _system(args.system, require_valid=False)
    bad = verify_axioms(L)
    report = {"dim": L.dim, "field": L.field.name, "ok": not bad, **_violations(L.field, bad, args.limit)}
    return (EXIT_OK if not bad else EXIT_NEGATIVE), report


def _coefficients(args, L):
    from .representation import adjoint, dual, trivial
    kind = args.coefficients
    if kind == "trivial":
        return trivial(L, args.dim)
    if kind == "adjoint":
        return adjoint(L)
    if kind == "dual":
        return dual(L)
    return io.representation_from_json(io.load_json(kind), L)


def cmd_cohomology(args):
    from .representation import verify_representation
    L = _system(args.system)
    rho = _coefficients(args, L)
    s = cohomology.summary(rho, emit_basis=args.emit_basis)
    report = {k: s[k] for k in ("z1", "z3", "b3", "h1", "h3")}
    report["coefficients"] = args.coefficients if args.coefficients in ("trivial", "adjoint", "dual") else "file"
    report["coeff_dim"] = rho.coeff_dim
    report["representation_verified"] = not verify_representation(rho)
    if args.emit_basis:
        report["bases"] = {k: [io.cochain_to_json(L.field, g.values, g.arity) for g in v]
                           for k, v in s["bases"].items()}
    return EXIT_OK, report


def cmd_extend(args):
    from .extension import extend_by_cocycle
    L = _system(args.system)
    theta = io.cochain_from_json(io.load_json(args.cocycle), L.field, L.dim, 3)
    m = theta.shape[-1]
    try:
        ext = extend_by_cocycle(L, m, theta)
    except cohomology.CocycleError as e:
        return EXIT_NEGATIVE, {"ok": False, "reason": str(e)}
    f = L.field
    return EXIT_OK, {
        "ok": True,
        "total": io.system_to_json(ext.total),
        "iota": io.matrix_to_json(f, ext.inject),
        "pi": io.matrix_to_json(f, ext.project),
        "fiber_central": ext.fiber <= core.center(ext.total),
    }


def cmd_tstar(args):
    from .quadratic import check_quadratic
    from .tstar import cyclic_condition, tstar_extend
    L = _system(args.system)
    f = L.field
    theta = None
    if args.theta:
        theta = io.cochain_from_json(io.load_json(args.theta), f, L.dim, 3, L.dim)
    T = tstar_extend(L, theta, unchecked=True)
    d1, d2 = cohomology.delta3(T.theta)
    is_cocycle = d1.is_zero() and d2.is_zero()
    bad = verify_axioms(T.total)
    report = {
        "base": io.system_to_json(L),
        "theta": io.cochain_to_json(f, T.theta.values, 3),
        "total": io.system_to_json(T.total),
        "gram": io.matrix_to_json(f, T.form.gram),
        "theta_is_dual_cocycle": is_cocycle,
        "axioms": _violations(f, bad),
        "cyclic": cyclic_condition(L, T.theta),
    }
    rep = check_quadratic(T.total, T.form)
    report["invariance"] = rep
    report["quadratic"] = all(rep.values()) and not bad
    ok = is_cocycle and not bad
    return (EXIT_OK if ok else EXIT_NEGATIVE), report


def cmd_symplectic(args):
    from .quadratic import check_quadratic
    from .symplectic import find_invertible_skewsymmetric_derivation, symplectic_from_derivation
    L = _system(args.system)
    f = L.field
    B = io.form_from_json(io.load_json(args.form), f, L.dim)
    rep = check_quadratic(L, B)
    if not all(rep.values()):
        raise InputError(f"form is not quadratic on this system: {rep}")
    D = find_invertible_skewsymmetric_derivation(L, B, args.budget, args.seed)
    report = {"exists": D is not None, "seed": args.seed, "budget": args.budget,
              "witness_D": None, "omega": None}
    if D is not None:
        report["witness_D"] = io.matrix_to_json(f, D)
        report["omega"] = io.matrix_to_json(f, symplectic_from_derivation(L, B, D).gram)
    return (EXIT_OK if D is not None else EXIT_NEGATIVE), report


def cmd_series(args):
    from .quadratic import series_orthogonality_table
    L = _system(args.system)
    f = L.field
    desc = [core.central_descending(L, r) for r in range(args.rmax + 1)]
    asc = [core.central_ascending(L, r) for r in range(args.rmax + 1)]
    report = {
        "descending": [_subspace_json(f, S) for S in desc],
        "ascending": [_subspace_json(f, S) for S in asc],
        "descending_dims": [S.dim for S in desc],
        "ascending_dims": [S.dim for S in asc],
        "nilpotent": core.is_nilpotent(L),
    }
    if args.form:
        B = io.form_from_json(io.load_json(args.form), f, L.dim)
        if not B.is_nondegenerate():
            raise InputError("form is degenerate")
        table = series_orthogonality_table(L, B, args.rmax)
        report["orthogonality"] = [table[r] for r in range(args.rmax + 1)]
        return (EXIT_OK if all(table.values()) else EXIT_NEGATIVE), report
    return EXIT_OK, report


def cmd_deform(args):
    from .deformation import (apply_equivalence, extend_one_order, infinitesimal_is_cocycle,
                              rigidity_trivialize, verify_deformation)
    L = _system(args.system)
    f = L.field
    d = io.deformation_from_json(io.load_json(args.terms), base=L)
    bad = verify_deformation(d)
    report = {"input_order": d.order, "input_violations": _violations(f, bad),
              "infinitesimal_is_cocycle": infinitesimal_is_cocycle(d)}
    if bad:
        report["ok"] = False
        return EXIT_NEGATIVE, report
    if args.trivialize:
        T = rigidity_trivialize(d, max_steps=max(d.order, 1))
        report["ok"] = T is not None
        if T is not None:
            report["transform"] = [io.matrix_to_json(f, m) for m in T.maps]
            report["trivialized"] = apply_equivalence(d, T).first_nonzero() is None
        return (EXIT_OK if T is not None else EXIT_NEGATIVE), report
    target = args.extend_to
    if target < d.order:
        raise InputError(f"--extend-to {target} is below the input order {d.order}")
    cur = d
    while cur.order < target:
        nxt = extend_one_order(cur)
        if nxt is None:
            report.update(ok=False, obstructed_at=cur.order + 1, deformation=io.deformation_to_json(cur))
            return EXIT_NEGATIVE, report
        cur = nxt
    report.update(ok=True, deformation=io.deformation_to_json(cur))
    return EXIT_OK, report


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leibniz-ts", description="Exact computations for Leibniz triple systems.")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized searches (default 0)")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", help="check the two defining identities")
    s.add_argument("system")
    s.add_argument("--limit", type=int, default=50, help="max violations to list")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("cohomology", help="dimensions of Z1, Z3, B3, H1, H3")
    s.add_argument("system")
    s.add_argument("--coefficients", default="adjoint", help="trivial, adjoint, dual, or a representation file")
    s.add_argument("--dim", type=int, default=1, help="dimension of trivial coefficients")
    s.add_argument("--emit-basis", action="store_true")
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("extend", help="central extension by a trivial-coefficient 3-cocycle")
    s.add_argument("system")
    s.add_argument("--cocycle", required=True)
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("tstar", help="T*-extension by a dual-coefficient 3-cochain")
    s.add_argument("system")
    s.add_argument("--theta")
    s.set_defaults(func=cmd_tstar)

    s = sub.add_parser("symplectic", help="search an invertible skewsymmetric derivation")
    s.add_argument("system")
    s.add_argument("--form", required=True)
    s.add_argument("--budget", type=int, default=200)
    s.set_defaults(func=cmd_symplectic)

    s = sub.add_parser("series", help="central series and their orthogonality")
    s.add_argument("system")
    s.add_argument("--form")
    s.add_argument("--rmax", type=int, default=4)
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("deform", help="extend or trivialize a truncated deformation")
    s.add_argument("system")
    s.add_argument("--terms", required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--extend-to", type=int)
    g.add_argument("--trivialize", action="store_true")
    s.set_defaults(func=cmd_deform)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        code, report = args.func(args)
    except (io.ParseError, InputError) as e:
        log.error("%s", e)
        sys.stdout.write(io.dumps({"error": str(e)}))
        return EXIT_INPUT
    except AxiomError as e:
        log.error("%s", e)
        sys.stdout.write(io.dumps({"error": str(e)}))
        return EXIT_INPUT
    report["command"] = args.command
    report["seed"] = args.seed
    sys.stdout.write(io.dumps(report))
    log.info("%s finished with exit code %d", args.command, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
