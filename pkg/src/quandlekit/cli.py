"""Command-line front end.

Exit codes: 0 for success / a true answer, 1 for a false answer or an
exhausted search, 2 for errors.  Results go to stdout, diagnostics to
stderr.
"""

from __future__ import annotations

import argparse
import sys

from . import census, construct, identities, multgroup, represent
from .cayley import (
    AlgebraError,
    CayleyTable,
    LoopView,
    PropertyId,
    find_unit,
    format_table,
    has_property,
    is_latin_quandle,
    is_quandle,
    parse_table,
)
from .perm import parse_perms

TRUE, FALSE, ERROR = 0, 1, 2


def _read_table(path: str) -> CayleyTable:
    with open(path) as fh:
        return parse_table(fh.read())


def _read_perms(path: str):
    with open(path) as fh:
        return parse_perms(fh.read())


def _cmd_props(args) -> int:
    t = _read_table(args.file)
    print(f"order: {t.n}")
    unit = find_unit(t)
    print(f"quasigroup: {_yn(t.is_quasigroup)}")
    print(f"unit: {unit if unit is not None else 'none'}")
    print(f"quandle: {_yn(is_quandle(t))}")
    print(f"latin quandle: {_yn(is_latin_quandle(t))}")
    for p in PropertyId:
        try:
            value = _yn(has_property(t, p))
        except AlgebraError:
            value = "n/a (needs a loop)"
        print(f"{p.value}: {value}")
    if _rows_bijective(t):
        print(f"connected: {_yn(multgroup.is_connected(t))}")
    if t.n <= 16:
        print(f"homogeneous: {_yn(multgroup.is_homogeneous(t))}")
    return TRUE


def _rows_bijective(t: CayleyTable) -> bool:
    return all(len(set(row)) == t.n for row in t.rows)


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _cmd_check(args) -> int:
    t = _read_table(args.file)
    try:
        p = PropertyId(args.property)
    except ValueError:
        names = ", ".join(p.value for p in PropertyId)
        raise AlgebraError(f"unknown property {args.property!r}; one of: {names}")
    ok = has_property(t, p)
    print(_yn(ok))
    return TRUE if ok else FALSE


def _cmd_identity(args) -> int:
    if args.mode == "check":
        t = _read_table(args.file)
        ident = identities.parse(args.identity)
        witness = identities.holds(t, ident)
        if witness is None:
            print("holds")
            return TRUE
        print("fails at " + " ".join(f"{k}={v}" for k, v in witness.items()))
        return FALSE
    # find
    ids = [identities.parse(s) for s in args.identities]
    constraints = []
    if args.loop:
        constraints.append("loop")
    if args.quasigroup:
        constraints.append("quasigroup")
    if args.idempotent:
        constraints.append("idempotent")
    forbid = [identities.parse(s) for s in args.forbid or []]
    model = identities.find_model(ids, args.size, constraints, forbid=forbid)
    if model is None:
        print("none")
        return FALSE
    sys.stdout.write(format_table(model))
    return TRUE


def _cmd_isotope(args) -> int:
    t = _read_table(args.file)
    loop = construct.principal_loop_isotope(t, args.e1, args.e2)
    print(f"# unit {loop.unit}", file=sys.stderr)
    sys.stdout.write(format_table(loop.table))
    return TRUE


def _cmd_construct(args) -> int:
    try:
        builder = construct.BUILDERS[args.name]
    except KeyError:
        names = ", ".join(sorted(construct.BUILDERS))
        raise AlgebraError(f"unknown builder {args.name!r}; one of: {names}")
    sys.stdout.write(format_table(builder()))
    return TRUE


def _cmd_core(args) -> int:
    t = _read_table(args.file)
    loop = LoopView.promote(t)
    sys.stdout.write(format_table(construct.core_of_loop(loop)))
    return TRUE


def _cmd_bo_loop(args) -> int:
    t = _read_table(args.file)
    loop, psi = construct.bo_loop_from_ldq(t, args.e)
    print(f"# unit {loop.unit}; psi = left translation by {args.e}: "
          + " ".join(map(str, psi)), file=sys.stderr)
    sys.stdout.write(format_table(loop.table))
    return TRUE


def _cmd_bo_quandle(args) -> int:
    t = _read_table(args.file)
    loop = LoopView.promote(t)
    (psi,) = _read_perms(args.psi_file)
    sys.stdout.write(format_table(construct.bo_quandle(loop, psi)))
    return TRUE


def _cmd_envelope(args) -> int:
    from . import perm as permmod

    if args.words[0] == "build":
        if len(args.words) != 4:
            raise AlgebraError("usage: envelope build <group-file> <zeta-file> <e>")
        gens = _read_perms(args.words[1])
        (zeta,) = _read_perms(args.words[2])
        e = int(args.words[3])
        group = permmod.generate(gens, order_cap=args.cap)
        env = represent.Envelope(group, zeta, e)
        represent.validate_envelope(env)
        table = represent.quandle_from_envelope(env)
        latin = represent.envelope_is_latin(
            env, mode="both" if args.strict else "fixed-point"
        )
        print(f"# valid envelope; latin: {_yn(latin)}", file=sys.stderr)
        sys.stdout.write(format_table(table))
        return TRUE
    if len(args.words) != 2:
        raise AlgebraError("usage: envelope <quandle-file> <e>")
    t = _read_table(args.words[0])
    e = int(args.words[1])
    env = represent.envelope_of(t, e)
    latin = represent.envelope_is_latin(
        env, mode="both" if args.strict else "fixed-point"
    )
    print(f"group order {env.group.order}, degree {env.group.degree}, "
          f"base {env.base}, latin {_yn(latin)}")
    print("zeta: " + " ".join(map(str, env.zeta)))
    return TRUE


def _cmd_represent(args) -> int:
    t = _read_table(args.file)
    form = represent.medial_to_affine(t, args.e1, args.e2)
    loop = form.loop
    print(f"loop unit: {loop.unit}")
    print("phi automorphism: " + " ".join(map(str, form.phi.auto))
          + f"   translation u={form.phi.u} ({form.phi.side})")
    print("psi automorphism: " + " ".join(map(str, form.psi.auto))
          + f"   translation v={form.psi.u} ({form.psi.side})")
    print(f"constant c: {form.constant}")
    return TRUE


def _cmd_iso(args) -> int:
    a = _read_table(args.file_a)
    b = _read_table(args.file_b)
    f = census.are_isomorphic(a, b)
    if f is None:
        print("not isomorphic")
        return FALSE
    print("isomorphic: " + " ".join(map(str, f)))
    return TRUE


_FAMILIES = {
    "quandle": census.enumerate_quandles,
    "latin-quandle": census.enumerate_latin_quandles,
    "loop": census.enumerate_loops,
    "medial-idempotent": census.enumerate_medial_idempotent,
}


def _cmd_enumerate(args) -> int:
    if args.family == "bo":
        bom, bol, boq = census.count_bo(args.n)
        print(f"{bom} {bol} {boq}")
        return TRUE
    try:
        fn = _FAMILIES[args.family]
    except KeyError:
        names = ", ".join(sorted(_FAMILIES) + ["bo"])
        raise AlgebraError(f"unknown family {args.family!r}; one of: {names}")
    kwargs = {}
    if args.bound is not None:
        kwargs["bound"] = args.bound
    tables = fn(args.n, **kwargs)
    print(len(tables))
    if args.census:
        census.write_census(args.census, args.family, args.n, tables)
        print(f"# census written to {args.census}", file=sys.stderr)
    return TRUE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="quandlekit",
        description="finite quasigroups, loops and quandles from Cayley tables",
    )
    ap.add_argument("--jobs", type=int, default=1,
                    help="worker processes for enumeration (default 1)")
    ap.add_argument("--cap", type=int, default=10**6,
                    help="group materialization cap")
    ap.add_argument("--strict", action="store_true",
                    help="run cross-check modes (both latin criteria, "
                         "both trimediality modes)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("props", help="full property report for a table")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_props)

    p = sub.add_parser("check", help="check one property; exit 0/1")
    p.add_argument("file")
    p.add_argument("property")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("identity", help="check or search identities")
    psub = p.add_subparsers(dest="mode", required=True)
    pc = psub.add_parser("check")
    pc.add_argument("file")
    pc.add_argument("identity")
    pf = psub.add_parser("find")
    pf.add_argument("identities", nargs="+")
    pf.add_argument("-n", "--size", type=int, required=True)
    pf.add_argument("--loop", action="store_true")
    pf.add_argument("--quasigroup", action="store_true")
    pf.add_argument("--idempotent", action="store_true")
    pf.add_argument("--forbid", action="append",
                    help="identity the model must violate (repeatable)")
    p.set_defaults(fn=_cmd_identity)

    p = sub.add_parser("isotope", help="principal loop isotope at (e1, e2)")
    p.add_argument("file")
    p.add_argument("e1", type=int)
    p.add_argument("e2", type=int)
    p.set_defaults(fn=_cmd_isotope)

    p = sub.add_parser("construct", help="emit a named example table")
    p.add_argument("name")
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("core", help="core of a loop table")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_core)

    p = sub.add_parser("bo-loop", help="loop isotope of a latin quandle at e")
    p.add_argument("file")
    p.add_argument("e", type=int)
    p.set_defaults(fn=_cmd_bo_loop)

    p = sub.add_parser("bo-quandle", help="quandle of a BO-module (loop, psi)")
    p.add_argument("file")
    p.add_argument("psi_file")
    p.set_defaults(fn=_cmd_bo_quandle)

    p = sub.add_parser("envelope",
                       help="envelope of a connected quandle, or "
                            "'build <group> <zeta> <e>'")
    p.add_argument("words", nargs="+")
    p.set_defaults(fn=_cmd_envelope)

    p = sub.add_parser("represent", help="representation extraction")
    rsub = p.add_subparsers(dest="what", required=True)
    rm = rsub.add_parser("medial")
    rm.add_argument("file")
    rm.add_argument("e1", type=int)
    rm.add_argument("e2", type=int)
    p.set_defaults(fn=_cmd_represent)

    p = sub.add_parser("iso", help="isomorphism test; exit 0/1")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(fn=_cmd_iso)

    p = sub.add_parser("enumerate", help="census counts (and files)")
    p.add_argument("family")
    p.add_argument("n", type=int)
    p.add_argument("--census", help="write the census file here")
    p.add_argument("--bound", type=int, default=None,
                   help="override the family's enumeration bound")
    p.set_defaults(fn=_cmd_enumerate)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except AlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
