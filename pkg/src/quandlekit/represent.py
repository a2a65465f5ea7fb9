"""Representation extraction and verification: affine forms over abelian
groups, trimediality, Belousov-Onoi conditions, B-loop correspondence and
quandle envelopes."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from . import multgroup, perm
from .cayley import (
    AlgebraError,
    CayleyTable,
    LoopView,
    PropertyId,
    _VECTOR_MIN,
    has_property,
    is_associative,
    is_quandle,
    is_uniquely_2_divisible,
    property_witness,
)
from .construct import AffineMapSpec, coset_quandle, is_automorphism, principal_loop_isotope
from .perm import Perm, PermGroup, compose, conjugate, inverse


@dataclass(frozen=True)
class AffineForm:
    """A loop with two affine maps reconstructing x*y = phi(x).psi(y).

    When the loop is an abelian group the operation also reads
    x*y = s(x) + t(y) + c with s, t the automorphism parts and c the
    constant below.
    """

    loop: LoopView
    phi: AffineMapSpec
    psi: AffineMapSpec
    constant: int


@dataclass(frozen=True)
class Envelope:
    """A transitive group with a distinguished permutation and base point."""

    group: PermGroup
    zeta: Perm
    base: int


def check_bo_module(l: LoopView, psi: Perm) -> tuple[int, int, int] | None:
    """None iff phi(ab).psi(ac) = a.(phi(b).psi(c)) holds throughout,
    where phi(x) = x/psi(x); otherwise the first violating (a, b, c)."""
    if not is_automorphism(l.table, psi):
        raise AlgebraError("psi is not an automorphism of the loop")
    n = l.n
    rows = l.table.rows
    phi = [l.rdiv(x, psi[x]) for x in range(n)]
    for a in range(n):
        ra = rows[a]
        for b in range(n):
            lrow = rows[phi[ra[b]]]
            rpb = rows[phi[b]]
            for c in range(n):
                if lrow[psi[ra[c]]] != ra[rpb[psi[c]]]:
                    return (a, b, c)
    return None


def is_bo_module(l: LoopView, psi: Perm) -> bool:
    return check_bo_module(l, psi) is None


def is_bo_loop(l: LoopView, psi: Perm) -> bool:
    """BO condition plus a bijective companion x -> x/psi(x)."""
    if check_bo_module(l, psi) is not None:
        return False
    phi = {l.rdiv(x, psi[x]) for x in range(l.n)}
    return len(phi) == l.n


def companion_map(l: LoopView, psi: Perm) -> tuple[int, ...]:
    return tuple(l.rdiv(x, psi[x]) for x in range(l.n))


def medial_to_affine(t: CayleyTable, e1: int, e2: int) -> AffineForm:
    """Extract the affine form of a medial quasigroup over its loop isotope."""
    w = property_witness(t, PropertyId.MEDIAL)
    if w is not None:
        raise AlgebraError(f"not medial: witness quadruple {w}")
    loop = principal_loop_isotope(t, e1, e2)
    if not has_property(loop.table, PropertyId.COMMUTATIVE) or not is_associative(
        loop.table
    ):
        raise AlgebraError("internal: loop isotope of a medial quasigroup "
                           "is not an abelian group")
    n = t.n
    unit = loop.unit
    phi_full = [t.rows[a][e1] for a in range(n)]   # R_{e1} in (Q,*)
    psi_full = [t.rows[e2][b] for b in range(n)]   # L_{e2} in (Q,*)
    u, v = phi_full[unit], psi_full[unit]
    phi_auto = tuple(loop.mul(phi_full[x], loop.linv(u)) for x in range(n))
    psi_auto = tuple(loop.mul(psi_full[x], loop.linv(v)) for x in range(n))
    for auto, name in ((phi_auto, "R_e1"), (psi_auto, "L_e2")):
        if not is_automorphism(loop.table, auto):
            raise AlgebraError(f"internal: {name} part is not an automorphism")
    if compose(phi_auto, psi_auto) != compose(psi_auto, phi_auto):
        raise AlgebraError("internal: automorphism parts do not commute")
    rows = loop.table.rows
    for a in range(n):
        fa = phi_full[a]
        for b in range(n):
            if rows[fa][psi_full[b]] != t.rows[a][b]:
                raise AlgebraError("internal: reconstruction mismatch")
    return AffineForm(
        loop=loop,
        phi=AffineMapSpec("right", u, phi_auto),
        psi=AffineMapSpec("right", v, psi_auto),
        constant=t.rows[unit][unit],
    )


def trimedial_identity_witness(t: CayleyTable):
    """First violation of either defining identity, or None.

    The identities are (c*b)*(a*a) = (c*a)*(b*a) and
    (a*(a*a))*(b*c) = (a*b)*((a*a)*c).
    """
    n, rows = t.n, t.rows
    if n >= _VECTOR_MIN:
        m = np.array(rows, dtype=np.intp)
        for a in range(n):
            sq = m[a, a]
            cola = m[:, a]
            lhs = m[:, sq][m]
            rhs = m[cola[:, None], cola[None, :]]
            if not np.array_equal(lhs, rhs):
                c, b = np.argwhere(lhs != rhs)[0]
                return (1, a, int(b), int(c))
            u = m[a, sq]
            lhs = m[u][m]
            rhs = m[m[a]][:, m[sq]]
            if not np.array_equal(lhs, rhs):
                b, c = np.argwhere(lhs != rhs)[0]
                return (2, a, int(b), int(c))
        return None
    for a in range(n):
        sq = rows[a][a]
        cola = [rows[x][a] for x in range(n)]
        for c in range(n):
            rc = rows[c]
            rca = rows[cola[c]]
            for b in range(n):
                if rows[rc[b]][sq] != rca[cola[b]]:
                    return (1, a, b, c)
        u = rows[a][sq]
        ru = rows[u]
        ra = rows[a]
        rsq = rows[sq]
        for b in range(n):
            rb = rows[b]
            rab = rows[ra[b]]
            for c in range(n):
                if ru[rb[c]] != rab[rsq[c]]:
                    return (2, a, b, c)
    return None


def _is_trimedial_brute(t: CayleyTable) -> bool:
    from .cayley import subalgebra_generated

    seen: set[tuple[int, ...]] = set()
    for triple in combinations_with_replacement(range(t.n), 3):
        sub = subalgebra_generated(t, triple)
        if sub in seen:
            continue
        seen.add(sub)
        if not has_property(t.subtable(sub), PropertyId.MEDIAL):
            return False
    return True


def is_trimedial(t: CayleyTable, mode: str = "identities") -> bool:
    """Trimediality; 'identities' checks the two-identity base, 'brute'
    checks mediality of every 3-generated subquasigroup, 'both' cross-checks."""
    if not t.is_quasigroup:
        raise AlgebraError("trimediality check needs a quasigroup")
    if mode == "identities":
        return trimedial_identity_witness(t) is None
    if mode == "brute":
        return _is_trimedial_brute(t)
    if mode == "both":
        a = trimedial_identity_witness(t) is None
        b = _is_trimedial_brute(t)
        if a != b:
            raise AlgebraError(
                "internal: trimediality modes disagree "
                f"(identities={a}, brute={b})"
            )
        return a
    raise AlgebraError(f"unknown trimediality mode {mode!r}")


def is_bloop(l: LoopView) -> bool:
    """Left Bol, automorphic inverses, uniquely 2-divisible."""
    return (
        has_property(l, PropertyId.LEFT_BOL)
        and has_property(l, PropertyId.AIP)
        and is_uniquely_2_divisible(l)
    )


def ildq_from_bloop(l: LoopView) -> CayleyTable:
    """The involutory latin quandle a*b = a^2 . b^{-1} of a B-loop."""
    w = property_witness(l, PropertyId.LEFT_BOL)
    if w is not None:
        raise AlgebraError(f"not left Bol: witness {w}")
    w = property_witness(l, PropertyId.AIP)
    if w is not None:
        raise AlgebraError(f"no automorphic inverse property: witness {w}")
    if not is_uniquely_2_divisible(l):
        raise AlgebraError("not uniquely 2-divisible: squaring is not a bijection")
    n = l.n
    rows = l.table.rows
    sq = [rows[a][a] for a in range(n)]
    inv = [l.linv(b) for b in range(n)]
    return CayleyTable(
        tuple(tuple(rows[sq[a]][inv[b]] for b in range(n)) for a in range(n))
    )


def bloop_from_ildq(t: CayleyTable, e: int) -> LoopView:
    """The loop isotope at (e, e) of an involutory latin quandle; verified B-loop."""
    if not t.is_quasigroup:
        raise AlgebraError("input is not a quasigroup")
    w = property_witness(t, PropertyId.LEFT_DISTRIBUTIVE)
    if w is not None:
        raise AlgebraError(f"not left distributive: witness {w}")
    w = property_witness(t, PropertyId.LEFT_INVOLUTORY)
    if w is not None:
        raise AlgebraError(f"not involutory: witness {w}")
    loop = principal_loop_isotope(t, e, e)
    if not is_bloop(loop):
        raise AlgebraError("internal: isotope of an involutory latin quandle "
                           "is not a B-loop")
    return loop


def envelope_violation(env: Envelope) -> str | None:
    """The violated validity clause, or None for a valid envelope."""
    g = env.group
    if env.zeta not in g.elements:
        return "zeta is not an element of the group"
    if not perm.is_transitive(g):
        return "group does not act transitively"
    stab = perm.stabilizer(g, env.base)
    if env.zeta not in stab.elements:
        return "zeta does not fix the base point"
    for x in stab.elements:
        if compose(env.zeta, x) != compose(x, env.zeta):
            return "zeta is not central in the stabilizer"
    closure = perm.generate(
        sorted(perm.conjugacy_class(g, env.zeta)), degree=g.degree
    )
    if closure.elements != g.elements:
        return "conjugates of zeta do not generate the group"
    return None


def validate_envelope(env: Envelope) -> None:
    violation = envelope_violation(env)
    if violation is not None:
        raise AlgebraError(f"invalid envelope: {violation}")


def envelope_of(t: CayleyTable, e: int) -> Envelope:
    """(LMlt, L_e) for a connected quandle; validity is verified."""
    if not is_quandle(t):
        raise AlgebraError("envelope source must be a quandle")
    if not multgroup.is_connected(t):
        raise AlgebraError("quandle is not connected")
    env = Envelope(multgroup.lmlt(t), t.rows[e], e)
    validate_envelope(env)
    return env


def quandle_from_envelope(env: Envelope) -> CayleyTable:
    """The connected quandle of a valid envelope, carried by 0..n-1.

    This is the coset quandle of (G, G_e, conjugation by zeta) relabeled
    along the transitive action, coset of x -> x.
    """
    validate_envelope(env)
    g = env.group
    reps = perm.transversal(g, env.base)
    n = g.degree
    rows = []
    for x in range(n):
        rows.append(conjugate(env.zeta, reps[x]))
    return CayleyTable(tuple(rows))


def envelope_coset_form(env: Envelope) -> CayleyTable:
    """The same quandle built through the generic coset construction."""
    validate_envelope(env)
    stab = perm.stabilizer(env.group, env.base)
    return coset_quandle(env.group, stab, env.zeta)


def envelope_is_latin(env: Envelope, mode: str = "fixed-point") -> bool:
    """Latin criterion for a valid envelope.

    'fixed-point': zeta^{-1} zeta^alpha is fixed-point-free for every
    alpha outside the stabilizer.  'transversal': the conjugacy class of
    zeta is a transversal to the stabilizer.  'both' cross-checks them.
    """
    validate_envelope(env)
    g = env.group
    stab_elements = frozenset(
        p for p in g.elements if p[env.base] == env.base
    )

    def fixed_point() -> bool:
        zinv = inverse(env.zeta)
        for alpha in g.elements:
            if alpha in stab_elements:
                continue
            c = compose(zinv, conjugate(env.zeta, alpha))
            if any(c[i] == i for i in range(g.degree)):
                return False
        return True

    def transversal() -> bool:
        cls = perm.conjugacy_class(g, env.zeta)
        stab = perm.stabilizer(g, env.base)
        return perm.is_transversal(sorted(cls), g, stab)

    if mode == "fixed-point":
        return fixed_point()
    if mode == "transversal":
        return transversal()
    if mode == "both":
        a, b = fixed_point(), transversal()
        if a != b:
            raise AlgebraError(
                f"internal: latin criteria disagree (fixed-point={a}, "
                f"transversal={b})"
            )
        return a
    raise AlgebraError(f"unknown latin criterion mode {mode!r}")
