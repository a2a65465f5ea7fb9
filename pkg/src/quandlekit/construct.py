"""Table builders: isotopes, conjugation quandles, cores, affine and
coset constructions, and the explicit order-15 and order-81 examples."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from . import perm
from .cayley import AlgebraError, CayleyTable, LoopView, PropertyId, property_witness
from .perm import Perm, PermGroup, compose, conjugate, inverse


@dataclass(frozen=True)
class AffineMapSpec:
    """phi(x) = auto(x)*u (side 'right') or u*auto(x) (side 'left')."""

    side: str
    u: int
    auto: Perm

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise AlgebraError(f"side must be 'left' or 'right', got {self.side!r}")

    def apply(self, l: LoopView, x: int) -> int:
        ax = self.auto[x]
        if self.side == "right":
            return l.mul(ax, self.u)
        return l.mul(self.u, ax)


def is_automorphism(t: CayleyTable, f: Sequence[int]) -> bool:
    n, rows = t.n, t.rows
    if not perm.is_permutation(tuple(f), n):
        return False
    for x in range(n):
        fx = f[x]
        for y in range(n):
            if f[rows[x][y]] != rows[fx][f[y]]:
                return False
    return True


def principal_loop_isotope(t: CayleyTable, e1: int, e2: int) -> LoopView:
    """The loop a.b = (a/e1)*(e2\\b), with unit e2*e1."""
    if not t.is_quasigroup:
        raise AlgebraError("principal isotope needs a quasigroup")
    n = t.n
    rd = [t.right_divide(a, e1) for a in range(n)]
    ld = [t.left_divide(e2, b) for b in range(n)]
    rows = tuple(tuple(t.rows[rd[a]][ld[b]] for b in range(n)) for a in range(n))
    return LoopView(CayleyTable(rows), t.rows[e2][e1])


def conjugation_quandle(g: PermGroup, s: Sequence[Perm]) -> CayleyTable:
    """Quandle a*b = a b a^{-1} on the subset s (indexed in given order)."""
    s = [tuple(p) for p in s]
    if len(set(s)) != len(s):
        raise AlgebraError("conjugation-closed subset has repeated elements")
    for p in s:
        if p not in g.elements:
            raise AlgebraError(f"{p} is not an element of the group")
    pos = {p: i for i, p in enumerate(s)}
    rows = []
    for a in s:
        ainv = inverse(a)
        row = []
        for b in s:
            c = compose(compose(a, b), ainv)
            if c not in pos:
                raise AlgebraError(
                    f"subset not closed under conjugation: "
                    f"{a} * {b} = {c} escapes"
                )
            row.append(pos[c])
        rows.append(tuple(row))
    return CayleyTable(rows)


def core_of_loop(l: LoopView) -> CayleyTable:
    """The involutory quandle a*b = a.(b^{-1}.a)."""
    n = l.n
    inv = []
    for b in range(n):
        li = l.linv(b)
        if li != l.rinv(b):
            raise AlgebraError(
                f"element {b} has distinct left and right inverses; "
                "the core needs two-sided inverses"
            )
        inv.append(li)
    rows = l.table.rows
    return CayleyTable(
        tuple(tuple(rows[a][rows[inv[b]][a]] for b in range(n)) for a in range(n))
    )


def bo_quandle(l: LoopView, psi: Perm) -> CayleyTable:
    """Quandle a*b = phi(a).psi(b) with phi(x) = x/psi(x)."""
    from .represent import check_bo_module

    witness = check_bo_module(l, psi)
    if witness is not None:
        raise AlgebraError(f"not a BO-module: witness triple {witness}")
    n = l.n
    phi = [l.rdiv(x, psi[x]) for x in range(n)]
    rows = l.table.rows
    return CayleyTable(
        tuple(tuple(rows[phi[a]][psi[b]] for b in range(n)) for a in range(n))
    )


def bo_loop_from_ldq(t: CayleyTable, e: int) -> tuple[LoopView, Perm]:
    """Loop isotope a.b = (a/e)*(e\\b) of a latin quandle, with psi = L_e."""
    if not t.is_quasigroup:
        raise AlgebraError("input is not a quasigroup")
    w = property_witness(t, PropertyId.LEFT_DISTRIBUTIVE)
    if w is not None:
        raise AlgebraError(f"input is not left distributive: witness {w}")
    loop = principal_loop_isotope(t, e, e)
    return loop, t.rows[e]


def coset_quandle(
    g: PermGroup,
    h: PermGroup,
    psi: Perm | Mapping[Perm, Perm],
) -> CayleyTable:
    """Quandle aH * bH = a psi(a^{-1} b) H on the left cosets of h in g.

    psi is either a group element (meaning conjugation by it) or an
    explicit automorphism given as a mapping on group elements; it must
    fix h pointwise (the triple must be admissible).
    """
    if not h.is_subgroup_of(g):
        raise AlgebraError("inadmissible: h is not a subgroup of g")
    if isinstance(psi, tuple):
        zeta = psi
        if zeta not in g.elements:
            raise AlgebraError("inadmissible: zeta is not an element of g")
        psi_map = {x: conjugate(x, zeta) for x in g.elements}
    else:
        psi_map = dict(psi)
        if set(psi_map) != g.elements or set(psi_map.values()) != g.elements:
            raise AlgebraError("inadmissible: psi is not a bijection on g")
        for x in g.elements:
            for y in g.generators:
                if psi_map[compose(x, y)] != compose(psi_map[x], psi_map[y]):
                    raise AlgebraError("inadmissible: psi is not an automorphism")
    for k in h.elements:
        if psi_map[k] != k:
            raise AlgebraError("inadmissible: psi does not fix h pointwise")

    elems = sorted(g.elements)
    coset_of: dict[Perm, int] = {}
    reps: list[Perm] = []
    for u in elems:
        if u in coset_of:
            continue
        idx = len(reps)
        reps.append(u)
        for k in h.elements:
            coset_of[compose(u, k)] = idx
    m = len(reps)
    rows = []
    for i in range(m):
        a = reps[i]
        ainv = inverse(a)
        row = []
        for j in range(m):
            b = reps[j]
            row.append(coset_of[compose(a, psi_map[compose(ainv, b)])])
        rows.append(tuple(row))
    return CayleyTable(rows)


def affine_quasigroup(
    l: LoopView, phi: AffineMapSpec, psi: AffineMapSpec
) -> CayleyTable:
    """The table a*b = phi(a).psi(b) for affine maps over the loop."""
    for spec, name in ((phi, "phi"), (psi, "psi")):
        if not is_automorphism(l.table, spec.auto):
            raise AlgebraError(f"{name}: map part is not a loop automorphism")
    if compose(phi.auto, psi.auto) != compose(psi.auto, phi.auto):
        raise AlgebraError("automorphism parts do not commute")
    n = l.n
    fa = [phi.apply(l, x) for x in range(n)]
    fb = [psi.apply(l, x) for x in range(n)]
    rows = l.table.rows
    return CayleyTable(
        tuple(tuple(rows[fa[a]][fb[b]] for b in range(n)) for a in range(n))
    )


# ---------------------------------------------------------------------------
# explicit examples of order 15 and 81

_PHI15 = ((1, 2, 2), (1, 3, 1), (1, 1, 3))
_THETA15 = ((0, 0, 0), (0, -1, 1), (0, -2, 2))
_MU15 = ((2, -1, -1), (-1, 2, -1), (-1, -1, 2))


def _idx15(a: int, x: int) -> int:
    return a * 3 + x


def _loop15(theta) -> LoopView:
    rows = [[0] * 15 for _ in range(15)]
    for a, x in product(range(5), range(3)):
        for b, y in product(range(5), range(3)):
            c = (_PHI15[x][y] * a + b + theta[x][y]) % 5
            rows[_idx15(a, x)][_idx15(b, y)] = _idx15(c, (x + y) % 3)
    return LoopView(CayleyTable(rows), _idx15(0, 0))


def bloop15() -> LoopView:
    """The smallest non-associative B-loop (order 15)."""
    return _loop15(((0, 0, 0),) * 3)


def boloop15() -> LoopView:
    """The order-15 BO-loop that is not a B-loop (it even lacks the LIP)."""
    return _loop15(_THETA15)


def boloop15_automorphism() -> Perm:
    """(a,x) -> (-a + [x=2], -x), the automorphism making boloop15 a BO-loop."""
    img = [0] * 15
    for a, x in product(range(5), range(3)):
        img[_idx15(a, x)] = _idx15((-a + (1 if x == 2 else 0)) % 5, (-x) % 3)
    return tuple(img)


def _ldq15(tau) -> CayleyTable:
    rows = [[0] * 15 for _ in range(15)]
    for a, x in product(range(5), range(3)):
        for b, y in product(range(5), range(3)):
            c = (_MU15[x][y] * a - b + tau(x, y)) % 5
            rows[_idx15(a, x)][_idx15(b, y)] = _idx15(c, (-x - y) % 3)
    return CayleyTable(rows)


def ildq15() -> CayleyTable:
    """The smallest non-medial involutory left distributive quasigroup."""
    return _ldq15(lambda x, y: 0)


def galkin_ldq15() -> CayleyTable:
    """The other non-medial left distributive quasigroup of order 15."""
    return _ldq15(lambda x, y: 1 if (x - y) % 3 == 1 else 0)


def _cml81_elements(which: int):
    if which == 1:
        return list(product(range(3), repeat=4)), (3, 3, 3, 3)
    return list(product(range(3), range(3), range(9))), (3, 3, 9)


def cml81(which: int) -> LoopView:
    """The two non-associative commutative Moufang loops of order 81."""
    if which not in (1, 2):
        raise AlgebraError("cml81 takes 1 or 2")
    elems, mods = _cml81_elements(which)
    pos = {e: i for i, e in enumerate(elems)}
    k = len(mods)
    rows = []
    for x in elems:
        row = []
        for y in elems:
            s = [(x[i] + y[i]) % mods[i] for i in range(k)]
            if which == 1:
                # t1(x, y, x - y) lands on the first coordinate
                s[0] = (s[0] + (x[1] * y[2] - x[2] * y[1]) * (x[3] - y[3])) % 3
            else:
                # t2(x, y, x - y) lands on the Z9 coordinate
                s[2] = (s[2] + 3 * (x[0] * y[1] - x[1] * y[0]) * (x[2] - y[2])) % 9
            row.append(pos[tuple(s)])
        rows.append(tuple(row))
    return LoopView(CayleyTable(rows), pos[(0,) * k])


def _coordinate_map(which: int, fn) -> list[int]:
    elems, mods = _cml81_elements(which)
    pos = {e: i for i, e in enumerate(elems)}
    k = len(mods)
    out = []
    for x in elems:
        y = fn(x)
        out.append(pos[tuple(y[i] % mods[i] for i in range(k))])
    return out


def dq81(which: int) -> CayleyTable:
    """The six non-medial distributive quasigroups of order 81."""
    if which not in range(1, 7):
        raise AlgebraError("dq81 takes 1..6")
    carrier = 1 if which in (1, 2) else 2
    loop = cml81(carrier)
    rows = loop.table.rows
    n = loop.n
    neg = _coordinate_map(carrier, lambda x: [-c for c in x])
    if which == 1:
        return CayleyTable(
            tuple(tuple(rows[neg[a]][neg[b]] for b in range(n)) for a in range(n))
        )
    if which == 3:
        sqrt = _coordinate_map(2, lambda x: [2 * x[0], 2 * x[1], 5 * x[2]])
        return CayleyTable(
            tuple(tuple(rows[sqrt[a]][sqrt[b]] for b in range(n)) for a in range(n))
        )
    if which in (4, 5):
        dbl = _coordinate_map(2, lambda x: [2 * c for c in x])  # x -> x^2
        fa, fb = (neg, dbl) if which == 4 else (dbl, neg)
        return CayleyTable(
            tuple(tuple(rows[fa[a]][fb[b]] for b in range(n)) for a in range(n))
        )
    if which == 2:
        phi = _coordinate_map(
            1, lambda x: [x[1] - x[0], -x[1], -x[2], -x[3]]
        )
    else:  # which == 6
        phi = _coordinate_map(
            2, lambda x: [-x[0], -x[1], -(3 * x[0] + x[2])]
        )
    # the companion is forced by idempotence: phi(x) . psi(x) = x
    psi = [loop.ldiv(phi[x], x) for x in range(n)]
    return CayleyTable(
        tuple(tuple(rows[phi[a]][psi[b]] for b in range(n)) for a in range(n))
    )


BUILDERS = {
    "bloop15": lambda: bloop15().table,
    "boloop15": lambda: boloop15().table,
    "ildq15": ildq15,
    "galkin-ldq15": galkin_ldq15,
    "cml81-1": lambda: cml81(1).table,
    "cml81-2": lambda: cml81(2).table,
    **{f"dq81-{k}": (lambda k=k: dq81(k)) for k in range(1, 7)},
}
