"""Cayley tables of finite binary algebras and their equational properties.

A table is an n x n array over element indices 0..n-1; entry (a, b) is the
product a*b.  Everything downstream (loops, quandles, multiplication groups,
census runs) works on these indices.  Tables are immutable and hashable.
"""

from __future__ import annotations

import operator
import warnings
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

Rows = tuple[tuple[int, ...], ...]

# above this order, 3- and 4-variable identity scans go through numpy
_VECTOR_MIN = 20


class AlgebraError(Exception):
    """A structural precondition does not hold (wrong signature, bad input)."""


class TableError(AlgebraError):
    """Malformed Cayley table data."""


class BracketingWarning(UserWarning):
    """Powers in a non-power-associative loop depend on bracketing."""


class CayleyTable:
    """Immutable multiplication table of a binary algebra on 0..n-1."""

    __slots__ = ("n", "rows", "_hash", "_ldiv", "_rdiv", "_cols", "_quasi")

    def __init__(self, entries: Iterable[Iterable[int]]):
        rows = []
        for row in entries:
            rows.append(tuple(operator.index(v) for v in row))
        n = len(rows)
        if n == 0:
            raise TableError("empty table")
        for a, row in enumerate(rows):
            if len(row) != n:
                raise TableError(f"row {a} has {len(row)} entries, expected {n}")
            for b, v in enumerate(row):
                if not 0 <= v < n:
                    raise TableError(
                        f"entry {v} at row {a}, column {b} is outside 0..{n - 1}"
                    )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_ldiv", [None] * n)
        object.__setattr__(self, "_rdiv", [None] * n)
        object.__setattr__(self, "_cols", None)
        object.__setattr__(self, "_quasi", None)

    def __setattr__(self, name, value):
        raise AttributeError("CayleyTable is immutable")

    def __eq__(self, other):
        return isinstance(other, CayleyTable) and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.rows))
        return self._hash

    def __repr__(self):
        return f"CayleyTable(n={self.n})"

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    @property
    def columns(self) -> Rows:
        if self._cols is None:
            cols = tuple(zip(*self.rows))
            object.__setattr__(self, "_cols", cols)
        return self._cols

    @property
    def is_quasigroup(self) -> bool:
        """True iff every row and every column is a permutation of 0..n-1."""
        if self._quasi is None:
            full = set(range(self.n))
            ok = all(set(r) == full for r in self.rows) and all(
                set(c) == full for c in self.columns
            )
            object.__setattr__(self, "_quasi", ok)
        return self._quasi

    def _row_inverse(self, a: int) -> tuple[int, ...]:
        inv = self._ldiv[a]
        if inv is None:
            row = self.rows[a]
            inv = [-1] * self.n
            for x, v in enumerate(row):
                if inv[v] != -1:
                    raise AlgebraError(
                        f"left translation by {a} is not a bijection "
                        f"({a}*{inv[v]} = {a}*{x} = {v})"
                    )
                inv[v] = x
            inv = tuple(inv)
            self._ldiv[a] = inv
        return inv

    def _col_inverse(self, a: int) -> tuple[int, ...]:
        inv = self._rdiv[a]
        if inv is None:
            col = self.columns[a]
            inv = [-1] * self.n
            for x, v in enumerate(col):
                if inv[v] != -1:
                    raise AlgebraError(
                        f"right translation by {a} is not a bijection "
                        f"({inv[v]}*{a} = {x}*{a} = {v})"
                    )
                inv[v] = x
            inv = tuple(inv)
            self._rdiv[a] = inv
        return inv

    def left_divide(self, a: int, b: int) -> int:
        """The unique x with a*x = b."""
        return self._row_inverse(a)[b]

    def right_divide(self, a: int, b: int) -> int:
        """The unique y with y*b = a."""
        return self._col_inverse(b)[a]

    def relabel(self, sigma: Sequence[int]) -> "CayleyTable":
        """Transport the operation along the bijection sigma."""
        n = self.n
        inv = [0] * n
        for i, v in enumerate(sigma):
            inv[v] = i
        rows = self.rows
        return CayleyTable(
            tuple(
                tuple(sigma[rows[inv[i]][inv[j]]] for j in range(n))
                for i in range(n)
            )
        )

    def subtable(self, elems: Sequence[int]) -> "CayleyTable":
        """Induced table on a multiplicatively closed subset, reindexed."""
        pos = {e: i for i, e in enumerate(elems)}
        rows = self.rows
        try:
            return CayleyTable(
                tuple(tuple(pos[rows[a][b]] for b in elems) for a in elems)
            )
        except KeyError as exc:
            raise AlgebraError(f"subset {list(elems)} is not closed: "
                               f"product {exc.args[0]} escapes") from None


def parse_table(text: str) -> CayleyTable:
    """Read the Cayley text format: order line, then n rows of n indices.

    Blank lines and ``#`` comments are ignored.
    """
    values: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.append([int(tok) for tok in line.split()])
        except ValueError:
            raise TableError(f"line {lineno}: non-integer token") from None
    if not values:
        raise TableError("no data lines")
    head = values[0]
    if len(head) != 1:
        raise TableError("first data line must hold the order alone")
    n = head[0]
    if n < 1:
        raise TableError(f"order must be positive, got {n}")
    body = values[1:]
    if len(body) != n:
        raise TableError(f"expected {n} rows, found {len(body)}")
    return CayleyTable(body)


def format_table(t: CayleyTable) -> str:
    lines = [str(t.n)]
    lines.extend(" ".join(str(v) for v in row) for row in t.rows)
    return "\n".join(lines) + "\n"


def find_unit(t: CayleyTable) -> int | None:
    """The unique two-sided unit, or None."""
    n = t.n
    idx = list(range(n))
    for e in range(n):
        if list(t.rows[e]) == idx and [t.rows[a][e] for a in range(n)] == idx:
            return e
    return None


@dataclass(frozen=True)
class LoopView:
    """A quasigroup table together with its two-sided unit."""

    table: CayleyTable
    unit: int

    def __post_init__(self):
        t, e = self.table, self.unit
        if not t.is_quasigroup:
            raise AlgebraError("loop carrier must be a quasigroup")
        idx = list(range(t.n))
        if list(t.rows[e]) != idx or [t.rows[a][e] for a in range(t.n)] != idx:
            raise AlgebraError(f"element {e} is not a two-sided unit")

    @classmethod
    def promote(cls, t: CayleyTable) -> "LoopView":
        e = find_unit(t)
        if e is None:
            raise AlgebraError("table has no two-sided unit")
        return cls(t, e)

    @property
    def n(self) -> int:
        return self.table.n

    def mul(self, a: int, b: int) -> int:
        return self.table.rows[a][b]

    def ldiv(self, a: int, b: int) -> int:
        return self.table.left_divide(a, b)

    def rdiv(self, a: int, b: int) -> int:
        return self.table.right_divide(a, b)

    def linv(self, a: int) -> int:
        """Left inverse a\\1."""
        return self.table.left_divide(a, self.unit)

    def rinv(self, a: int) -> int:
        """Right inverse 1/a."""
        return self.table.right_divide(self.unit, a)

    def power(self, x: int, k: int) -> int:
        """x^k with x^k = x * x^(k-1); negative k uses the left inverse."""
        if k < 0:
            return self.power(self.linv(x), -k)
        acc = self.unit
        for _ in range(k):
            acc = self.table.rows[x][acc]
        return acc


class PropertyId(Enum):
    IDEMPOTENT = "idempotent"
    LEFT_DISTRIBUTIVE = "left-distributive"
    RIGHT_DISTRIBUTIVE = "right-distributive"
    MEDIAL = "medial"
    LEFT_INVOLUTORY = "left-involutory"
    COMMUTATIVE = "commutative"
    LEFT_ALTERNATIVE = "left-alternative"
    MOUFANG = "moufang"
    LEFT_BOL = "left-bol"
    LIP = "lip"
    RIP = "rip"
    AIP = "aip"
    LAIP = "laip"
    RAIP = "raip"


#: properties whose defining identity mentions the unit or inverses
LOOP_PROPERTIES = frozenset(
    {
        PropertyId.MOUFANG,
        PropertyId.LEFT_BOL,
        PropertyId.LIP,
        PropertyId.RIP,
        PropertyId.AIP,
        PropertyId.LAIP,
        PropertyId.RAIP,
    }
)


def _np_rows(t: CayleyTable) -> np.ndarray:
    return np.array(t.rows, dtype=np.intp)


def _idempotent_witness(t):
    for x in range(t.n):
        if t.rows[x][x] != x:
            return (x,)
    return None


def _commutative_witness(t):
    rows = t.rows
    for x in range(t.n):
        for y in range(x + 1, t.n):
            if rows[x][y] != rows[y][x]:
                return (x, y)
    return None


def _left_involutory_witness(t):
    rows = t.rows
    for x in range(t.n):
        rx = rows[x]
        for y in range(t.n):
            if rx[rx[y]] != y:
                return (x, y)
    return None


def _left_alternative_witness(t):
    rows = t.rows
    for x in range(t.n):
        rx = rows[x]
        rxx = rows[rx[x]]
        for y in range(t.n):
            if rx[rx[y]] != rxx[y]:
                return (x, y)
    return None


def _left_distributive_witness(t):
    n, rows = t.n, t.rows
    if n >= _VECTOR_MIN:
        m = _np_rows(t)
        for x in range(n):
            lhs = m[x][m]
            rhs = m[m[x]][:, m[x]]
            if not np.array_equal(lhs, rhs):
                y, z = np.argwhere(lhs != rhs)[0]
                return (x, int(y), int(z))
        return None
    for x in range(n):
        rx = rows[x]
        for y in range(n):
            rxy = rows[rx[y]]
            ry = rows[y]
            for z in range(n):
                if rx[ry[z]] != rxy[rx[z]]:
                    return (x, y, z)
    return None


def _right_distributive_witness(t):
    # (z*y)*x = (z*x)*(y*x)
    n, rows = t.n, t.rows
    if n >= _VECTOR_MIN:
        m = _np_rows(t)
        for x in range(n):
            colx = m[:, x]
            lhs = colx[m]
            rhs = m[colx[:, None], colx[None, :]]
            if not np.array_equal(lhs, rhs):
                z, y = np.argwhere(lhs != rhs)[0]
                return (x, int(y), int(z))
        return None
    for x in range(n):
        colx = [rows[a][x] for a in range(n)]
        for z in range(n):
            rz = rows[z]
            rzx = rows[colx[z]]
            for y in range(n):
                if colx[rz[y]] != rzx[colx[y]]:
                    return (x, y, z)
    return None


def _medial_witness(t):
    # (x*y)*(u*v) = (x*u)*(y*v)
    n, rows = t.n, t.rows
    if n >= _VECTOR_MIN:
        m = _np_rows(t)
        for x in range(n):
            a = m[m[x]]  # a[y] = row of x*y
            lhs = a[:, m]  # lhs[y,u,v] = (x*y)*(u*v)
            rhs = np.transpose(a[:, m], (1, 0, 2))  # rhs[y,u,v] = (x*u)*(y*v)
            if not np.array_equal(lhs, rhs):
                y, u, v = np.argwhere(lhs != rhs)[0]
                return (x, int(y), int(u), int(v))
        return None
    for x in range(n):
        rx = rows[x]
        for y in range(n):
            rxy = rows[rx[y]]
            for u in range(n):
                rxu = rows[rx[u]]
                ru = rows[u]
                ry = rows[y]
                for v in range(n):
                    if rxy[ru[v]] != rxu[ry[v]]:
                        return (x, y, u, v)
    return None


def _moufang_witness(t):
    # (xy.x)z = x(y.xz)
    n, rows = t.n, t.rows
    for x in range(n):
        rx = rows[x]
        for y in range(n):
            lhs_row = rows[rows[rx[y]][x]]
            ry = rows[y]
            for z in range(n):
                if lhs_row[z] != rx[ry[rx[z]]]:
                    return (x, y, z)
    return None


def _left_bol_witness(t):
    # (x.yx)z = x(y.xz)
    n, rows = t.n, t.rows
    for x in range(n):
        rx = rows[x]
        for y in range(n):
            lhs_row = rows[rx[rows[y][x]]]
            ry = rows[y]
            for z in range(n):
                if lhs_row[z] != rx[ry[rx[z]]]:
                    return (x, y, z)
    return None


def left_inverses(l: LoopView) -> tuple[int, ...]:
    return tuple(l.table.rows[a].index(l.unit) for a in range(l.n))


def right_inverses(l: LoopView) -> tuple[int, ...]:
    return tuple(l.table.columns[a].index(l.unit) for a in range(l.n))


def _lip_witness(l: LoopView):
    # a^{-1}(ab) = b
    rows = l.table.rows
    inv = left_inverses(l)
    for a in range(l.n):
        ra, ria = rows[a], rows[inv[a]]
        for b in range(l.n):
            if ria[ra[b]] != b:
                return (a, b)
    return None


def _rip_witness(l: LoopView):
    # (ba)(1/a) = b
    rows = l.table.rows
    rinv = right_inverses(l)
    for a in range(l.n):
        ia = rinv[a]
        for b in range(l.n):
            if rows[rows[b][a]][ia] != b:
                return (a, b)
    return None


def _laip_witness(l: LoopView):
    rows = l.table.rows
    inv = left_inverses(l)
    for a in range(l.n):
        for b in range(l.n):
            if inv[rows[a][b]] != rows[inv[a]][inv[b]]:
                return (a, b)
    return None


def _raip_witness(l: LoopView):
    rows = l.table.rows
    rinv = right_inverses(l)
    for a in range(l.n):
        for b in range(l.n):
            if rinv[rows[a][b]] != rows[rinv[a]][rinv[b]]:
                return (a, b)
    return None


def _aip_witness(l: LoopView):
    inv = left_inverses(l)
    rinv = right_inverses(l)
    for x in range(l.n):
        if inv[x] != rinv[x]:
            return (x,)
    rows = l.table.rows
    for a in range(l.n):
        for b in range(l.n):
            if inv[rows[a][b]] != rows[inv[a]][inv[b]]:
                return (a, b)
    return None


_MAGMA_CHECKS = {
    PropertyId.IDEMPOTENT: _idempotent_witness,
    PropertyId.LEFT_DISTRIBUTIVE: _left_distributive_witness,
    PropertyId.RIGHT_DISTRIBUTIVE: _right_distributive_witness,
    PropertyId.MEDIAL: _medial_witness,
    PropertyId.LEFT_INVOLUTORY: _left_involutory_witness,
    PropertyId.COMMUTATIVE: _commutative_witness,
    PropertyId.LEFT_ALTERNATIVE: _left_alternative_witness,
}

_LOOP_CHECKS = {
    PropertyId.MOUFANG: _moufang_witness,
    PropertyId.LEFT_BOL: _left_bol_witness,
    PropertyId.LIP: _lip_witness,
    PropertyId.RIP: _rip_witness,
    PropertyId.AIP: _aip_witness,
    PropertyId.LAIP: _laip_witness,
    PropertyId.RAIP: _raip_witness,
}


def property_witness(t: CayleyTable | LoopView, p: PropertyId):
    """None when the defining identity of p holds; else a violating tuple.

    Loop-signature properties require a loop; a table without a two-sided
    unit raises AlgebraError.
    """
    if isinstance(t, LoopView):
        loop, table = t, t.table
    else:
        loop, table = None, t
    if p in _MAGMA_CHECKS:
        return _MAGMA_CHECKS[p](table)
    if loop is None:
        loop = LoopView.promote(table)
    if p in (PropertyId.MOUFANG, PropertyId.LEFT_BOL):
        return _LOOP_CHECKS[p](loop.table)
    return _LOOP_CHECKS[p](loop)


def has_property(t: CayleyTable | LoopView, p: PropertyId) -> bool:
    """Exhaustive check of the defining identity of p over all assignments."""
    return property_witness(t, p) is None


def is_quasigroup(t: CayleyTable) -> bool:
    return t.is_quasigroup


def is_quandle(t: CayleyTable) -> bool:
    """Idempotent, left distributive, rows bijective."""
    full = set(range(t.n))
    if any(set(r) != full for r in t.rows):
        return False
    return (
        _idempotent_witness(t) is None
        and _left_distributive_witness(t) is None
    )


def is_latin_quandle(t: CayleyTable) -> bool:
    return t.is_quasigroup and is_quandle(t)


def subalgebra_generated(t: CayleyTable, seed: Iterable[int]) -> tuple[int, ...]:
    """Least subset containing seed closed under * and the available divisions."""
    rows = t.rows
    have_ldiv = all(len(set(r)) == t.n for r in t.rows)
    have_rdiv = t.is_quasigroup
    closed = set(seed)
    frontier = list(closed)
    while frontier:
        new = []
        for a in list(closed):
            for b in frontier:
                for v in (rows[a][b], rows[b][a]):
                    if v not in closed:
                        closed.add(v)
                        new.append(v)
                if have_ldiv:
                    for v in (t.left_divide(a, b), t.left_divide(b, a)):
                        if v not in closed:
                            closed.add(v)
                            new.append(v)
                if have_rdiv:
                    for v in (t.right_divide(a, b), t.right_divide(b, a)):
                        if v not in closed:
                            closed.add(v)
                            new.append(v)
        frontier = new
    return tuple(sorted(closed))


def nucleus(l: LoopView) -> tuple[int, ...]:
    """Elements associating with all pairs on every side."""
    n, rows = l.n, l.table.rows
    out = []
    for a in range(n):
        ra = rows[a]
        ok = True
        for x in range(n):
            rx = rows[x]
            rxa = rows[rx[a]]
            rax = rows[ra[x]]
            for y in range(n):
                if ra[rx[y]] != rax[y] or rx[ra[y]] != rxa[y] \
                        or rx[rows[y][a]] != rows[rx[y]][a]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(a)
    return tuple(out)


def _associative_on(t: CayleyTable, elems: Sequence[int]) -> bool:
    rows = t.rows
    for a in elems:
        ra = rows[a]
        for b in elems:
            rab = rows[ra[b]]
            rb = rows[b]
            for c in elems:
                if rab[c] != ra[rb[c]]:
                    return False
    return True


def is_power_associative(l: LoopView) -> bool:
    t = l.table
    for a in range(l.n):
        sub = subalgebra_generated(t, (a,))
        if not _associative_on(t, sub):
            return False
    return True


def is_diassociative(l: LoopView) -> bool:
    t = l.table
    seen: set[tuple[int, ...]] = set()
    for a in range(l.n):
        for b in range(a, l.n):
            sub = subalgebra_generated(t, (a, b))
            if sub in seen:
                continue
            seen.add(sub)
            if not _associative_on(t, sub):
                return False
    return True


def is_uniquely_2_divisible(l: LoopView) -> bool:
    squares = {l.table.rows[x][x] for x in range(l.n)}
    return len(squares) == l.n


def is_associative(t: CayleyTable) -> bool:
    return _associative_on(t, range(t.n))


def is_k_nuclear(l: LoopView, f: Sequence[int], k: int) -> bool:
    """True iff x^k * f(x) lies in the nucleus for every x.

    For non-power-associative loops and |k| >= 2 the left-bracketed power
    x^k = x * x^(k-1) is used and a BracketingWarning is emitted.
    """
    if len(f) != l.n:
        raise AlgebraError("element map must assign an image to every element")
    if abs(k) >= 2 and not is_power_associative(l):
        warnings.warn(
            "powers are bracketing-dependent in a non-power-associative loop",
            BracketingWarning,
            stacklevel=2,
        )
    nuc = set(nucleus(l))
    rows = l.table.rows
    for x in range(l.n):
        if rows[l.power(x, k)][f[x]] not in nuc:
            return False
    return True


def element_orders(l: LoopView) -> tuple[int, ...]:
    """Multiset (sorted) of element orders by left-bracketed powers."""
    if not is_power_associative(l):
        warnings.warn(
            "element orders are bracketing-dependent here",
            BracketingWarning,
            stacklevel=2,
        )
    orders = []
    rows = l.table.rows
    for x in range(l.n):
        acc, k = rows[x][l.unit], 1
        while acc != l.unit:
            acc = rows[x][acc]
            k += 1
        orders.append(k)
    return tuple(sorted(orders))
