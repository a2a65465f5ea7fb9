"""Census enumerators: quandles, latin quandles, loops, BO counts and
medial idempotent quasigroups, all up to isomorphism.

Quandles are searched row by row.  Rows are permutations fixing the
diagonal point, and left distributivity acts as a propagator: once rows
a and b are known, the row at a*b is forced to be the conjugate of row b
by row a.  Isomorph rejection: row 0 is restricted to canonical
cycle-type representatives of the minimal row type (every isomorphism
class has such a labeling), and survivors are deduplicated by invariant
buckets plus explicit isomorphism tests.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import permutations, product

from . import multgroup
from .cayley import AlgebraError, CayleyTable, LoopView
from .iso import (
    are_isomorphic,
    automorphisms,
    canonical_form,
    invariant_key,
    rows_isomorphic,
)
from .perm import Perm, compose, inverse

__all__ = [
    "are_isomorphic",
    "canonical_form",
    "enumerate_quandles",
    "enumerate_latin_quandles",
    "enumerate_loops",
    "count_bo",
    "enumerate_medial_idempotent",
    "write_census",
    "read_census",
    "BoundError",
]

QUANDLE_BOUND = 8
LATIN_QUANDLE_BOUND = 10
LOOP_BOUND = 7


class BoundError(AlgebraError):
    """Requested order exceeds the configured enumeration bound."""


def _partitions(m: int, maxpart: int | None = None):
    if m == 0:
        yield ()
        return
    if maxpart is None:
        maxpart = m
    for p in range(min(m, maxpart), 0, -1):
        for rest in _partitions(m - p, p):
            yield (p,) + rest


def _type_rep(n: int, k: int, parts: tuple[int, ...]) -> Perm:
    """Canonical permutation of 0..n-1 fixing k with the given cycle type."""
    pts = [i for i in range(n) if i != k]
    img = list(range(n))
    i = 0
    for p in parts:
        block = pts[i : i + p]
        for j in range(p):
            img[block[j]] = block[(j + 1) % p]
        i += p
    return tuple(img)


def _perm_type(p: Perm, k: int) -> tuple[int, ...]:
    """Cycle type over the points other than k, parts descending."""
    n = len(p)
    seen = [False] * n
    seen[k] = True
    lens = []
    for i in range(n):
        if seen[i]:
            continue
        m, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            m += 1
        lens.append(m)
    return tuple(sorted(lens, reverse=True))


@lru_cache(maxsize=None)
def _row_pool(n: int, k: int) -> tuple[tuple[tuple[int, ...], Perm], ...]:
    """All permutations fixing k, with their cycle types, type-major order."""
    pts = [i for i in range(n) if i != k]
    pool = []
    for images in permutations(pts):
        img = list(range(n))
        for p, v in zip(pts, images):
            img[p] = v
        row = tuple(img)
        pool.append((_perm_type(row, k), row))
    pool.sort()
    return tuple(pool)


def _search_quandles(n: int, latin: bool, row0_reps=None) -> list[tuple]:
    """All quandle tables with the row-0 normalization, as row tuples."""
    if n == 1:
        return [((0,),)]
    if row0_reps is None:
        parts_list = list(_partitions(n - 1))
        if latin:
            parts_list = [p for p in parts_list if 1 not in p]
        row0_reps = [_type_rep(n, 0, parts) for parts in parts_list]
    out: list[tuple] = []

    for row0 in row0_reps:
        type0 = _perm_type(row0, 0)
        known: dict[int, tuple[Perm, Perm]] = {}
        cols: list[set[int]] = [set() for _ in range(n)]

        def admit(m: int, row: Perm) -> bool:
            if row[m] != m:
                return False
            t = _perm_type(row, m)
            if latin:
                if t != type0:
                    return False
                for j in range(n):
                    if row[j] in cols[j]:
                        return False
            elif t < type0:
                return False
            return True

        def add(m: int, row: Perm, trail: list[int]) -> bool:
            """Install row m and run the conjugation closure."""
            queue = [(m, row)]
            while queue:
                m2, r2 = queue.pop()
                got = known.get(m2)
                if got is not None:
                    if got[0] != r2:
                        return False
                    continue
                if not admit(m2, r2):
                    return False
                inv2 = inverse(r2)
                known[m2] = (r2, inv2)
                trail.append(m2)
                if latin:
                    for j in range(n):
                        cols[j].add(r2[j])
                for m1, (r1, inv1) in known.items():
                    # row at m2*m1 is r2 r1 r2^{-1}; row at m1*m2 is r1 r2 r1^{-1}
                    queue.append(
                        (r2[m1], tuple(map(r2.__getitem__, map(r1.__getitem__, inv2))))
                    )
                    queue.append(
                        (r1[m2], tuple(map(r1.__getitem__, map(r2.__getitem__, inv1))))
                    )
            return True

        def undo(trail: list[int], mark: int) -> None:
            while len(trail) > mark:
                m2 = trail.pop()
                row = known.pop(m2)[0]
                if latin:
                    for j in range(n):
                        cols[j].discard(row[j])

        def fill(k: int) -> None:
            while k < n and k in known:
                k += 1
            if k == n:
                out.append(tuple(known[i][0] for i in range(n)))
                return
            pool = _row_pool(n, k)
            for t, cand in pool:
                if latin:
                    if t != type0:
                        continue
                elif t < type0:
                    continue
                trail: list[int] = []
                if add(k, cand, trail):
                    fill(k + 1)
                undo(trail, 0)

        trail0: list[int] = []
        if add(0, row0, trail0):
            fill(1)
        undo(trail0, 0)
    return out


def _dedupe_rows(tables: list[tuple], n: int) -> list[tuple]:
    """Keep one representative per isomorphism class."""
    buckets: dict = {}
    reps: list[tuple] = []
    for rows in tables:
        key = invariant_key(rows, n)
        bucket = buckets.setdefault(key, [])
        if not any(rows_isomorphic(rows, other, n) for other in bucket):
            bucket.append(rows)
            reps.append(rows)
    return reps


def _finalize(reps: list[tuple]) -> list[CayleyTable]:
    canon = [canonical_form(CayleyTable(rows)) for rows in reps]
    canon.sort(key=lambda t: t.rows)
    return canon


def enumerate_quandles(n: int, bound: int = QUANDLE_BOUND) -> list[CayleyTable]:
    """All quandles of order n up to isomorphism, as canonical tables."""
    if n > bound:
        raise BoundError(f"quandle enumeration is bounded at {bound}")
    return _finalize(_dedupe_rows(_search_quandles(n, latin=False), n))


def enumerate_latin_quandles(
    n: int, bound: int = LATIN_QUANDLE_BOUND
) -> list[CayleyTable]:
    """All latin quandles (left distributive quasigroups) of order n."""
    if n > bound:
        raise BoundError(f"latin quandle enumeration is bounded at {bound}")
    return _finalize(_dedupe_rows(_search_quandles(n, latin=True), n))


# ---------------------------------------------------------------------------
# loops

def _reduced_latin_squares(n: int):
    """Latin squares with identity first row and column (unit-normalized loops)."""
    if n == 1:
        yield ((0,),)
        return
    rows: list[list[int]] = [list(range(n))]
    rows += [[a] + [-1] * (n - 1) for a in range(1, n)]
    # column j starts with j from row 0; column 0 is complete
    col_used = [set(range(n))] + [{j} for j in range(1, n)]

    def fill(a: int, j: int):
        if a == n:
            yield tuple(tuple(r) for r in rows)
            return
        if j == n:
            yield from fill(a + 1, 1)
            return
        used_row = set(rows[a][:j])
        for v in range(n):
            if v in used_row or v in col_used[j]:
                continue
            rows[a][j] = v
            col_used[j].add(v)
            yield from fill(a, j + 1)
            col_used[j].discard(v)

    yield from fill(1, 1)


def enumerate_loops(n: int, bound: int = LOOP_BOUND) -> list[CayleyTable]:
    """All loops of order n up to isomorphism, canonical, unit at 0."""
    if n > bound:
        raise BoundError(f"loop enumeration is bounded at {bound}")
    reps = _dedupe_rows(list(_reduced_latin_squares(n)), n)
    return _finalize(reps)


def count_bo(n: int, bound: int = LOOP_BOUND) -> tuple[int, int, int]:
    """(BOM, BOL, BOQ) over all loops of order n.

    BOM counts loops that turn into a BO-module with a non-identity
    automorphism, BOL counts loops that are BO-loops for some automorphism,
    and BOQ counts, up to isomorphism, the quandles produced by all
    (loop, automorphism) BO-module pairs.
    """
    from .represent import check_bo_module, companion_map

    loops = enumerate_loops(n, bound=bound)
    ident = tuple(range(n))
    bom = bol = 0
    quandles: list[tuple] = []
    for table in loops:
        loop = LoopView.promote(table)
        nontrivial = False
        is_bo = False
        for psi in automorphisms(table):
            if check_bo_module(loop, psi) is not None:
                continue
            phi = companion_map(loop, psi)
            if psi != ident:
                nontrivial = True
            if len(set(phi)) == n:
                is_bo = True
            rows = table.rows
            quandles.append(
                tuple(
                    tuple(rows[phi[a]][psi[b]] for b in range(n))
                    for a in range(n)
                )
            )
        bom += nontrivial
        bol += is_bo
    boq = len(_dedupe_rows(quandles, n))
    return bom, bol, boq


# ---------------------------------------------------------------------------
# medial idempotent quasigroups over abelian groups

def _abelian_factor_lists(n: int) -> list[tuple[int, ...]]:
    """Cyclic factor multisets (prime-power decomposition) for order n."""
    factors_by_prime = []
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors_by_prime.append((p, e))
        p += 1
    if m > 1:
        factors_by_prime.append((m, 1))
    choices = []
    for p, e in factors_by_prime:
        choices.append([tuple(p**part for part in parts)
                        for parts in _partitions(e)])
    out = []
    for combo in product(*choices):
        factors = tuple(sorted((f for group in combo for f in group), reverse=True))
        out.append(factors)
    return out


class _AbelianGroup:
    """Additive group Z_{d1} x ... x Z_{dk} indexed lexicographically."""

    def __init__(self, factors: tuple[int, ...]):
        self.factors = factors
        self.elements = list(product(*(range(d) for d in factors)))
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.n = len(self.elements)
        n = self.n
        self.addtab = [
            tuple(
                self.index[
                    tuple((x + y) % d for x, y, d in zip(ea, eb, factors))
                ]
                for eb in self.elements
            )
            for ea in self.elements
        ]
        top = max(factors, default=1)
        self.multtab = [[0] * n]
        for c in range(1, top + 1):
            prev = self.multtab[-1]
            self.multtab.append([self.addtab[prev[a]][a] for a in range(n)])

    def add(self, a: int, b: int) -> int:
        return self.addtab[a][b]

    def neg(self, a: int) -> int:
        return self.index[
            tuple((-x) % d for x, d in zip(self.elements[a], self.factors))
        ]

    def scale(self, c: int, a: int) -> int:
        return self.multtab[c][a]

    def automorphisms(self) -> list[Perm]:
        """Brute force over generator images."""
        candidates = []
        for d in self.factors:
            candidates.append(
                [a for a in range(self.n) if self.scale(d, a) == 0]
            )
        add = self.addtab
        mult = self.multtab
        auts = []
        for images in product(*candidates):
            img = []
            for coords in self.elements:
                acc = 0
                for c, g_img in zip(coords, images):
                    acc = add[acc][mult[c][g_img]]
                img.append(acc)
            if len(set(img)) == self.n:
                auts.append(tuple(img))
        return auts


def enumerate_medial_idempotent(n: int, bound: int = 16) -> list[CayleyTable]:
    """Medial idempotent quasigroups of order n up to isomorphism.

    These are exactly the tables x*y = (x - psi(x)) + psi(y) over an
    abelian group with psi an automorphism whose companion x - psi(x) is
    bijective; pairs are deduplicated by conjugacy in the automorphism
    group.
    """
    if n > bound:
        raise BoundError(f"medial idempotent enumeration is bounded at {bound}")
    out = []
    for factors in _abelian_factor_lists(n):
        grp = _AbelianGroup(factors)
        auts = grp.automorphisms()
        aut_set = set(auts)
        regular = []
        for psi in auts:
            phi = tuple(grp.add(x, grp.neg(psi[x])) for x in range(n))
            if len(set(phi)) == n:
                regular.append((psi, phi))
        seen: set[Perm] = set()
        for psi, phi in regular:
            if psi in seen:
                continue
            orbit = {compose(compose(g, psi), inverse(g)) for g in aut_set}
            seen |= orbit
            rows = tuple(
                tuple(grp.add(phi[a], psi[b]) for b in range(n))
                for a in range(n)
            )
            out.append(CayleyTable(rows))
    return out


# ---------------------------------------------------------------------------
# census files

def write_census(path, family: str, order: int, tables: list[CayleyTable]) -> None:
    from .cayley import format_table

    with open(path, "w") as fh:
        fh.write(f"{family} {order} {len(tables)}\n")
        for i, t in enumerate(tables):
            if i:
                fh.write("%\n")
            fh.write(format_table(t))


def read_census(path) -> tuple[str, int, list[CayleyTable]]:
    from .cayley import parse_table

    with open(path) as fh:
        text = fh.read()
    lines = text.splitlines()
    if not lines:
        raise AlgebraError("empty census file")
    head = lines[0].split()
    if len(head) != 3:
        raise AlgebraError("census header must be: family order count")
    family, order, count = head[0], int(head[1]), int(head[2])
    tables = []
    chunk: list[str] = []
    for line in lines[1:] + ["%"]:
        if line.strip() == "%":
            if chunk:
                tables.append(parse_table("\n".join(chunk)))
                chunk = []
        else:
            chunk.append(line)
    if len(tables) != count:
        raise AlgebraError(
            f"census file announces {count} tables but holds {len(tables)}"
        )
    return family, order, tables


def is_connected_quandle(t: CayleyTable) -> bool:
    return multgroup.is_connected(t)
