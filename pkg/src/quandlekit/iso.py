"""Isomorphism testing and canonical forms for Cayley tables.

The isomorphism search backtracks over images with forced propagation
(f(x*y) = f(x)*f(y) pins further images) and prunes by per-element
invariant classes.  The canonical form is the lexicographically least
relabeled table, found by ordered backtracking with prefix pruning.
"""

from __future__ import annotations

from collections import Counter
from itertools import chain
from typing import Iterator

from .cayley import CayleyTable
from .perm import Perm, cycle_type

Rows = tuple[tuple[int, ...], ...]


def element_profiles(rows: Rows, n: int) -> list[tuple]:
    """Relabeling-invariant per-element signatures (row/column shape)."""
    cols = list(zip(*rows))
    profs = []
    for x in range(n):
        row = rows[x]
        if len(set(row)) == n:
            rsig = ("p",) + cycle_type(row)
        else:
            rsig = ("m",) + tuple(sorted(Counter(row).values(), reverse=True))
        col = cols[x]
        if len(set(col)) == n:
            csig = ("p",) + cycle_type(col)
        else:
            csig = ("m",) + tuple(sorted(Counter(col).values(), reverse=True))
        profs.append((rsig, csig, row[x] == x,
                      sum(1 for y in range(n) if row[y] == y)))
    return profs


def invariant_key(rows: Rows, n: int):
    """A cheap isomorphism invariant of the whole table, for bucketing."""
    return tuple(sorted(Counter(element_profiles(rows, n)).items()))


def _refined_classes(ra: Rows, rb: Rows, n: int, rounds: int = 2):
    """Joint invariant refinement; returns class ids or None on mismatch."""
    pa = element_profiles(ra, n)
    pb = element_profiles(rb, n)
    for _ in range(rounds):
        codes: dict = {}

        def code(v):
            return codes.setdefault(v, len(codes))

        ca = [code(p) for p in pa]
        cb = [code(p) for p in pb]
        if sorted(ca) != sorted(cb):
            return None
        pa = [
            (ca[x], tuple(sorted((ca[y], ca[ra[x][y]], ca[ra[y][x]])
                                 for y in range(n))))
            for x in range(n)
        ]
        pb = [
            (cb[x], tuple(sorted((cb[y], cb[rb[x][y]], cb[rb[y][x]])
                                 for y in range(n))))
            for x in range(n)
        ]
    codes = {}

    def code(v):
        return codes.setdefault(v, len(codes))

    ca = [code(p) for p in pa]
    cb = [code(p) for p in pb]
    if sorted(ca) != sorted(cb):
        return None
    return ca, cb


def _iso_maps(ra: Rows, rb: Rows, n: int, all_maps: bool) -> Iterator[Perm]:
    classes = _refined_classes(ra, rb, n)
    if classes is None:
        return
    ca, cb = classes
    size = Counter(ca)
    targets: dict[int, list[int]] = {}
    for y in range(n):
        targets.setdefault(cb[y], []).append(y)
    order = sorted(range(n), key=lambda x: (size[ca[x]], x))
    f = [-1] * n
    g = [-1] * n
    trail: list[int] = []

    def force(x: int, y: int) -> bool:
        queue = [(x, y)]
        while queue:
            p, q = queue.pop()
            fp = f[p]
            if fp != -1:
                if fp != q:
                    return False
                continue
            if g[q] != -1 or ca[p] != cb[q]:
                return False
            f[p] = q
            g[q] = p
            trail.append(p)
            rap, rbq = ra[p], rb[q]
            for xp in trail:
                yp = f[xp]
                queue.append((rap[xp], rbq[yp]))
                queue.append((ra[xp][p], rb[yp][q]))
        return True

    def rec(depth: int) -> Iterator[Perm]:
        while depth < n and f[order[depth]] != -1:
            depth += 1
        if depth == n:
            yield tuple(f)
            return
        x = order[depth]
        for y in targets[ca[x]]:
            if g[y] != -1:
                continue
            mark = len(trail)
            if force(x, y):
                yield from rec(depth + 1)
            while len(trail) > mark:
                p = trail.pop()
                g[f[p]] = -1
                f[p] = -1

    yield from rec(0)


def isomorphisms(a: CayleyTable, b: CayleyTable) -> Iterator[Perm]:
    """All bijections f with f(x*y) = f(x)*f(y)."""
    if a.n != b.n:
        return iter(())
    return _iso_maps(a.rows, b.rows, a.n, all_maps=True)


def are_isomorphic(a: CayleyTable, b: CayleyTable) -> Perm | None:
    """An isomorphism a -> b, or None."""
    if a.n != b.n:
        return None
    for f in _iso_maps(a.rows, b.rows, a.n, all_maps=False):
        return f
    return None


def rows_isomorphic(ra: Rows, rb: Rows, n: int) -> bool:
    for _ in _iso_maps(ra, rb, n, all_maps=False):
        return True
    return False


def automorphisms(t: CayleyTable) -> list[Perm]:
    return list(_iso_maps(t.rows, t.rows, t.n, all_maps=True))


def canonical_form(t: CayleyTable) -> CayleyTable:
    """The lexicographically least table among all relabelings.

    Ordered backtracking: output cells are produced row-major, the
    element occupying a position (and the position of a product value)
    is decided exactly when a cell first needs it, and a branch is cut
    as soon as its cell exceeds the best table found so far.  Candidate
    elements whose swap with an already-tried candidate is an
    automorphism produce identical subtrees and are skipped.  Equal
    canonical forms characterize isomorphism.
    """
    rows, n = t.rows, t.n
    if n == 1:
        return t
    total = n * n
    elem = [-1] * n   # position -> original
    pos = [-1] * n    # original -> position
    out = [0] * total
    best: list[int] | None = None
    # tight[0] = length of the common prefix of out and best
    tight = [0]

    swap_cache: dict[tuple[int, int], bool] = {}

    def swap_ok(x: int, y: int) -> bool:
        key = (x, y) if x < y else (y, x)
        hit = swap_cache.get(key)
        if hit is None:
            a, b = key
            sigma = list(range(n))
            sigma[a], sigma[b] = b, a
            hit = all(
                sigma[rows[p][q]] == rows[sigma[p]][sigma[q]]
                for p in range(n)
                for q in range(n)
            )
            swap_cache[key] = hit
        return hit

    def emit(k: int, value: int) -> bool:
        """Record out[k]; False when the branch cannot beat best."""
        if best is not None and tight[0] >= k:
            b = best[k]
            if value > b:
                return False
            out[k] = value
            tight[0] = k + 1 if value == b else k
        else:
            out[k] = value
        return True

    def rec(k: int) -> None:
        nonlocal best
        if k == total:
            if best is None or tight[0] < total:
                best = out.copy()
            tight[0] = total
            return
        i, j = divmod(k, n)
        if elem[i] == -1:
            kept: list[int] = []
            for x in range(n):
                if pos[x] != -1 or any(swap_ok(x, y) for y in kept):
                    continue
                kept.append(x)
                elem[i] = x
                pos[x] = i
                middle(k, i, j)
                elem[i] = -1
                pos[x] = -1
                tight[0] = min(tight[0], k)
        else:
            middle(k, i, j)
            tight[0] = min(tight[0], k)

    def middle(k: int, i: int, j: int) -> None:
        if elem[j] != -1:
            final(k, i, j)
            return
        row = rows[elem[i]]
        mu = next(q for q in range(n) if elem[q] == -1)

        def score(x: int) -> int:
            v = row[x]
            if v == x:
                return j
            p = pos[v]
            return p if p != -1 else mu

        kept: list[int] = []
        for x in sorted((x for x in range(n) if pos[x] == -1), key=score):
            if any(swap_ok(x, y) for y in kept):
                continue
            kept.append(x)
            elem[j] = x
            pos[x] = j
            final(k, i, j)
            elem[j] = -1
            pos[x] = -1
            tight[0] = min(tight[0], k)

    def final(k: int, i: int, j: int) -> None:
        v = rows[elem[i]][elem[j]]
        p = pos[v]
        if p != -1:
            if emit(k, p):
                rec(k + 1)
            tight[0] = min(tight[0], k)
            return
        first = True
        for q in range(n):
            if elem[q] != -1:
                continue
            in_tight = best is not None and tight[0] >= k
            if not in_tight and not first:
                # with the prefix already strictly smaller, only the least
                # free position can realize the subtree minimum
                break
            if not emit(k, q):
                break
            elem[q] = v
            pos[v] = q
            rec(k + 1)
            elem[q] = -1
            pos[v] = -1
            tight[0] = min(tight[0], k)
            first = False

    rec(0)
    flat = best
    return CayleyTable(
        tuple(tuple(flat[i * n + j] for j in range(n)) for i in range(n))
    )
