"""Multiplication groups, connectedness, automorphisms, homogeneity."""

from __future__ import annotations

from . import perm
from .cayley import AlgebraError, CayleyTable
from .iso import automorphisms
from .perm import Perm, PermGroup


def left_translations(t: CayleyTable) -> list[Perm]:
    """The rows of t as permutations; fails on a non-bijective row."""
    out = []
    for a, row in enumerate(t.rows):
        if len(set(row)) != t.n:
            raise AlgebraError(f"left translation by {a} is not a bijection")
        out.append(row)
    return out


def right_translations(t: CayleyTable) -> list[Perm]:
    out = []
    for a, col in enumerate(t.columns):
        if len(set(col)) != t.n:
            raise AlgebraError(f"right translation by {a} is not a bijection")
        out.append(col)
    return out


def lmlt(t: CayleyTable, order_cap: int = perm.DEFAULT_CAP) -> PermGroup:
    """Group generated by the left translations."""
    return perm.generate(left_translations(t), order_cap=order_cap, degree=t.n)


def rmlt(t: CayleyTable, order_cap: int = perm.DEFAULT_CAP) -> PermGroup:
    return perm.generate(right_translations(t), order_cap=order_cap, degree=t.n)


def mlt(t: CayleyTable, order_cap: int = perm.DEFAULT_CAP) -> PermGroup:
    gens = left_translations(t) + right_translations(t)
    return perm.generate(gens, order_cap=order_cap, degree=t.n)


def is_connected(t: CayleyTable) -> bool:
    """True iff the left multiplication group acts transitively."""
    gens = left_translations(t)
    seen = {0}
    frontier = [0]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return len(seen) == t.n


def automorphism_group(t: CayleyTable) -> PermGroup:
    """All f with f(x*y) = f(x)*f(y), by backtracking over images."""
    auts = automorphisms(t)
    return perm.from_elements(t.n, auts)


def is_homogeneous(t: CayleyTable) -> bool:
    """True iff the automorphism group acts transitively."""
    return perm.is_transitive(automorphism_group(t))
