"""Permutations on 0..n-1 and finite permutation groups given by generators.

Permutations are image tuples: p[i] is the image of i.  Composition is
right-to-left, (p @ q)(x) = p(q(x)), and conjugation is a^b = b a b^{-1}.
Groups materialize their full element set (bounded by a cap), which keeps
stabilizers, centers and conjugacy classes exact and trivial to compute.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence

from .cayley import AlgebraError

Perm = tuple[int, ...]

DEFAULT_CAP = 10**6


class CapExceeded(AlgebraError):
    """Group materialization outgrew the configured cap."""


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """p after q."""
    return tuple(map(p.__getitem__, q))


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def conjugate(a: Perm, b: Perm) -> Perm:
    """a^b = b a b^{-1}."""
    return compose(compose(b, a), inverse(b))


def commutator(a: Perm, b: Perm) -> Perm:
    return compose(compose(a, b), compose(inverse(a), inverse(b)))


def is_permutation(seq: Sequence[int], n: int) -> bool:
    return len(seq) == n and set(seq) == set(range(n))


def cycle_type(p: Perm, skip: Iterable[int] = ()) -> tuple[int, ...]:
    """Cycle lengths (descending) over the points outside ``skip``."""
    omit = set(skip)
    seen = [False] * len(p)
    lens = []
    for i in range(len(p)):
        if seen[i] or i in omit:
            continue
        k, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            k += 1
        lens.append(k)
    return tuple(sorted(lens, reverse=True))


class PermGroup:
    """A permutation group with generators and a materialized element set."""

    __slots__ = ("degree", "generators", "elements")

    def __init__(self, degree: int, generators: Iterable[Perm],
                 elements: frozenset[Perm]):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p in self.elements

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PermGroup)
            and self.degree == other.degree
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((self.degree, self.elements))

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self.elements <= other.elements


def generate(gens: Sequence[Perm], order_cap: int = DEFAULT_CAP,
             degree: int | None = None) -> PermGroup:
    """Breadth-first closure of the generators under composition."""
    gens = [tuple(g) for g in gens]
    if degree is None:
        if not gens:
            raise AlgebraError("degree required for an empty generating set")
        degree = len(gens[0])
    for g in gens:
        if not is_permutation(g, degree):
            raise AlgebraError(f"generator {g} is not a permutation of 0..{degree - 1}")
    ident = identity_perm(degree)
    elements = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for g in gens:
            for x in frontier:
                y = compose(g, x)
                if y not in elements:
                    elements.add(y)
                    new.append(y)
                    if len(elements) > order_cap:
                        raise CapExceeded(
                            f"group order exceeds cap {order_cap}"
                        )
        frontier = new
    return PermGroup(degree, gens, frozenset(elements))


def from_elements(degree: int, elements: Iterable[Perm]) -> PermGroup:
    """Wrap an already-closed element set (identity added if missing)."""
    els = frozenset(tuple(p) for p in elements) | {identity_perm(degree)}
    return PermGroup(degree, tuple(sorted(els)), els)


def orbit(g: PermGroup, e: int) -> tuple[int, ...]:
    """The orbit of e under g, in traversal order."""
    if not 0 <= e < g.degree:
        raise AlgebraError(f"point {e} outside 0..{g.degree - 1}")
    seen = {e}
    out = [e]
    frontier = [e]
    while frontier:
        new = []
        for x in frontier:
            for gen in g.generators:
                y = gen[x]
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    new.append(y)
        frontier = new
    return tuple(out)


def transversal(g: PermGroup, e: int) -> dict[int, Perm]:
    """Coset representatives u_x with u_x(e) = x, from the orbit traversal."""
    reps = {e: identity_perm(g.degree)}
    frontier = [e]
    while frontier:
        new = []
        for x in frontier:
            for gen in g.generators:
                y = gen[x]
                if y not in reps:
                    reps[y] = compose(gen, reps[x])
                    new.append(y)
        frontier = new
    return reps


def stabilizer(g: PermGroup, e: int) -> PermGroup:
    """The stabilizer of e, generated by Schreier generators."""
    reps = transversal(g, e)
    schreier = []
    seen = set()
    for x, ux in reps.items():
        for gen in g.generators:
            s = compose(inverse(reps[gen[x]]), compose(gen, ux))
            if s not in seen:
                seen.add(s)
                schreier.append(s)
    ident = identity_perm(g.degree)
    gens = tuple(s for s in schreier if s != ident)
    elements = frozenset(p for p in g.elements if p[e] == e)
    if len(reps) * len(elements) != len(g.elements):
        raise AlgebraError("orbit-stabilizer mismatch; group not closed")
    return PermGroup(g.degree, gens if gens else (ident,), elements)


def is_transitive(g: PermGroup) -> bool:
    return len(orbit(g, 0)) == g.degree


def derived_subgroup(g: PermGroup, order_cap: int = DEFAULT_CAP) -> PermGroup:
    """The commutator subgroup, via normal closure of generator commutators."""
    gens = list(g.generators)
    comms = []
    seen = set()
    for a in gens:
        for b in gens:
            c = commutator(a, b)
            if c not in seen:
                seen.add(c)
                comms.append(c)
    ident = identity_perm(g.degree)
    current = [c for c in comms if c != ident]
    if not current:
        return PermGroup(g.degree, (ident,), frozenset({ident}))
    while True:
        h = generate(current, order_cap=order_cap, degree=g.degree)
        missing = []
        for s in current:
            for gen in gens:
                c = conjugate(s, gen)
                if c not in h.elements:
                    missing.append(c)
        if not missing:
            return h
        current = current + missing


def derived_series(g: PermGroup, order_cap: int = DEFAULT_CAP) -> list[PermGroup]:
    """g, g', g'', ... until the series stabilizes."""
    series = [g]
    while True:
        nxt = derived_subgroup(series[-1], order_cap=order_cap)
        if nxt.elements == series[-1].elements:
            return series
        series.append(nxt)
        if nxt.order == 1:
            return series


def is_solvable(g: PermGroup, order_cap: int = DEFAULT_CAP) -> bool:
    return derived_series(g, order_cap=order_cap)[-1].order == 1


def center_of_subgroup(g: PermGroup, h: PermGroup) -> list[Perm]:
    """Elements of h commuting with every element of h."""
    if not h.is_subgroup_of(g):
        raise AlgebraError("h is not contained in g")
    hel = sorted(h.elements)
    return [z for z in hel if all(compose(z, x) == compose(x, z) for x in hel)]


def conjugacy_class(g: PermGroup, x: Perm) -> frozenset[Perm]:
    if x not in g.elements:
        raise AlgebraError("element not in group")
    seen = {x}
    frontier = [x]
    while frontier:
        new = []
        for y in frontier:
            for gen in g.generators:
                z = conjugate(y, gen)
                if z not in seen:
                    seen.add(z)
                    new.append(z)
        frontier = new
    return frozenset(seen)


def is_transversal(s: Iterable[Perm], g: PermGroup, h: PermGroup) -> bool:
    """True iff every left coset of h in g meets s exactly once."""
    if not h.is_subgroup_of(g):
        raise AlgebraError("h is not contained in g")
    s = [tuple(p) for p in s]
    if any(p not in g.elements for p in s):
        raise AlgebraError("transversal candidate contains outside elements")
    index = len(g.elements) // len(h.elements)
    if len(set(s)) != len(s) or len(s) != index:
        return False
    hel = list(h.elements)
    reps = {min(compose(u, k) for k in hel) for u in s}
    return len(reps) == index


def parse_perms(text: str) -> list[Perm]:
    """Read permutations: a degree line, then one image row per permutation."""
    values: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.append([int(tok) for tok in line.split()])
        except ValueError:
            raise AlgebraError(f"line {lineno}: non-integer token") from None
    if not values:
        raise AlgebraError("no data lines")
    if len(values[0]) != 1:
        raise AlgebraError("first data line must hold the degree alone")
    n = values[0][0]
    perms = []
    for row in values[1:]:
        if not is_permutation(row, n):
            raise AlgebraError(f"row {row} is not a permutation of 0..{n - 1}")
        perms.append(tuple(row))
    if not perms:
        raise AlgebraError("no permutations after the degree line")
    return perms


def format_perms(perms: Sequence[Perm]) -> str:
    n = len(perms[0])
    lines = [str(n)]
    lines.extend(" ".join(str(v) for v in p) for p in perms)
    return "\n".join(lines) + "\n"
