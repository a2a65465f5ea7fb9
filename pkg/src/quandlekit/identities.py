"""A small term language for quasigroup/loop identities.

Grammar: infix ``*`` (product), ``\\`` (left division), ``/`` (right
division), postfix ``'`` (left inverse x\\1) and ``~`` (right inverse 1/x),
the constant ``1``, single-letter variables, parentheses.  Precedence:
postfix inverses bind tightest, then ``*``, then the divisions; binary
operators associate to the left.  ``=`` separates the two sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

from .cayley import AlgebraError, CayleyTable, LoopView, PropertyId, find_unit


class ParseError(AlgebraError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class LDiv:
    left: object
    right: object


@dataclass(frozen=True)
class RDiv:
    left: object
    right: object


@dataclass(frozen=True)
class LInv:
    arg: object


@dataclass(frozen=True)
class RInv:
    arg: object


Term = Var | One | Mul | LDiv | RDiv | LInv | RInv


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term
    variables: tuple[str, ...]

    def __str__(self) -> str:
        return format_identity(self)


def term_variables(term: Term) -> set[str]:
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, One):
        return set()
    if isinstance(term, (LInv, RInv)):
        return term_variables(term.arg)
    return term_variables(term.left) | term_variables(term.right)


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    for i, ch in enumerate(text):
        if ch.isspace():
            continue
        if ch in "*\\/'~()=1":
            tokens.append((ch, i))
        elif ch.isalpha() and ch.islower():
            tokens.append(("v" + ch, i))
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, int]], length: int):
        self.tokens = tokens
        self.i = 0
        self.length = length

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def shown(self) -> str:
        tok = self.peek()
        return repr(tok[1] if tok and tok.startswith("v") else tok)

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else self.length

    def advance(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def atom(self) -> Term:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.pos())
        if tok == "(":
            self.advance()
            inner = self.divisions()
            if self.peek() != ")":
                raise ParseError("unbalanced parentheses", self.pos())
            self.advance()
            return self.postfix(inner)
        if tok == "1":
            self.advance()
            return self.postfix(One())
        if tok.startswith("v"):
            self.advance()
            return self.postfix(Var(tok[1]))
        raise ParseError(f"expected a term, found {self.shown()}", self.pos())

    def postfix(self, term: Term) -> Term:
        while self.peek() in ("'", "~"):
            term = LInv(term) if self.advance() == "'" else RInv(term)
        return term

    def products(self) -> Term:
        term = self.atom()
        while self.peek() == "*":
            self.advance()
            term = Mul(term, self.atom())
        return term

    def divisions(self) -> Term:
        term = self.products()
        while self.peek() in ("\\", "/"):
            op = self.advance()
            rhs = self.products()
            term = LDiv(term, rhs) if op == "\\" else RDiv(term, rhs)
        return term


def parse_term(text: str) -> Term:
    parser = _Parser(_tokenize(text), len(text))
    if parser.peek() is None:
        raise ParseError("empty side", 0)
    term = parser.divisions()
    if parser.peek() is not None:
        raise ParseError(f"trailing input {parser.shown()}", parser.pos())
    return term


def parse(text: str) -> Identity:
    """Parse an identity ``lhs = rhs``."""
    if text.count("=") != 1:
        raise ParseError("an identity needs exactly one '='", text.find("=") + 1)
    left, right = text.split("=")
    lhs = parse_term(left)
    # positions in the right half are reported relative to the whole string
    try:
        rhs = parse_term(right)
    except ParseError as exc:
        raise ParseError(str(exc).rsplit(" (at", 1)[0],
                         exc.pos + len(left) + 1) from None
    variables = tuple(sorted(term_variables(lhs) | term_variables(rhs)))
    return Identity(lhs, rhs, variables)


_PREC_DIV, _PREC_MUL, _PREC_POST = 1, 2, 3


def _fmt(term: Term, min_prec: int) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, One):
        return "1"
    if isinstance(term, (LInv, RInv)):
        body = _fmt(term.arg, _PREC_POST)
        text = body + ("'" if isinstance(term, LInv) else "~")
        prec = _PREC_POST
    elif isinstance(term, Mul):
        text = _fmt(term.left, _PREC_MUL) + "*" + _fmt(term.right, _PREC_MUL + 1)
        prec = _PREC_MUL
    else:
        op = "\\" if isinstance(term, LDiv) else "/"
        text = _fmt(term.left, _PREC_DIV) + op + _fmt(term.right, _PREC_DIV + 1)
        prec = _PREC_DIV
    if prec < min_prec:
        return "(" + text + ")"
    return text


def format_term(term: Term) -> str:
    return _fmt(term, 0)


def format_identity(ident: Identity) -> str:
    return f"{format_term(ident.lhs)}={format_term(ident.rhs)}"


def uses_divisions(term: Term) -> bool:
    if isinstance(term, (LDiv, RDiv)):
        return True
    if isinstance(term, (LInv, RInv)):
        return uses_divisions(term.arg)
    if isinstance(term, Mul):
        return uses_divisions(term.left) or uses_divisions(term.right)
    return False


def uses_loop_ops(term: Term) -> bool:
    if isinstance(term, (One, LInv, RInv)):
        return True
    if isinstance(term, (Mul, LDiv, RDiv)):
        return uses_loop_ops(term.left) or uses_loop_ops(term.right)
    return False


def _eval(term: Term, env: dict[str, int], t: CayleyTable, unit: int | None) -> int:
    if isinstance(term, Var):
        return env[term.name]
    if isinstance(term, One):
        return unit
    if isinstance(term, Mul):
        return t.rows[_eval(term.left, env, t, unit)][_eval(term.right, env, t, unit)]
    if isinstance(term, LDiv):
        return t.left_divide(
            _eval(term.left, env, t, unit), _eval(term.right, env, t, unit)
        )
    if isinstance(term, RDiv):
        return t.right_divide(
            _eval(term.left, env, t, unit), _eval(term.right, env, t, unit)
        )
    if isinstance(term, LInv):
        return t.left_divide(_eval(term.arg, env, t, unit), unit)
    return t.right_divide(unit, _eval(term.arg, env, t, unit))


def holds(t: CayleyTable, ident: Identity) -> dict[str, int] | None:
    """None when the identity is universally valid on t; otherwise the
    lexicographically first violating assignment."""
    needs_loop = uses_loop_ops(ident.lhs) or uses_loop_ops(ident.rhs)
    needs_div = needs_loop or uses_divisions(ident.lhs) or uses_divisions(ident.rhs)
    unit = None
    if needs_div and not t.is_quasigroup:
        raise AlgebraError("identity uses division but the table is not a quasigroup")
    if needs_loop:
        unit = find_unit(t)
        if unit is None:
            raise AlgebraError("identity uses loop operations but the table has no unit")
    names = ident.variables
    for values in product(range(t.n), repeat=len(names)):
        env = dict(zip(names, values))
        if _eval(ident.lhs, env, t, unit) != _eval(ident.rhs, env, t, unit):
            return env
    return None


#: defining identities for the property catalog (AIP needs both of its lines)
DEFINING_IDENTITIES: dict[PropertyId, tuple[str, ...]] = {
    PropertyId.IDEMPOTENT: ("x*x=x",),
    PropertyId.LEFT_DISTRIBUTIVE: ("x*(y*z)=(x*y)*(x*z)",),
    PropertyId.RIGHT_DISTRIBUTIVE: ("(z*y)*x=(z*x)*(y*x)",),
    PropertyId.MEDIAL: ("(x*y)*(u*v)=(x*u)*(y*v)",),
    PropertyId.LEFT_INVOLUTORY: ("x*(x*y)=y",),
    PropertyId.COMMUTATIVE: ("x*y=y*x",),
    PropertyId.LEFT_ALTERNATIVE: ("x*(x*y)=(x*x)*y",),
    PropertyId.MOUFANG: ("((x*y)*x)*z=x*(y*(x*z))",),
    PropertyId.LEFT_BOL: ("(x*(y*x))*z=x*(y*(x*z))",),
    PropertyId.LIP: ("x'*(x*y)=y",),
    PropertyId.RIP: ("(y*x)*x~=y",),
    PropertyId.AIP: ("(x*y)'=x'*y'", "x'=x~"),
    PropertyId.LAIP: ("(x*y)'=x'*y'",),
    PropertyId.RAIP: ("(x*y)~=x~*y~",),
}


# ---------------------------------------------------------------------------
# bounded model search

_CONSTRAINTS = {"quasigroup", "loop", "idempotent"}

_VALUE, _STUCK, _DEAD = 0, 1, 2


def _eval_partial(term: Term, env, grid, n: int):
    """Evaluate over a partial table.

    Returns (_VALUE, v, None), (_DEAD, None, None), or
    (_STUCK, cell, force) where cell is a table read to wait on and
    force, when not None, describes how a known value w for this whole
    term pins a cell: ('cell', a, b) means grid[a][b] = w, ('row', a, b)
    means grid[a][w] = b, ('col', c, t) means grid[w][c] = t.
    """
    if isinstance(term, Var):
        return _VALUE, env[term.name], None
    if isinstance(term, One):
        return _VALUE, 0, None
    if isinstance(term, Mul):
        kind, a, _f = _eval_partial(term.left, env, grid, n)
        if kind != _VALUE:
            return kind, a, None
        kind, b, _f = _eval_partial(term.right, env, grid, n)
        if kind != _VALUE:
            return kind, b, None
        v = grid[a][b]
        if v is None:
            return _STUCK, (a, b), ("cell", a, b)
        return _VALUE, v, None
    if isinstance(term, (LDiv, LInv)):
        # a \ b: the x with a*x = b; x' is x \ 1
        if isinstance(term, LInv):
            kind, a, _f = _eval_partial(term.arg, env, grid, n)
            b = 0
        else:
            kind, a, _f = _eval_partial(term.left, env, grid, n)
        if kind != _VALUE:
            return kind, a, None
        if isinstance(term, LDiv):
            kind, b, _f = _eval_partial(term.right, env, grid, n)
            if kind != _VALUE:
                return kind, b, None
        row = grid[a]
        for x in range(n):
            if row[x] == b:
                return _VALUE, x, None
        for x in range(n):
            if row[x] is None:
                return _STUCK, (a, x), ("row", a, b)
        return _DEAD, None, None
    # RDiv a/b: the y with y*b = a; RInv x~: the y with y*x = 1
    if isinstance(term, RInv):
        kind, col, _f = _eval_partial(term.arg, env, grid, n)
        if kind != _VALUE:
            return kind, col, None
        target = 0
    else:
        kind, target, _f = _eval_partial(term.left, env, grid, n)
        if kind != _VALUE:
            return kind, target, None
        kind, col, _f = _eval_partial(term.right, env, grid, n)
        if kind != _VALUE:
            return kind, col, None
    for y in range(n):
        if grid[y][col] == target:
            return _VALUE, y, None
    for y in range(n):
        if grid[y][col] is None:
            return _STUCK, (y, col), ("col", col, target)
    return _DEAD, None, None


def _force_cell(force, w):
    """The (cell, value) pinned by a force descriptor once the term equals w."""
    kind, a, b = force
    if kind == "cell":
        return (a, b), w
    if kind == "row":
        return (a, w), b
    return (w, a), b


def _instance_state(lhs, rhs, env, grid, n):
    """'conflict', ('ok',), ('stuck', cell) or ('force', cell, value)."""
    kl, vl, fl = _eval_partial(lhs, env, grid, n)
    if kl == _DEAD:
        return ("conflict",)
    kr, vr, fr = _eval_partial(rhs, env, grid, n)
    if kr == _DEAD:
        return ("conflict",)
    if kl == _VALUE and kr == _VALUE:
        return ("ok",) if vl == vr else ("conflict",)
    if kl == _VALUE and fr is not None:
        cell, value = _force_cell(fr, vl)
        return ("force", cell, value)
    if kr == _VALUE and fl is not None:
        cell, value = _force_cell(fl, vr)
        return ("force", cell, value)
    return ("stuck", vl if kl == _STUCK else vr)


class _Search:
    """Depth-first table completion with per-instance watches and
    unit propagation of fully determined ground instances."""

    def __init__(self, ids, n, latin, loop, idempotent):
        self.n = n
        self.latin = latin
        grid: list[list[int | None]] = [[None] * n for _ in range(n)]
        if loop:
            for j in range(n):
                grid[0][j] = j
                grid[j][0] = j
        if idempotent:
            for j in range(n):
                if grid[j][j] is not None and grid[j][j] != j:
                    raise _NoModels
                grid[j][j] = j
        self.grid = grid
        self.rowfree = [
            set(range(n)) - {v for v in row if v is not None} for row in grid
        ]
        self.colfree = [
            set(range(n)) - {grid[i][j] for i in range(n) if grid[i][j] is not None}
            for j in range(n)
        ]
        if latin:
            for i in range(n):
                row = [v for v in grid[i] if v is not None]
                col = [grid[j][i] for j in range(n) if grid[j][i] is not None]
                if len(set(row)) != len(row) or len(set(col)) != len(col):
                    raise _NoModels
        self.unset = sum(row.count(None) for row in grid)
        self.instances: list[tuple[Term, Term, dict[str, int]]] = []
        for ident in ids:
            for values in product(range(n), repeat=len(ident.variables)):
                self.instances.append(
                    (ident.lhs, ident.rhs, dict(zip(ident.variables, values)))
                )
        self.blocked: dict[tuple[int, int], list[int]] = {}
        for idx in range(len(self.instances)):
            state = self._eval(idx)
            if state[0] == "conflict":
                raise _NoModels
            if state[0] == "stuck":
                self.blocked.setdefault(state[1], []).append(idx)
            elif state[0] == "force":
                if self.propagate(state[1], state[2]) is None:
                    raise _NoModels

    def _eval(self, idx):
        lhs, rhs, env = self.instances[idx]
        return _instance_state(lhs, rhs, env, self.grid, self.n)

    def propagate(self, cell, value):
        """Set cell = value, wake watchers, chase forced cells.

        Returns an undo log, or None on conflict (state already restored).
        """
        log: list[tuple] = []
        queue = [(cell, value)]
        grid, blocked = self.grid, self.blocked
        while queue:
            (r, c), v = queue.pop()
            cur = grid[r][c]
            if cur is not None:
                if cur != v:
                    self.undo(log)
                    return None
                continue
            if self.latin and (v not in self.rowfree[r] or v not in self.colfree[c]):
                self.undo(log)
                return None
            grid[r][c] = v
            if self.latin:
                self.rowfree[r].discard(v)
                self.colfree[c].discard(v)
            self.unset -= 1
            log.append(("set", r, c, v))
            pending = blocked.get((r, c))
            if not pending:
                continue
            for idx in list(pending):
                state = self._eval(idx)
                if state[0] == "conflict":
                    self.undo(log)
                    return None
                pending.remove(idx)
                if state[0] == "stuck":
                    dest = state[1]
                    blocked.setdefault(dest, []).append(idx)
                    log.append(("wake", idx, (r, c), dest))
                else:
                    log.append(("wake", idx, (r, c), None))
                    if state[0] == "force":
                        queue.append((state[1], state[2]))
        return log

    def undo(self, log):
        grid, blocked = self.grid, self.blocked
        for entry in reversed(log):
            if entry[0] == "set":
                _kind, r, c, v = entry
                grid[r][c] = None
                if self.latin:
                    self.rowfree[r].add(v)
                    self.colfree[c].add(v)
                self.unset += 1
            else:
                _kind, idx, origin, dest = entry
                if dest is not None:
                    blocked[dest].remove(idx)
                blocked.setdefault(origin, []).append(idx)

    def pick_cell(self):
        grid = self.grid
        if not self.latin:
            for r in range(self.n):
                for c in range(self.n):
                    if grid[r][c] is None:
                        return (r, c), range(self.n)
            raise AssertionError("no unset cell")
        best = None
        best_count = self.n + 1
        for r in range(self.n):
            rowf = self.rowfree[r]
            row = grid[r]
            for c in range(self.n):
                if row[c] is None:
                    k = len(rowf & self.colfree[c])
                    if k < best_count:
                        best, best_count = (r, c), k
                        if k <= 1:
                            return best, sorted(
                                self.rowfree[best[0]] & self.colfree[best[1]]
                            )
        return best, sorted(self.rowfree[best[0]] & self.colfree[best[1]])

    def run(self):
        if self.unset == 0:
            yield [list(row) for row in self.grid]
            return
        cell, candidates = self.pick_cell()
        for v in candidates:
            log = self.propagate(cell, v)
            if log is not None:
                yield from self.run()
                self.undo(log)


class _NoModels(Exception):
    pass


def find_all_models(
    ids: Sequence[Identity],
    n: int,
    constraints: Iterable[str] = (),
    forbid: Sequence[Identity] = (),
    bound: int = 8,
) -> Iterator[CayleyTable]:
    """All tables of order n satisfying the identities and constraints.

    Cells are filled depth-first; every ground instance of every identity
    is re-checked as soon as the cells it was waiting on get set, and an
    instance with one side determined pins the cell the other side is
    reading (unit propagation).  ``forbid`` lists identities a model must
    violate.  With the 'loop' constraint the unit is normalized to 0, so
    only unit-normalized loop tables are produced.
    """
    if n > bound:
        raise AlgebraError(f"order {n} exceeds the configured bound {bound}")
    constraints = set(constraints)
    unknown = constraints - _CONSTRAINTS
    if unknown:
        raise AlgebraError(f"unknown constraints {sorted(unknown)}")
    all_ids = list(ids) + list(forbid)
    needs_loop = any(uses_loop_ops(i.lhs) or uses_loop_ops(i.rhs) for i in all_ids)
    needs_div = needs_loop or any(
        uses_divisions(i.lhs) or uses_divisions(i.rhs) for i in all_ids
    )
    if needs_loop and "loop" not in constraints:
        raise AlgebraError("identities use loop operations: add the 'loop' constraint")
    if needs_div and not constraints & {"quasigroup", "loop"}:
        raise AlgebraError("identities use division: add a latin constraint")

    try:
        search = _Search(
            ids,
            n,
            latin=bool(constraints & {"quasigroup", "loop"}),
            loop="loop" in constraints,
            idempotent="idempotent" in constraints,
        )
    except _NoModels:
        return
    for rows in search.run():
        table = CayleyTable(rows)
        for ident in ids:
            if holds(table, ident) is not None:
                raise AlgebraError("internal: model fails a required identity")
        if all(holds(table, ident) is not None for ident in forbid):
            yield table


def find_model(
    ids: Sequence[Identity],
    n: int,
    constraints: Iterable[str] = (),
    forbid: Sequence[Identity] = (),
    bound: int = 8,
) -> CayleyTable | None:
    """First model found, or None after exhausting the search space."""
    for table in find_all_models(ids, n, constraints, forbid, bound):
        return table
    return None
