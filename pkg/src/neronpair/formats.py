"""Text formats read by the command line tool.

All formats are line based; ``#`` starts a comment and blank lines are
ignored.  Errors are reported as :class:`InputError` carrying the 1-based
line and column of the offending token.

matrix::

    2 2
    2 0
    0 3

datum (a square matrix with its size given once)::

    2
    2 1
    1 3

graph (vertex count, then one edge per line)::

    3
    0 1
    1 2
    2 0

group descriptor: ``free_rank; d1,d2,...`` such as ``0; 2,4``.

module (a finite group, then the matrix of sigma)::

    0; 8
    3

presheaf::

    index 0 1 2
    group 0 = 1;
    group 0 1 = 1;
    map 0 -> 0 1
    1

Maps that are not listed default to the identity between equal groups and to
zero otherwise.  A ``map`` line is followed by one matrix row per generator of
the target group.

complex::

    term 0 = 1;
    term 1 = 1;
    diff 0
    2
"""

from __future__ import annotations

from dataclasses import dataclass

from .cech import CoveringPresheaf, PresheafError
from .complexes import Complex, ComplexError
from .fgab import FpAbGroup, GroupError, GroupHom
from .group_cohomology import MonogenicModule
from .linalg import IntegerMatrix
from .monodromy import DegenerationGraph, UniformizationDatum


class InputError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


@dataclass
class Token:
    text: str
    line: int
    column: int

    def integer(self) -> int:
        try:
            return int(self.text)
        except ValueError:
            raise InputError(f"expected an integer, found {self.text!r}", self.line, self.column) from None


@dataclass
class Line:
    number: int
    text: str  # comment removed, columns preserved
    tokens: list[Token]


def _lines(text: str) -> list[Line]:
    out = []
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks, i = [], 0
        while i < len(body):
            if body[i].isspace():
                i += 1
                continue
            j = i
            while j < len(body) and not body[j].isspace():
                j += 1
            toks.append(Token(body[i:j], n, i + 1))
            i = j
        if toks:
            out.append(Line(n, body, toks))
    return out


class _Cursor:
    def __init__(self, text: str):
        self.lines = _lines(text)
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.lines)

    def peek(self) -> Line | None:
        return None if self.done() else self.lines[self.pos]

    def next(self, what: str) -> Line:
        if self.done():
            last = self.lines[-1].number if self.lines else 1
            raise InputError(f"unexpected end of input, expected {what}", last + (1 if self.lines else 0))
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def ints(self, what: str, count: int | None = None) -> list[int]:
        line = self.next(what)
        vals = [t.integer() for t in line.tokens]
        if count is not None and len(vals) != count:
            tok = line.tokens[min(count, len(line.tokens) - 1)]
            raise InputError(f"expected {count} integers in {what}, found {len(vals)}", line.number, tok.column)
        return vals

    def finish(self):
        if not self.done():
            line = self.lines[self.pos]
            raise InputError("unexpected trailing input", line.number, line.tokens[0].column)


def _matrix_rows(cur: _Cursor, rows: int, cols: int, what: str) -> IntegerMatrix:
    data = [cur.ints(f"row {i + 1} of {what}", cols) for i in range(rows)]
    return IntegerMatrix.from_rows(data, cols=cols)


def parse_matrix(text: str) -> IntegerMatrix:
    cur = _Cursor(text)
    r, c = cur.ints("the matrix header 'rows cols'", 2)
    if r < 0 or c < 0:
        raise InputError("matrix dimensions must be nonnegative", cur.lines[0].number, 1)
    m = _matrix_rows(cur, r, c, "the matrix")
    cur.finish()
    return m


def parse_datum(text: str) -> UniformizationDatum:
    """May raise :class:`~neronpair.monodromy.DegenerateDatum` for singular input."""
    cur = _Cursor(text)
    (d,) = cur.ints("the toric rank", 1)
    if d < 0:
        raise InputError("toric rank must be nonnegative", cur.lines[0].number, 1)
    u = _matrix_rows(cur, d, d, "u")
    cur.finish()
    return UniformizationDatum(u)


def parse_graph(text: str) -> DegenerationGraph:
    """May raise :class:`~neronpair.monodromy.GraphError` for disconnected input."""
    cur = _Cursor(text)
    (n,) = cur.ints("the vertex count", 1)
    edges = []
    while not cur.done():
        line = cur.peek()
        a, b = cur.ints("an edge 'a b'", 2)
        for tok, v in zip(line.tokens, (a, b)):
            if not 0 <= v < n:
                raise InputError(f"vertex {v} outside 0..{n - 1}", line.number, tok.column)
        edges.append((a, b))
    if n < 1:
        raise InputError("a graph needs at least one vertex", cur.lines[0].number, 1)
    return DegenerationGraph(n, tuple(edges))


def parse_group(text: str, line: int | None = None, column: int | None = None) -> FpAbGroup:
    try:
        return FpAbGroup.parse(text)
    except (GroupError, ValueError) as exc:
        raise InputError(f"bad group descriptor {text.strip()!r}: {exc}", line, column) from None


def parse_module(text: str) -> MonogenicModule:
    cur = _Cursor(text)
    head = cur.next("a group descriptor")
    G = parse_group(head.text, head.number, 1)
    if not G.is_finite:
        raise InputError("the module must be finite", head.number, 1)
    S = _matrix_rows(cur, G.ngens, G.ngens, "sigma")
    cur.finish()
    try:
        return MonogenicModule(G, GroupHom(G, G, S))
    except GroupError as exc:
        raise InputError(str(exc), head.number) from None


def _subset(tokens: list[Token], index: set[int]) -> frozenset:
    out = []
    for t in tokens:
        v = t.integer()
        if v not in index:
            raise InputError(f"{v} is not in the index set", t.line, t.column)
        out.append(v)
    if not out:
        raise InputError("empty subset")
    return frozenset(out)


def parse_presheaf(text: str) -> CoveringPresheaf:
    cur = _Cursor(text)
    head = cur.next("an 'index' line")
    if head.tokens[0].text != "index":
        raise InputError("first line must be 'index i j ...'", head.number, 1)
    index = [t.integer() for t in head.tokens[1:]]
    if not index:
        raise InputError("the index set is empty", head.number, 1)
    iset = set(index)
    values, maps = {}, {}
    while not cur.done():
        line = cur.next("a 'group' or 'map' record")
        kw = line.tokens[0]
        if kw.text == "group":
            if "=" not in line.text:
                raise InputError("expected 'group <subset> = <descriptor>'", line.number, kw.column)
            lhs, rhs = line.text.split("=", 1)
            eq_col = line.text.index("=") + 1
            subset_toks = [t for t in line.tokens[1:] if t.column < eq_col]
            S = _subset(subset_toks, iset)
            values[S] = parse_group(rhs, line.number, eq_col + 1)
        elif kw.text == "map":
            arrow = [t for t in line.tokens if t.text == "->"]
            if len(arrow) != 1:
                raise InputError("expected 'map <subset> -> <subset>'", line.number, kw.column)
            k = line.tokens.index(arrow[0])
            S = _subset(line.tokens[1:k], iset)
            T = _subset(line.tokens[k + 1:], iset)
            GS, GT = values.get(S), values.get(T)
            if GS is None or GT is None:
                raise InputError("declare both groups before the map", line.number, kw.column)
            m = _matrix_rows(cur, GT.ngens, GS.ngens, f"the map {sorted(S)} -> {sorted(T)}")
            try:
                maps[(S, T)] = GroupHom(GS, GT, m)
            except GroupError as exc:
                raise InputError(str(exc), line.number, kw.column) from None
        else:
            raise InputError(f"unknown record {kw.text!r}", line.number, kw.column)
    try:
        return CoveringPresheaf.with_defaults(index, values, maps)
    except (PresheafError, GroupError) as exc:
        raise InputError(str(exc)) from None


def parse_complex(text: str) -> Complex:
    cur = _Cursor(text)
    terms: dict[int, FpAbGroup] = {}
    diffs: dict[int, tuple[Line, IntegerMatrix]] = {}
    while not cur.done():
        line = cur.next("a 'term' or 'diff' record")
        kw = line.tokens[0]
        if kw.text == "term":
            if "=" not in line.text or len(line.tokens) < 3:
                raise InputError("expected 'term <degree> = <descriptor>'", line.number, kw.column)
            n = line.tokens[1].integer()
            if n in terms:
                raise InputError(f"degree {n} declared twice", line.number, line.tokens[1].column)
            eq_col = line.text.index("=") + 1
            terms[n] = parse_group(line.text.split("=", 1)[1], line.number, eq_col + 1)
        elif kw.text == "diff":
            if len(line.tokens) != 2:
                raise InputError("expected 'diff <degree>'", line.number, kw.column)
            n = line.tokens[1].integer()
            if n not in terms or n + 1 not in terms:
                raise InputError(f"declare terms {n} and {n + 1} before 'diff {n}'", line.number, kw.column)
            m = _matrix_rows(cur, terms[n + 1].ngens, terms[n].ngens, f"d^{n}")
            diffs[n] = (line, m)
        else:
            raise InputError(f"unknown record {kw.text!r}", line.number, kw.column)
    if not terms:
        raise InputError("no terms", 1)
    lo, hi = min(terms), max(terms)
    for n in range(lo, hi + 1):
        if n not in terms:
            raise InputError(f"missing term in degree {n}")
    maps = []
    for n in range(lo, hi):
        if n in diffs:
            line, m = diffs[n]
            try:
                maps.append(GroupHom(terms[n], terms[n + 1], m))
            except GroupError as exc:
                raise InputError(str(exc), line.number) from None
        else:
            maps.append(GroupHom.zero(terms[n], terms[n + 1]))
    try:
        return Complex(lo, tuple(terms[n] for n in range(lo, hi + 1)), tuple(maps))
    except ComplexError as exc:
        raise InputError(str(exc)) from None
