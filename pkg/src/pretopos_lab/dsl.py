"""A small text format for declaring carriers, maps, relations and squares.

::

    set A = 3;                       # comments run to end of line
    map f : A -> A = [0, 0, 1];
    rel R on A = {(0, 1)};
    setoid S = (A, Rs);
    square sq = (top, right, bottom, left);

Relations named in ``setoid`` declarations must already be equivalence
relations, and squares must have matching boundaries and commute.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Optional

from .core import FinMap, FinSet, default_cap
from .errors import NotEquivalenceRelation, PretoposError
from .exactness import Relation, Setoid
from .limits import Square


class DslError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {message}" if line else message)


class ParseError(DslError):
    pass


class ValidationError(DslError):
    pass


class DuplicateName(DslError):
    pass


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<arrow>->)"
    r"|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[;:=\[\]{}(),])"
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos, line, start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


@dataclass
class Workspace:
    values: dict[str, Any] = field(default_factory=dict)
    sources: dict[str, tuple] = field(default_factory=dict)
    config: dict[str, Optional[int]] = field(default_factory=lambda: {"cap": default_cap(), "seed": None})

    def __getitem__(self, name: str):
        return self.values[name]

    def __contains__(self, name: str):
        return name in self.values


class _Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0
        self.ws = Workspace()

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok

    def sym(self, text: str) -> Token:
        return self.expect("arrow" if text == "->" else "sym", text)

    def integer(self) -> tuple[int, Token]:
        tok = self.expect("int")
        return int(tok.text), tok

    def lookup(self, tok: Token, kind: type, what: str):
        if tok.text not in self.ws.values:
            raise ValidationError(f"undefined name {tok.text!r}", tok.line, tok.col)
        value = self.ws.values[tok.text]
        if not isinstance(value, kind):
            raise ValidationError(f"{tok.text!r} is not a {what}", tok.line, tok.col)
        return value

    def bind(self, name: Token, value, source: tuple):
        if name.text in self.ws.values:
            raise DuplicateName(f"{name.text!r} is already defined", name.line, name.col)
        self.ws.values[name.text] = value
        self.ws.sources[name.text] = source

    def parse(self) -> Workspace:
        while self.peek().kind != "eof":
            kw = self.expect("ident")
            handler = getattr(self, f"stmt_{kw.text}", None)
            if handler is None:
                raise ParseError(f"unknown statement {kw.text!r}", kw.line, kw.col)
            handler()
            self.sym(";")
        return self.ws

    def stmt_set(self):
        name = self.expect("ident")
        self.sym("=")
        n, _ = self.integer()
        self.bind(name, FinSet(n, name.text), ("set", n))

    def stmt_map(self):
        name = self.expect("ident")
        self.sym(":")
        dom_tok = self.expect("ident")
        self.sym("->")
        cod_tok = self.expect("ident")
        dom = self.lookup(dom_tok, FinSet, "set")
        cod = self.lookup(cod_tok, FinSet, "set")
        self.sym("=")
        self.sym("[")
        entries: list[tuple[int, Token]] = []
        if self.peek().text != "]":
            entries.append(self.integer())
            while self.peek().text == ",":
                self.next()
                entries.append(self.integer())
        close = self.sym("]")
        for v, tok in entries:
            if v >= cod.size:
                raise ValidationError(f"entry {v} out of range for {cod_tok.text} of size {cod.size}", tok.line, tok.col)
        if len(entries) != dom.size:
            raise ValidationError(f"table has {len(entries)} entries, {dom_tok.text} has size {dom.size}", close.line, close.col)
        table = [v for v, _ in entries]
        self.bind(name, FinMap(dom, cod, table), ("map", dom_tok.text, cod_tok.text, tuple(table)))

    def _pair(self, base: FinSet) -> tuple[int, int]:
        self.sym("(")
        i, ti = self.integer()
        self.sym(",")
        j, tj = self.integer()
        self.sym(")")
        for v, tok in ((i, ti), (j, tj)):
            if v >= base.size:
                raise ValidationError(f"element {v} out of range for carrier of size {base.size}", tok.line, tok.col)
        return i, j

    def stmt_rel(self):
        name = self.expect("ident")
        self.expect("ident", "on")
        base_tok = self.expect("ident")
        base = self.lookup(base_tok, FinSet, "set")
        self.sym("=")
        self.sym("{")
        pairs = []
        if self.peek().text != "}":
            pairs.append(self._pair(base))
            while self.peek().text == ",":
                self.next()
                pairs.append(self._pair(base))
        self.sym("}")
        canon = tuple(sorted(set(pairs)))
        self.bind(name, Relation.from_pairs(base, canon), ("rel", base_tok.text, canon))

    def stmt_setoid(self):
        name = self.expect("ident")
        self.sym("=")
        self.sym("(")
        a_tok = self.expect("ident")
        a = self.lookup(a_tok, FinSet, "set")
        self.sym(",")
        r_tok = self.expect("ident")
        r = self.lookup(r_tok, Relation, "relation")
        self.sym(")")
        try:
            value = Setoid(a, r)
        except (NotEquivalenceRelation, ValueError) as err:
            raise ValidationError(str(err), r_tok.line, r_tok.col) from None
        self.bind(name, value, ("setoid", a_tok.text, r_tok.text))

    def stmt_square(self):
        name = self.expect("ident")
        self.sym("=")
        self.sym("(")
        toks = [self.expect("ident")]
        for _ in range(3):
            self.sym(",")
            toks.append(self.expect("ident"))
        self.sym(")")
        maps = [self.lookup(t, FinMap, "map") for t in toks]
        try:
            value = Square(top=maps[0], right=maps[1], bottom=maps[2], left=maps[3])
            value.require_commutes()
        except PretoposError as err:
            raise ValidationError(str(err), name.line, name.col) from None
        self.bind(name, value, ("square",) + tuple(t.text for t in toks))


def parse(source: str) -> Workspace:
    return _Parser(source).parse()


def render(ws: Workspace) -> str:
    lines = []
    for name, src in ws.sources.items():
        kind = src[0]
        if kind == "set":
            lines.append(f"set {name} = {src[1]};")
        elif kind == "map":
            lines.append(f"map {name} : {src[1]} -> {src[2]} = [{', '.join(map(str, src[3]))}];")
        elif kind == "rel":
            body = ", ".join(f"({i}, {j})" for i, j in src[2])
            lines.append(f"rel {name} on {src[1]} = {{{body}}};")
        elif kind == "setoid":
            lines.append(f"setoid {name} = ({src[1]}, {src[2]});")
        elif kind == "square":
            lines.append(f"square {name} = ({', '.join(src[1:])});")
    return "\n".join(lines) + ("\n" if lines else "")
