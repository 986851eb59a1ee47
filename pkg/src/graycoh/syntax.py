"""Concrete syntax: tokens, 1-cell terms, and component expressions.

Component expressions use positional variables. A variable is an index
into the ambient context; surface names only exist while parsing and
printing.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .freecat import Crossing, Multiarrow, OneCell


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1) -> None:
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# tokens

IDENT = "ident"
PUNCT = "punct"
EOF = "eof"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9_']+)*)
  | (?P<punct>=>|->|[()\[\]{},;:|=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind in (IDENT, PUNCT):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token(EOF, "", line, pos - line_start + 1))
    return tokens


class Parser:
    """A cursor over a token list with the usual helpers."""

    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    @classmethod
    def of(cls, text: str) -> Parser:
        return cls(tokenize(text))

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def lookahead(self, k: int) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        return self.peek.text == text and self.peek.kind != EOF

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.peek
        return ParseError(message, tok.line, tok.col)

    def advance(self) -> Token:
        tok = self.peek
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.peek.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def ident(self, what: str = "identifier") -> Token:
        if self.peek.kind != IDENT:
            found = self.peek.text or "end of input"
            raise self.error(f"expected {what}, found {found!r}")
        return self.advance()

    def done(self) -> bool:
        return self.peek.kind == EOF

    def expect_end(self) -> None:
        if not self.done():
            raise self.error(f"unexpected {self.peek.text!r}")

    def separated(self, item, close: str, sep: str = ",") -> list:
        """Items up to (and consuming) ``close``."""
        items = []
        if self.accept(close):
            return items
        while True:
            items.append(item())
            if self.accept(close):
                return items
            self.expect(sep)


# ---------------------------------------------------------------------------
# 1-cell terms


def format_objseq(objs: Sequence[str]) -> str:
    return " ".join(objs)


def format_cell(c) -> str:
    pre, suf = format_objseq(c.prefix), format_objseq(c.suffix)
    if isinstance(c, Multiarrow):
        return f"({pre}){c.arrow}({suf})"
    return f"({pre})x[{format_objseq(c.left)}|{format_objseq(c.right)}]({suf})"


def format_term(f: OneCell) -> str:
    if not f.cells:
        return f"id({format_objseq(f.source)})"
    return "; ".join(format_cell(c) for c in f.cells)


def _objseq(p: Parser, close: str) -> tuple:
    items = []
    while not p.at(close):
        items.append(p.ident("object name").text)
        p.accept(",")
    p.expect(close)
    return tuple(items)


def _basic_cell(p: Parser, mg):
    p.expect("(")
    prefix = _objseq(p, ")")
    name = p.ident("arrow name or x")
    if name.text == "x" and p.at("["):
        p.advance()
        left = _objseq(p, "|")
        right = _objseq(p, "]")
        p.expect("(")
        suffix = _objseq(p, ")")
        if not left and not right:
            raise p.error("empty crossing", name)
        return Crossing(prefix, left, right, suffix)
    if name.text not in mg.arrows:
        raise p.error(f"unknown arrow {name.text}", name)
    inputs, output = mg.arrows[name.text]
    p.expect("(")
    suffix = _objseq(p, ")")
    return Multiarrow(prefix, name.text, tuple(inputs), output, suffix)


def parse_term(text: str, mg) -> OneCell:
    """Parse ``id(A B)`` or ``cell; cell; ...`` using the arrow signatures of ``mg``."""
    p = Parser.of(text)
    if p.at("id") and p.lookahead(1).text == "(":
        p.advance()
        p.expect("(")
        src = _objseq(p, ")")
        p.expect_end()
        for o in src:
            if o not in mg.objects:
                raise ParseError(f"unknown object {o}")
        return OneCell(src)
    cells = [_basic_cell(p, mg)]
    while p.accept(";"):
        if p.done():
            break
        cells.append(_basic_cell(p, mg))
    p.expect_end()
    for i in range(1, len(cells)):
        if cells[i].source != cells[i - 1].target:
            raise ParseError(
                f"cell {i} expects wires {format_objseq(cells[i].source)!r} "
                f"but receives {format_objseq(cells[i - 1].target)!r}"
            )
    for c in cells:
        for o in c.source + c.target:
            if o not in mg.objects:
                raise ParseError(f"unknown object {o}")
    return OneCell(cells[0].source, tuple(cells))


# ---------------------------------------------------------------------------
# component expressions


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class App:
    name: str
    args: tuple = ()


Expr1 = Union[Var, App]


@dataclass(frozen=True)
class Id:
    expr: Expr1


@dataclass(frozen=True)
class Gen:
    cell: str
    args: tuple = ()


@dataclass(frozen=True)
class Comp:
    """Vertical composite ``parts[0] . parts[1] . ...``; the LAST part acts first."""

    parts: tuple


@dataclass(frozen=True)
class App2:
    name: str
    args: tuple = ()


Expr2 = Union[Id, Gen, Comp, App2]


def comp(*parts) -> Expr2:
    """Composite with nested composites flattened (composition is associative)."""
    flat = []
    for x in parts:
        if isinstance(x, Comp):
            flat.extend(x.parts)
        else:
            flat.append(x)
    if len(flat) == 1:
        return flat[0]
    return Comp(tuple(flat))


def vars1(e: Expr1) -> list[int]:
    if isinstance(e, Var):
        return [e.index]
    out = []
    for a in e.args:
        out.extend(vars1(a))
    return out


Context = tuple  # tuple of (name, object) pairs


def context_names(ctx: Context) -> list[str]:
    return [n for n, _ in ctx]


def format_expr1(e: Expr1, names: Sequence[str]) -> str:
    if isinstance(e, Var):
        return names[e.index] if e.index < len(names) else f"${e.index}"
    return f"{e.name}({', '.join(format_expr1(a, names) for a in e.args)})"


def format_expr2(e: Expr2, names: Sequence[str]) -> str:
    if isinstance(e, Id):
        return f"id {format_expr1(e.expr, names)}"
    if isinstance(e, Gen):
        return f"{e.cell}[{', '.join(format_expr1(a, names) for a in e.args)}]"
    if isinstance(e, Comp):
        return f"comp({', '.join(format_expr2(x, names) for x in e.parts)})"
    return f"{e.name}({', '.join(format_expr2(a, names) for a in e.args)})"


def format_context(ctx: Context) -> str:
    return "[" + ", ".join(f"{n}:{o}" for n, o in ctx) + "]"


KEYWORDS2 = ("id", "comp")


def parse_expr1(p: Parser, names: Sequence[str]) -> Expr1:
    tok = p.ident("expression")
    if p.accept("("):
        return App(tok.text, tuple(p.separated(lambda: parse_expr1(p, names), ")")))
    if tok.text not in names:
        raise p.error(f"unknown variable {tok.text}", tok)
    return Var(list(names).index(tok.text))


def parse_expr2(p: Parser, names: Sequence[str]) -> Expr2:
    tok = p.peek
    if tok.text == "id" and tok.kind == IDENT and p.lookahead(1).kind == IDENT:
        p.advance()
        return Id(parse_expr1(p, names))
    tok = p.ident("2-cell expression")
    if tok.text == "comp" and p.at("("):
        p.advance()
        parts = p.separated(lambda: parse_expr2(p, names), ")")
        if not parts:
            raise p.error("comp needs at least one argument", tok)
        return comp(*parts)
    if p.accept("["):
        return Gen(tok.text, tuple(p.separated(lambda: parse_expr1(p, names), "]")))
    if p.accept("("):
        return App2(tok.text, tuple(p.separated(lambda: parse_expr2(p, names), ")")))
    if tok.text not in names:
        raise p.error(f"unknown variable {tok.text}", tok)
    return Id(Var(list(names).index(tok.text)))


def parse_context(p: Parser) -> Context:
    """``[A:C, B:C]`` or ``[A, B, X : C]`` (a type applies to preceding untyped names)."""
    p.expect("[")
    entries: list = []
    pending: list = []
    seen = set()
    if p.accept("]"):
        return ()
    while True:
        tok = p.ident("variable name")
        if tok.text in seen:
            raise p.error(f"duplicate variable {tok.text}", tok)
        seen.add(tok.text)
        pending.append(tok.text)
        if p.accept(":"):
            obj = p.ident("object name").text
            entries.extend((n, obj) for n in pending)
            pending = []
        if p.accept("]"):
            break
        p.expect(",")
    if pending:
        raise p.error(f"variable {pending[-1]} has no object")
    return tuple(entries)


def parse_expr1_text(text: str, names: Sequence[str]) -> Expr1:
    p = Parser.of(text)
    e = parse_expr1(p, names)
    p.expect_end()
    return e


def parse_expr2_text(text: str, names: Sequence[str]) -> Expr2:
    p = Parser.of(text)
    e = parse_expr2(p, names)
    p.expect_end()
    return e
