"""Multigraphs, theories, and the theory description language."""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .syntax import (
    IDENT,
    Context,
    ParseError,
    Parser,
    context_names,
    format_context,
    format_expr1,
    format_expr2,
    parse_context,
    parse_expr1,
    parse_expr2,
    tokenize,
)

STATEMENT_KEYWORDS = ("theory", "object", "arrow", "cell", "equation")
RESERVED = STATEMENT_KEYWORDS + ("id", "comp", "x", "lemma", "by")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.message}"


class TheoryError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        super().__init__("\n".join(map(str, diagnostics)))
        self.diagnostics = diagnostics


@dataclass
class Multigraph:
    objects: tuple = ()
    arrows: dict = field(default_factory=dict)  # name -> (inputs, output)

    def arity(self, name: str) -> int:
        return len(self.arrows[name][0])


@dataclass(frozen=True)
class CellDecl:
    name: str
    context: Context
    lhs: object
    rhs: object
    obj: str

    @property
    def types(self) -> tuple:
        return tuple(o for _, o in self.context)


@dataclass(frozen=True)
class EquationDecl:
    name: str
    context: Context
    obj: str
    lhs: object
    rhs: object

    @property
    def types(self) -> tuple:
        return tuple(o for _, o in self.context)


@dataclass
class Theory:
    name: str = "anonymous"
    base: Multigraph = field(default_factory=Multigraph)
    cells: dict = field(default_factory=dict)
    equations: dict = field(default_factory=dict)

    @property
    def objects(self) -> tuple:
        return self.base.objects

    @property
    def arrows(self) -> dict:
        return self.base.arrows

    def symbol_kind(self, name: str) -> Optional[str]:
        if name in self.base.objects:
            return "object"
        if name in self.base.arrows:
            return "arrow"
        if name in self.cells:
            return "cell"
        if name in self.equations:
            return "equation"
        return None

    def summary(self) -> str:
        return (f"theory {self.name}: {len(self.objects)} objects, {len(self.arrows)} arrows, "
                f"{len(self.cells)} cells, {len(self.equations)} equations")


# ---------------------------------------------------------------------------
# validation


def validate_theory(T: Theory) -> list[str]:
    """Well-formedness problems of ``T``; empty when valid."""
    from .components import ComponentError, check_expr1, infer_expr2

    problems = []
    for name, (inputs, output) in T.arrows.items():
        for o in tuple(inputs) + (output,):
            if o not in T.objects:
                problems.append(f"arrow {name}: unknown object {o}")
    for c in T.cells.values():
        try:
            _check_context(T, c.context)
            lo = check_expr1(T, c.context, c.lhs)
            ro = check_expr1(T, c.context, c.rhs)
            if lo != ro or lo != c.obj:
                problems.append(f"cell {c.name}: sides have objects {lo} and {ro}")
        except ComponentError as exc:
            problems.append(f"cell {c.name}: {exc}")
    for e in T.equations.values():
        try:
            _check_context(T, e.context)
            left = infer_expr2(T, e.context, e.lhs)
            right = infer_expr2(T, e.context, e.rhs)
            if left != right:
                problems.append(f"equation {e.name}: sides are not parallel")
        except ComponentError as exc:
            problems.append(f"equation {e.name}: {exc}")
    return problems


def _check_context(T: Theory, ctx: Context) -> None:
    from .components import ComponentError

    for n, o in ctx:
        if o not in T.objects:
            raise ComponentError(f"unknown object {o} for variable {n}")


# ---------------------------------------------------------------------------
# parsing


def _sync(p: Parser) -> None:
    """Skip to the next statement keyword after an error."""
    p.advance()
    while not p.done() and not (p.peek.kind == IDENT and p.peek.text in STATEMENT_KEYWORDS):
        p.advance()


def parse_theory_diagnostics(text: str) -> tuple[Optional[Theory], list[Diagnostic]]:
    """Parse and validate; never raises. Returns (theory or None, diagnostics)."""
    try:
        tokens = tokenize(text)
    except ParseError as exc:
        return None, [Diagnostic(exc.line, exc.col, exc.message)]
    p = Parser(tokens)
    T = Theory()
    diags: list[Diagnostic] = []

    def declare(tok) -> bool:
        if tok.text in RESERVED:
            diags.append(Diagnostic(tok.line, tok.col, f"{tok.text} is a reserved word"))
            return False
        if T.symbol_kind(tok.text) is not None:
            diags.append(Diagnostic(tok.line, tok.col, f"duplicate name {tok.text}"))
            return False
        return True

    seen_theory = False
    while not p.done():
        start = p.peek
        try:
            kw = p.ident("statement keyword")
            if kw.text == "theory":
                name = p.ident("theory name")
                if seen_theory:
                    raise ParseError("second theory statement", kw.line, kw.col)
                seen_theory = True
                T.name = name.text
            elif kw.text == "object":
                first = True
                while first or (p.peek.kind == IDENT and p.peek.text not in STATEMENT_KEYWORDS):
                    tok = p.ident("object name")
                    first = False
                    if declare(tok):
                        T.base.objects = T.base.objects + (tok.text,)
            elif kw.text == "arrow":
                tok = p.ident("arrow name")
                p.expect(":")
                inputs = []
                while not p.at("->"):
                    inputs.append(p.ident("object name"))
                p.expect("->")
                out = p.ident("object name")
                bad = [t for t in inputs + [out] if t.text not in T.objects]
                for t in bad:
                    diags.append(Diagnostic(t.line, t.col, f"unknown object {t.text}"))
                if declare(tok) and not bad:
                    T.base.arrows[tok.text] = (tuple(t.text for t in inputs), out.text)
            elif kw.text == "cell":
                tok = p.ident("cell name")
                ctx = parse_context(p)
                p.expect(":")
                names = context_names(ctx)
                lhs = parse_expr1(p, names)
                p.expect("=>")
                rhs = parse_expr1(p, names)
                if declare(tok):
                    problem = _cell_problem(T, ctx, lhs, rhs)
                    if problem[0]:
                        diags.append(Diagnostic(tok.line, tok.col, f"cell {tok.text}: {problem[0]}"))
                    else:
                        T.cells[tok.text] = CellDecl(tok.text, ctx, lhs, rhs, problem[1])
            elif kw.text == "equation":
                tok = p.ident("equation name")
                ctx = parse_context(p)
                p.expect(":")
                names = context_names(ctx)
                lhs = parse_expr2(p, names)
                p.expect("=")
                rhs = parse_expr2(p, names)
                if declare(tok):
                    problem = _equation_problem(T, ctx, lhs, rhs)
                    if problem[0]:
                        diags.append(Diagnostic(tok.line, tok.col, f"equation {tok.text}: {problem[0]}"))
                    else:
                        T.equations[tok.text] = EquationDecl(tok.text, ctx, problem[1], lhs, rhs)
            else:
                raise ParseError(f"unknown statement {kw.text!r}", kw.line, kw.col)
        except ParseError as exc:
            diags.append(Diagnostic(exc.line, exc.col, exc.message))
            if p.peek is start:
                _sync(p)
            else:
                while not p.done() and not (p.peek.kind == IDENT and p.peek.text in STATEMENT_KEYWORDS):
                    p.advance()
    if diags:
        return None, diags
    return T, []


def _cell_problem(T: Theory, ctx: Context, lhs, rhs) -> tuple[Optional[str], Optional[str]]:
    from .components import ComponentError, check_expr1

    try:
        _check_context(T, ctx)
        lo = check_expr1(T, ctx, lhs)
        ro = check_expr1(T, ctx, rhs)
    except ComponentError as exc:
        return str(exc), None
    if lo != ro:
        return f"sides have objects {lo} and {ro}", None
    return None, lo


def _equation_problem(T: Theory, ctx: Context, lhs, rhs) -> tuple[Optional[str], Optional[str]]:
    from .components import ComponentError, infer_expr2

    try:
        _check_context(T, ctx)
        left = infer_expr2(T, ctx, lhs)
        right = infer_expr2(T, ctx, rhs)
    except ComponentError as exc:
        return str(exc), None
    if left != right:
        return "sides are not parallel", None
    return None, left[2]


def parse_theory(text: str) -> Theory:
    T, diags = parse_theory_diagnostics(text)
    if T is None:
        raise TheoryError(diags)
    return T


def serialize_theory(T: Theory) -> str:
    lines = [f"theory {T.name}"]
    for o in T.objects:
        lines.append(f"object {o}")
    for name, (inputs, output) in T.arrows.items():
        ins = " ".join(inputs)
        lines.append(f"arrow {name} : {ins + ' ' if ins else ''}-> {output}")
    for c in T.cells.values():
        names = context_names(c.context)
        lines.append(f"cell {c.name} {format_context(c.context)} : "
                     f"{format_expr1(c.lhs, names)} => {format_expr1(c.rhs, names)}")
    for e in T.equations.values():
        names = context_names(e.context)
        lines.append(f"equation {e.name} {format_context(e.context)} : "
                     f"{format_expr2(e.lhs, names)} = {format_expr2(e.rhs, names)}")
    return "\n".join(lines) + "\n"


def theories_equal(a: Theory, b: Theory) -> bool:
    """Equality up to renaming of context variables."""
    def cells(T):
        return {n: (c.types, c.lhs, c.rhs, c.obj) for n, c in T.cells.items()}

    def eqs(T):
        return {n: (e.types, e.lhs, e.rhs, e.obj) for n, e in T.equations.items()}

    return (a.name == b.name and tuple(a.objects) == tuple(b.objects) and a.arrows == b.arrows
            and cells(a) == cells(b) and eqs(a) == eqs(b))


BUILTIN = {"pseudomonoid": "pseudomonoid.gth", "example-G0": "example-G0.gth"}


def data_text(filename: str) -> str:
    return resources.files("graycoh").joinpath("data", filename).read_text(encoding="utf-8")


def builtin_theory(name: str) -> Theory:
    if name not in BUILTIN:
        raise KeyError(f"no builtin theory named {name!r}; known: {', '.join(sorted(BUILTIN))}")
    return parse_theory(data_text(BUILTIN[name]))


def load_theory(source: str) -> Theory:
    """A builtin name or a path to a theory file."""
    if source in BUILTIN:
        return builtin_theory(source)
    with open(source, encoding="utf-8") as fh:
        return parse_theory(fh.read())
