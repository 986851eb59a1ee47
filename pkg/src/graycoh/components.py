"""The calculus of components: typing, substitution, and equation derivations.

Variables are positional. Every expression is typed in an ambient context
and must use its variables exactly once each, in left-to-right order. A
sub-expression therefore uses a contiguous run of the context, which is
what lets substitution work without any renaming.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .signature import EquationDecl, Theory
from .syntax import (
    App,
    App2,
    Comp,
    Context,
    Gen,
    Id,
    Parser,
    Var,
    comp,
    context_names,
    format_context,
    format_expr1,
    format_expr2,
    parse_context,
    parse_expr1,
    parse_expr2,
    tokenize,
    vars1,
)


class ComponentError(ValueError):
    """An expression or derivation that does not follow the rules."""

    def __init__(self, message: str, path: str = "") -> None:
        super().__init__(f"{path}: {message}" if path else message)
        self.message = message
        self.path = path


# ---------------------------------------------------------------------------
# 1-cell expressions


def _type1(T: Theory, ctx: Context, e) -> str:
    if isinstance(e, Var):
        if not 0 <= e.index < len(ctx):
            raise ComponentError(f"variable {e.index} is outside the context")
        return ctx[e.index][1]
    if not isinstance(e, App):
        raise ComponentError(f"not a 1-cell expression: {e!r}")
    if e.name not in T.arrows:
        raise ComponentError(f"unknown symbol {e.name}")
    inputs, output = T.arrows[e.name]
    if len(inputs) != len(e.args):
        raise ComponentError(f"{e.name} takes {len(inputs)} arguments, given {len(e.args)}")
    for i, (a, want) in enumerate(zip(e.args, inputs)):
        got = _type1(T, ctx, a)
        if got != want:
            raise ComponentError(f"argument {i + 1} of {e.name} has object {got}, expected {want}")
    return output


def _check_run(vs: list[int], start: Optional[int], stop: Optional[int]) -> None:
    """``vs`` must be consecutive; with bounds, exactly start..stop-1."""
    seen = set()
    for k, v in enumerate(vs):
        if v in seen:
            raise ComponentError(f"variable {v} is used more than once")
        seen.add(v)
        if k and v < vs[k - 1]:
            raise ComponentError(f"variable {v} appears out of order")
        if k and v != vs[k - 1] + 1:
            raise ComponentError(f"variable {vs[k - 1] + 1} is skipped")
    if start is None:
        return
    expected = list(range(start, stop))
    if vs != expected:
        missing = sorted(set(expected) - seen)
        if missing:
            raise ComponentError(f"variable {missing[0]} is unused")
        raise ComponentError("variables do not match the context")


def check_expr1(T: Theory, ctx: Context, e) -> str:
    """The object of ``e`` when ``ctx |- e`` is derivable."""
    obj = _type1(T, ctx, e)
    _check_run(vars1(e), 0, len(ctx))
    return obj


def check_expr1_run(T: Theory, ctx: Context, e) -> str:
    """Like check_expr1 but ``e`` may use any contiguous run of ``ctx``."""
    obj = _type1(T, ctx, e)
    _check_run(vars1(e), None, None)
    return obj


# ---------------------------------------------------------------------------
# substitution


def shift1(e, k: int):
    if isinstance(e, Var):
        return Var(e.index + k)
    return App(e.name, tuple(shift1(a, k) for a in e.args))


def subst1(e, args: Sequence):
    """Replace variable j of ``e`` by ``args[j]`` (args already in the target context)."""
    if isinstance(e, Var):
        return args[e.index]
    return App(e.name, tuple(subst1(a, args) for a in e.args))


def subst12(phi, args: Sequence):
    """Substitute 1-cell expressions for the variables of a 2-cell expression."""
    if isinstance(phi, Id):
        return Id(subst1(phi.expr, args))
    if isinstance(phi, Gen):
        return Gen(phi.cell, tuple(subst1(a, args) for a in phi.args))
    if isinstance(phi, Comp):
        return comp(*(subst12(x, args) for x in phi.parts))
    return App2(phi.name, tuple(subst12(x, args) for x in phi.args))


def subst21(e, phis: Sequence):
    """Substitute 2-cell expressions for the variables of a 1-cell expression."""
    if isinstance(e, Var):
        return phis[e.index]
    return App2(e.name, tuple(subst21(a, phis) for a in e.args))


def localize(args: Sequence) -> tuple:
    """Place expressions written in their own contexts side by side."""
    out, offset = [], 0
    for a in args:
        out.append(shift1(a, offset))
        offset += len(vars1(a))
    return tuple(out)


def substitute(kind: str, target, args: Sequence):
    if kind == "1in1":
        return subst1(target, args)
    if kind == "1in2":
        return subst12(target, args)
    if kind == "2in1":
        return subst21(target, args)
    raise ValueError(f"unknown substitution kind {kind!r}")


# ---------------------------------------------------------------------------
# 2-cell expressions


def _infer(T: Theory, ctx: Context, e) -> tuple:
    if isinstance(e, Id):
        return e.expr, e.expr, _type1(T, ctx, e.expr)
    if isinstance(e, Gen):
        cell = T.cells.get(e.cell)
        if cell is None:
            raise ComponentError(f"unknown 2-cell {e.cell}")
        if len(e.args) != len(cell.context):
            raise ComponentError(f"{e.cell} takes {len(cell.context)} components, given {len(e.args)}")
        for i, (a, want) in enumerate(zip(e.args, cell.types)):
            got = _type1(T, ctx, a)
            if got != want:
                raise ComponentError(f"component {i + 1} of {e.cell} has object {got}, expected {want}")
        return subst1(cell.lhs, e.args), subst1(cell.rhs, e.args), cell.obj
    if isinstance(e, Comp):
        if len(e.parts) < 2:
            raise ComponentError("a composite needs at least two parts")
        types = [_infer(T, ctx, x) for x in e.parts]
        for k in range(len(types) - 1):
            later_tgt = types[k + 1][1]
            earlier_src = types[k][0]
            if later_tgt != earlier_src:
                names = context_names(ctx)
                raise ComponentError(
                    f"cannot compose: part {k + 2} ends at {format_expr1(later_tgt, names)} "
                    f"but part {k + 1} starts at {format_expr1(earlier_src, names)}"
                )
        return types[-1][0], types[0][1], types[0][2]
    if isinstance(e, App2):
        if e.name not in T.arrows:
            raise ComponentError(f"unknown symbol {e.name}")
        inputs, output = T.arrows[e.name]
        if len(inputs) != len(e.args):
            raise ComponentError(f"{e.name} takes {len(inputs)} arguments, given {len(e.args)}")
        srcs, tgts = [], []
        for i, (a, want) in enumerate(zip(e.args, inputs)):
            s, t, got = _infer(T, ctx, a)
            if got != want:
                raise ComponentError(f"argument {i + 1} of {e.name} has object {got}, expected {want}")
            srcs.append(s)
            tgts.append(t)
        return App(e.name, tuple(srcs)), App(e.name, tuple(tgts)), output
    raise ComponentError(f"not a 2-cell expression: {e!r}")


def infer_expr2(T: Theory, ctx: Context, e) -> tuple:
    """(source, target, object) of ``e`` over the whole of ``ctx``."""
    src, tgt, obj = _infer(T, ctx, e)
    _check_run(vars1(src), 0, len(ctx))
    _check_run(vars1(tgt), 0, len(ctx))
    return src, tgt, obj


def infer_expr2_run(T: Theory, ctx: Context, e) -> tuple:
    src, tgt, obj = _infer(T, ctx, e)
    _check_run(vars1(src), None, None)
    if vars1(tgt) != vars1(src):
        raise ComponentError("source and target use different variables")
    return src, tgt, obj


# ---------------------------------------------------------------------------
# equation derivations


@dataclass(frozen=True)
class Refl:
    phi: object


@dataclass(frozen=True)
class Sym:
    premise: object


@dataclass(frozen=True)
class Trans:
    premises: tuple


@dataclass(frozen=True)
class Axiom:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class CompCong:
    premises: tuple


@dataclass(frozen=True)
class AppCong:
    name: str
    premises: tuple


@dataclass(frozen=True)
class FuncId:
    name: str
    args: tuple


@dataclass(frozen=True)
class FuncComp:
    name: str
    left: tuple
    right: tuple


@dataclass(frozen=True)
class UnitL:
    phi: object


@dataclass(frozen=True)
class UnitR:
    phi: object


@dataclass(frozen=True)
class Nat:
    cell: str
    args: tuple


RULE_NAMES = {
    Refl: "refl", Sym: "sym", Trans: "trans", Axiom: "axiom", CompCong: "comp-cong",
    AppCong: "app-cong", FuncId: "func-id", FuncComp: "func-comp", UnitL: "unit-l",
    UnitR: "unit-r", Nat: "nat",
}


def children(d) -> tuple:
    if isinstance(d, Sym):
        return (d.premise,)
    if isinstance(d, (Trans, CompCong, AppCong)):
        return d.premises
    return ()


class _Checker:
    def __init__(self, T: Theory, ctx: Context, lemmas: dict) -> None:
        self.T = T
        self.ctx = ctx
        self.lemmas = lemmas
        self.names = context_names(ctx)

    def show(self, e) -> str:
        return format_expr2(e, self.names)

    def typed(self, e, path: str) -> tuple:
        try:
            return infer_expr2_run(self.T, self.ctx, e)
        except ComponentError as exc:
            raise ComponentError(exc.message, path) from None

    def conclude(self, lhs, rhs, path: str) -> tuple:
        a = self.typed(lhs, path)
        b = self.typed(rhs, path)
        if a != b:
            raise ComponentError(f"sides {self.show(lhs)} and {self.show(rhs)} are not parallel", path)
        return lhs, rhs

    def check(self, d, path: str) -> tuple:
        here = f"{path}/{RULE_NAMES.get(type(d), '?')}" if path else RULE_NAMES.get(type(d), "?")
        if isinstance(d, Refl):
            return self.conclude(d.phi, d.phi, here)
        if isinstance(d, Sym):
            lhs, rhs = self.check(d.premise, here + "[0]")
            return rhs, lhs
        if isinstance(d, Trans):
            if len(d.premises) < 2:
                raise ComponentError("trans needs at least two premises", here)
            eqs = [self.check(x, f"{here}[{k}]") for k, x in enumerate(d.premises)]
            for k in range(len(eqs) - 1):
                if eqs[k][1] != eqs[k + 1][0]:
                    raise ComponentError(
                        f"premise {k} ends with {self.show(eqs[k][1])} "
                        f"but premise {k + 1} starts with {self.show(eqs[k + 1][0])}", here)
            return eqs[0][0], eqs[-1][1]
        if isinstance(d, Axiom):
            decl = self.T.equations.get(d.name) or self.lemmas.get(d.name)
            if decl is None:
                raise ComponentError(f"unknown equation {d.name}", here)
            if len(d.args) != len(decl.context):
                raise ComponentError(f"{d.name} takes {len(decl.context)} arguments, given {len(d.args)}", here)
            for i, (a, want) in enumerate(zip(d.args, decl.types)):
                try:
                    got = check_expr1_run(self.T, self.ctx, a)
                except ComponentError as exc:
                    raise ComponentError(exc.message, here) from None
                if got != want:
                    raise ComponentError(f"argument {i + 1} of {d.name} has object {got}, expected {want}", here)
            return self.conclude(subst12(decl.lhs, d.args), subst12(decl.rhs, d.args), here)
        if isinstance(d, CompCong):
            if len(d.premises) < 2:
                raise ComponentError("comp-cong needs at least two premises", here)
            eqs = [self.check(x, f"{here}[{k}]") for k, x in enumerate(d.premises)]
            return self.conclude(comp(*(l for l, _ in eqs)), comp(*(r for _, r in eqs)), here)
        if isinstance(d, AppCong):
            eqs = [self.check(x, f"{here}[{k}]") for k, x in enumerate(d.premises)]
            return self.conclude(App2(d.name, tuple(l for l, _ in eqs)),
                                 App2(d.name, tuple(r for _, r in eqs)), here)
        if isinstance(d, FuncId):
            lhs = App2(d.name, tuple(Id(a) for a in d.args))
            return self.conclude(lhs, Id(App(d.name, tuple(d.args))), here)
        if isinstance(d, FuncComp):
            if len(d.left) != len(d.right):
                raise ComponentError("func-comp needs as many left as right arguments", here)
            lhs = comp(App2(d.name, tuple(d.left)), App2(d.name, tuple(d.right)))
            rhs = App2(d.name, tuple(comp(a, b) for a, b in zip(d.left, d.right)))
            return self.conclude(lhs, rhs, here)
        if isinstance(d, UnitL):
            _, tgt, _ = self.typed(d.phi, here)
            return self.conclude(comp(Id(tgt), d.phi), d.phi, here)
        if isinstance(d, UnitR):
            src, _, _ = self.typed(d.phi, here)
            return self.conclude(comp(d.phi, Id(src)), d.phi, here)
        if isinstance(d, Nat):
            cell = self.T.cells.get(d.cell)
            if cell is None:
                raise ComponentError(f"unknown 2-cell {d.cell}", here)
            if len(d.args) != len(cell.context):
                raise ComponentError(f"{d.cell} takes {len(cell.context)} components, given {len(d.args)}", here)
            srcs, tgts = [], []
            for i, (phi, want) in enumerate(zip(d.args, cell.types)):
                s, t, got = self.typed(phi, here)
                if got != want:
                    raise ComponentError(f"component {i + 1} of {d.cell} has object {got}, expected {want}", here)
                srcs.append(s)
                tgts.append(t)
            lhs = comp(subst21(cell.rhs, d.args), Gen(d.cell, tuple(srcs)))
            rhs = comp(Gen(d.cell, tuple(tgts)), subst21(cell.lhs, d.args))
            return self.conclude(lhs, rhs, here)
        raise ComponentError(f"unknown rule {type(d).__name__}", here)


def check_eq_derivation(T: Theory, ctx: Context, d, lemmas: Optional[dict] = None) -> tuple:
    """The equation (lhs, rhs) concluded by ``d``; raises ComponentError at the faulty node."""
    return _Checker(T, ctx, lemmas or {}).check(d, "")


# ---------------------------------------------------------------------------
# proof scripts


@dataclass(frozen=True)
class Lemma:
    name: str
    context: Context
    lhs: object
    rhs: object
    derivation: object
    line: int = 0

    @property
    def types(self) -> tuple:
        return tuple(o for _, o in self.context)


@dataclass(frozen=True)
class ProofScript:
    lemmas: tuple = ()


@dataclass(frozen=True)
class LemmaResult:
    name: str
    ok: bool
    message: str = ""


@dataclass
class ScriptReport:
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            out.append(f"{'PASS' if r.ok else 'FAIL'} {r.name}" + (f": {r.message}" if r.message else ""))
        return out


def check_lemma(T: Theory, lemma: Lemma, lemmas: dict) -> Optional[str]:
    """None when the lemma's derivation proves exactly its statement, else the reason."""
    if T.symbol_kind(lemma.name) is not None or lemma.name in lemmas:
        return f"name {lemma.name} is already taken"
    try:
        for n, o in lemma.context:
            if o not in T.objects:
                raise ComponentError(f"unknown object {o} for variable {n}")
        left = infer_expr2(T, lemma.context, lemma.lhs)
        right = infer_expr2(T, lemma.context, lemma.rhs)
        if left != right:
            return "the two sides are not parallel"
        got = check_eq_derivation(T, lemma.context, lemma.derivation, lemmas)
    except ComponentError as exc:
        return str(exc)
    if got != (lemma.lhs, lemma.rhs):
        names = context_names(lemma.context)
        return (f"derivation proves {format_expr2(got[0], names)} = {format_expr2(got[1], names)}, "
                f"not the stated equation")
    return None


def check_script(T: Theory, script: ProofScript) -> ScriptReport:
    report = ScriptReport()
    lemmas: dict = {}
    for lemma in script.lemmas:
        problem = check_lemma(T, lemma, lemmas)
        report.results.append(LemmaResult(lemma.name, problem is None, problem or ""))
        if problem is None:
            obj = infer_expr2(T, lemma.context, lemma.lhs)[2]
            lemmas[lemma.name] = EquationDecl(lemma.name, lemma.context, obj, lemma.lhs, lemma.rhs)
    return report


def _parse_deriv(p: Parser, names: Sequence[str]):
    tok = p.ident("rule name")
    rule = tok.text
    e1 = lambda: parse_expr1(p, names)  # noqa: E731
    e2 = lambda: parse_expr2(p, names)  # noqa: E731
    sub = lambda: _parse_deriv(p, names)  # noqa: E731
    if rule in ("refl", "unit-l", "unit-r"):
        p.expect("{")
        phi = e2()
        p.expect("}")
        return {"refl": Refl, "unit-l": UnitL, "unit-r": UnitR}[rule](phi)
    if rule == "sym":
        p.expect("(")
        d = sub()
        p.expect(")")
        return Sym(d)
    if rule in ("trans", "comp-cong"):
        p.expect("(")
        ds = tuple(p.separated(sub, ")"))
        return Trans(ds) if rule == "trans" else CompCong(ds)
    if rule == "axiom":
        name = p.ident("equation name").text
        args = tuple(p.separated(e1, "}")) if p.accept("{") else ()
        return Axiom(name, args)
    if rule == "app-cong":
        name = p.ident("arrow name").text
        p.expect("(")
        return AppCong(name, tuple(p.separated(sub, ")")))
    if rule == "func-id":
        name = p.ident("arrow name").text
        p.expect("{")
        return FuncId(name, tuple(p.separated(e1, "}")))
    if rule == "func-comp":
        name = p.ident("arrow name").text
        p.expect("{")
        left = tuple(p.separated(e2, "|"))
        right = tuple(p.separated(e2, "}"))
        return FuncComp(name, left, right)
    if rule == "nat":
        name = p.ident("2-cell name").text
        p.expect("{")
        return Nat(name, tuple(p.separated(e2, "}")))
    raise p.error(f"unknown rule {rule!r}", tok)


def parse_derivation(text: str, names: Sequence[str]):
    p = Parser.of(text)
    d = _parse_deriv(p, names)
    p.expect_end()
    return d


def parse_script(text: str) -> ProofScript:
    p = Parser(tokenize(text))
    lemmas = []
    while not p.done():
        kw = p.ident("lemma")
        if kw.text != "lemma":
            raise p.error(f"expected 'lemma', found {kw.text!r}", kw)
        name = p.ident("lemma name").text
        ctx = parse_context(p)
        p.expect(":")
        names = context_names(ctx)
        lhs = parse_expr2(p, names)
        p.expect("=")
        rhs = parse_expr2(p, names)
        by = p.ident("by")
        if by.text != "by":
            raise p.error("expected 'by'", by)
        lemmas.append(Lemma(name, ctx, lhs, rhs, _parse_deriv(p, names), kw.line))
    return ProofScript(tuple(lemmas))


def format_derivation(d, names: Sequence[str], indent: int = 0) -> str:
    """Pretty-print with one premise per line."""
    pad = "  " * indent
    e1 = lambda xs: ", ".join(format_expr1(x, names) for x in xs)  # noqa: E731
    e2 = lambda xs: ", ".join(format_expr2(x, names) for x in xs)  # noqa: E731

    def nested(head: str, premises) -> str:
        inner = ",\n".join(format_derivation(x, names, indent + 1) for x in premises)
        return f"{pad}{head}(\n{inner})"

    if isinstance(d, Refl):
        return f"{pad}refl{{{format_expr2(d.phi, names)}}}"
    if isinstance(d, UnitL):
        return f"{pad}unit-l{{{format_expr2(d.phi, names)}}}"
    if isinstance(d, UnitR):
        return f"{pad}unit-r{{{format_expr2(d.phi, names)}}}"
    if isinstance(d, Sym):
        return nested("sym", (d.premise,))
    if isinstance(d, Trans):
        return nested("trans", d.premises)
    if isinstance(d, CompCong):
        return nested("comp-cong", d.premises)
    if isinstance(d, AppCong):
        if not d.premises:
            return f"{pad}app-cong {d.name}()"
        return nested(f"app-cong {d.name}", d.premises)
    if isinstance(d, Axiom):
        return f"{pad}axiom {d.name}{{{e1(d.args)}}}"
    if isinstance(d, FuncId):
        return f"{pad}func-id {d.name}{{{e1(d.args)}}}"
    if isinstance(d, FuncComp):
        return f"{pad}func-comp {d.name}{{{e2(d.left)} | {e2(d.right)}}}"
    if isinstance(d, Nat):
        return f"{pad}nat {d.cell}{{{e2(d.args)}}}"
    raise TypeError(f"not a derivation: {d!r}")


def format_script(script: ProofScript) -> str:
    blocks = []
    for lm in script.lemmas:
        names = context_names(lm.context)
        blocks.append(
            f"lemma {lm.name} {format_context(lm.context)} :\n"
            f"  {format_expr2(lm.lhs, names)}\n  = {format_expr2(lm.rhs, names)}\nby\n"
            f"{format_derivation(lm.derivation, names, 1)}\n"
        )
    return "\n".join(blocks)
