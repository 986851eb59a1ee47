"""Shared fixtures, generators and oracles for the test suite."""
from __future__ import annotations

import dataclasses
import itertools
import random
from pathlib import Path

from hypothesis import strategies as st

from graycoh.components import (
    AppCong,
    Axiom,
    CompCong,
    FuncComp,
    Nat,
    Refl,
    Sym,
    Trans,
    UnitL,
    UnitR,
    ComponentError,
    check_eq_derivation,
)
from graycoh.freecat import BRAIDED, OneCell, basic_cells_on
from graycoh.signature import Multigraph, builtin_theory
from graycoh.syntax import App, Var, parse_term

GOLDEN = Path(__file__).parent / "golden"

G0 = builtin_theory("example-G0").base
M = builtin_theory("pseudomonoid")

# Braided alphabets: bare wires, one unary arrow, and a mix of arities.
B0 = Multigraph(("P", "Q", "R"), {})
B1 = Multigraph(("P", "Q", "R"), {"u": (("P",), "Q")})
B3 = Multigraph(("P", "Q", "R"), {"u": (("P",), "Q"), "m": (("Q", "R"), "P"), "e": ((), "R")})
# Six objects and arrows of arity 0 to 3, for random terms.
WIDE = Multigraph(
    ("P", "Q", "R", "S", "T", "U"),
    {"u": (("P",), "Q"), "m": (("Q", "R"), "P"), "e": ((), "R"), "w": (("S", "S", "T"), "U")},
)

T1_TEXT = "()u(C D); (B)g(); ()h()"
T1_NF_TEXT = "(A)g(); ()u(E); ()h()"
OVERBRAID_TEXT = "(P)x[Q|R](); ()x[P|R](Q)"
PSEUDONAT_TEXT = "()u(Q); ()x[B|Q]()"


def term(text: str, mg=None) -> OneCell:
    if mg is None:
        mg = G0
    return parse_term(text, mg)


def pseudonat_graph() -> Multigraph:
    return Multigraph(("A", "B", "Q"), {"u": (("A",), "B")})


# ---------------------------------------------------------------------------
# random terms


def random_term(rng: random.Random, mg: Multigraph, mode: str, max_cells: int = 8, max_wires: int = 6) -> OneCell:
    """Uniform source length, then up to ``max_cells`` uniformly chosen basic cells."""
    src = tuple(rng.choice(mg.objects) for _ in range(rng.randint(0, max_wires)))
    f = OneCell(src)
    for _ in range(rng.randint(0, max_cells)):
        options = list(basic_cells_on(mg, f.target, mode))
        if not options:
            break
        f = OneCell(f.source, f.cells + (rng.choice(options),))
    return f


@st.composite
def terms(draw, mg: Multigraph = WIDE, mode: str = BRAIDED, max_cells: int = 6, max_wires: int = 4):
    src = tuple(draw(st.lists(st.sampled_from(mg.objects), max_size=max_wires)))
    f = OneCell(src)
    for _ in range(draw(st.integers(0, max_cells))):
        options = list(basic_cells_on(mg, f.target, mode))
        if not options:
            break
        f = OneCell(f.source, f.cells + (draw(st.sampled_from(options)),))
    return f


# ---------------------------------------------------------------------------
# pseudomonoid expressions


def _linear(e):
    counter = itertools.count()

    def go(x):
        if isinstance(x, Var):
            return Var(next(counter))
        return App(x.name, tuple(go(a) for a in x.args))

    return go(e)


def m_shapes(depth: int) -> list:
    """Every expression over P and J of depth at most ``depth``, variables numbered left to right."""
    if depth == 0:
        return [Var(0)]
    smaller = m_shapes(depth - 1)
    raw = [Var(0), App("J", ())] + [App("P", (a, b)) for a in smaller for b in smaller]
    return [_linear(e) for e in raw]


def variable_depths(e, d: int = 0) -> list[int]:
    if isinstance(e, Var):
        return [d]
    return [x for a in e.args for x in variable_depths(a, d + 1)]


def fillings(e, depth: int):
    """Substitutions into ``e`` keeping the result within ``depth``."""
    shapes = {k: m_shapes(k) for k in range(depth + 1)}
    return itertools.product(*(shapes[depth - p] for p in variable_depths(e)))


def m_context(n: int) -> tuple:
    return tuple((f"A{i}", "C") for i in range(n))


# ---------------------------------------------------------------------------
# derivation mutations


def _nodes(d, path=()):
    yield path, d
    if isinstance(d, Sym):
        yield from _nodes(d.premise, path + (0,))
    elif isinstance(d, (Trans, CompCong, AppCong)):
        for k, x in enumerate(d.premises):
            yield from _nodes(x, path + (k,))


def _replace_at(d, path, new):
    if not path:
        return new
    k, rest = path[0], path[1:]
    if isinstance(d, Sym):
        return Sym(_replace_at(d.premise, rest, new))
    premises = list(d.premises)
    premises[k] = _replace_at(premises[k], rest, new)
    return dataclasses.replace(d, premises=tuple(premises))


def _swapped(xs: tuple, i: int, j: int) -> tuple:
    xs = list(xs)
    xs[i], xs[j] = xs[j], xs[i]
    return tuple(xs)


def _local_mutants(T, d, decls: dict):
    """Edits of the single node ``d``."""
    if isinstance(d, Sym):
        yield "unwrap sym", d.premise
    elif not isinstance(d, Refl):
        yield "wrap in sym", Sym(d)
    if isinstance(d, (Trans, CompCong, AppCong)):
        n = len(d.premises)
        for i in range(n - 1):
            yield f"swap premises {i},{i + 1}", dataclasses.replace(d, premises=_swapped(d.premises, i, i + 1))
        for i in range(n):
            yield f"drop premise {i}", dataclasses.replace(d, premises=d.premises[:i] + d.premises[i + 1:])
    if isinstance(d, Axiom):
        arity = len(decls[d.name].context)
        for other in sorted(decls):
            if other != d.name and len(decls[other].context) == arity:
                yield f"cite {other}", Axiom(other, d.args)
        for i in range(len(d.args)):
            for j in range(i + 1, len(d.args)):
                if d.args[i] != d.args[j]:
                    yield f"swap arguments {i},{j}", Axiom(d.name, _swapped(d.args, i, j))
    if isinstance(d, Nat):
        for other in sorted(T.cells):
            if other != d.cell and len(T.cells[other].context) == len(d.args):
                yield f"naturality of {other}", Nat(other, d.args)
    if isinstance(d, UnitL):
        yield "unit-r instead", UnitR(d.phi)
    if isinstance(d, UnitR):
        yield "unit-l instead", UnitL(d.phi)
    if isinstance(d, Refl):
        yield "unit-l instead of refl", UnitL(d.phi)
    if isinstance(d, FuncComp):
        if d.left != d.right:
            yield "swap func-comp sides", FuncComp(d.name, d.right, d.left)


def mutants(T, ctx, derivation, lemmas: dict):
    """Single-node mutations that change what that node proves.

    Yields (path, description, mutated derivation). An edit is kept only
    when the mutated node is rejected on its own or concludes a different
    equation than the original node, so every kept edit is a real change.
    """
    decls = {**T.equations, **lemmas}
    for path, node in _nodes(derivation):
        original = check_eq_derivation(T, ctx, node, lemmas)
        for what, new in _local_mutants(T, node, decls):
            try:
                changed = check_eq_derivation(T, ctx, new, lemmas) != original
            except ComponentError:
                changed = True
            if changed:
                yield path, what, _replace_at(derivation, path, new)
