import dataclasses

import pytest

from graycoh.signature import (
    TheoryError,
    builtin_theory,
    parse_theory,
    parse_theory_diagnostics,
    serialize_theory,
    theories_equal,
    validate_theory,
)
from graycoh.syntax import App, Var, format_expr1, format_expr2


def test_pseudomonoid_shape():
    M = builtin_theory("pseudomonoid")
    assert M.objects == ("C",)
    assert M.arrows == {"P": (("C", "C"), "C"), "J": ((), "C")}
    assert sorted(M.cells) == sorted(["aa", "aa'", "ll", "ll'", "rr", "rr'"])
    assert len(M.equations) == 8
    assert validate_theory(M) == []


def test_associator_boundary():
    aa = builtin_theory("pseudomonoid").cells["aa"]
    assert aa.types == ("C", "C", "C")
    assert format_expr1(aa.lhs, ["A", "B", "X"]) == "P(A, P(B, X))"
    assert format_expr1(aa.rhs, ["A", "B", "X"]) == "P(P(A, B), X)"


def test_triangle_equation():
    tri = builtin_theory("pseudomonoid").equations["triangle"]
    names = ["A", "X"]
    assert format_expr2(tri.lhs, names) == "comp(P(rr[A], id X), aa[A, J(), X])"
    assert format_expr2(tri.rhs, names) == "P(id A, ll[X])"


def test_example_g0():
    G = builtin_theory("example-G0")
    assert G.objects == tuple("ABCDEF")
    assert G.arrows["g"] == (("C", "D"), "E") and G.arrows["k"] == ((), "A")
    assert not G.cells and not G.equations


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin_theory("no-such")


def test_minimal_theory():
    T = parse_theory("theory T object A")
    assert (len(T.objects), len(T.arrows), len(T.cells), len(T.equations)) == (1, 0, 0, 0)


def test_unknown_object_diagnostic():
    T, diags = parse_theory_diagnostics("theory T\nobject C\narrow P : C C -> D\n")
    assert T is None
    assert any("unknown object D" in d.message for d in diags)
    assert diags[0].line == 3


@pytest.mark.parametrize("text, needle", [
    ("theory T\nobject C\nobject C\n", "duplicate"),
    ("theory T\nobject C\narrow P : C C -> C\ncell bad [A, B : C] : P(A, A) => A\n", "more than once"),
    ("theory T\nobject C\narrow P : C C -> C\ncell bad [A, B : C] : P(B, A) => P(A, B)\n", "order"),
    ("theory T\nobject C\narrow P : C C -> C\narrow Q : C C -> C\ncell t [A, B : C] : P(A, B) => P(A, B)\n"
     "equation e [A, B : C] : t[A, B] = id Q(A, B)\n", "parallel"),
    ("theory T\nobject C\narrow id : C -> C\n", "reserved"),
])
def test_rejections(text, needle):
    with pytest.raises(TheoryError) as info:
        parse_theory(text)
    assert needle in str(info.value)


def test_parsing_is_total():
    # several independent errors are all reported
    text = "theory T\nobject C\nobject C\narrow P : C Z -> C\narrow Q : C -> W\n"
    T, diags = parse_theory_diagnostics(text)
    assert T is None and len(diags) >= 3


@pytest.mark.parametrize("name", ["pseudomonoid", "example-G0"])
def test_round_trip(name):
    T = builtin_theory(name)
    again = parse_theory(serialize_theory(T))
    assert theories_equal(T, again)
    assert serialize_theory(again) == serialize_theory(T)


def test_renaming_invariance():
    a = parse_theory("theory T\nobject C\narrow P : C C -> C\ncell s [A, B : C] : P(A, B) => P(A, B)\n")
    b = parse_theory("theory T\nobject C\narrow P : C C -> C\ncell s [X, Y : C] : P(X, Y) => P(X, Y)\n")
    assert theories_equal(a, b)


def _mutated_boundaries(M):
    for name, c in M.cells.items():
        # swap the two sides' variables, drop the arrow, or duplicate a variable
        for new_lhs in (Var(0), App("P", (Var(0), Var(0))), App("J", ())):
            if new_lhs != c.lhs:
                yield name, dataclasses.replace(c, lhs=new_lhs)


def test_cell_boundary_mutations_fail_validation():
    M = builtin_theory("pseudomonoid")
    count = 0
    for name, bad in _mutated_boundaries(M):
        broken = dataclasses.replace(M, cells={**M.cells, name: bad})
        assert validate_theory(broken), name
        count += 1
    assert count >= 12
