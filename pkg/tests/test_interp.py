from graycoh.components import localize, subst1
from graycoh.freecat import Multiarrow
from graycoh.interp import check_parallel, double_norm, interp_expr1, interp_expr2, norm_path
from graycoh.rewrite import decide_equal
from graycoh.syntax import App, Var, parse_expr1_text, parse_expr2_text, vars1
from support import M, fillings, m_context, m_shapes
from graycoh.interp import free_model

FM = free_model(M)
ABXD = (("A", "C"), ("B", "C"), ("X", "C"), ("D", "C"))
NAMES = [n for n, _ in ABXD]


def test_right_nested_product_cells():
    f = interp_expr1(FM, ABXD, parse_expr1_text("P(A, P(B, P(X, D)))", NAMES))
    assert f.source == ("C",) * 4 and f.target == ("C",)
    assert f.cells == (
        Multiarrow(("C", "C"), "P", ("C", "C"), "C", ()),
        Multiarrow(("C",), "P", ("C", "C"), "C", ()),
        Multiarrow((), "P", ("C", "C"), "C", ()),
    )


def test_variable_and_unit():
    assert interp_expr1(FM, ABXD[:1], Var(0)).cells == ()
    j = interp_expr1(FM, (), App("J", ()))
    assert j.source == () and j.cells == (Multiarrow((), "J", (), "C", ()),)


def test_norm_path_is_structural_and_chained():
    outer = App("P", (Var(0), Var(1)))
    inners = (App("P", (Var(0), Var(1))), App("P", (Var(2), Var(3))))
    path = norm_path(FM, ABXD, outer, inners)
    assert path.structural and path.is_chained()
    assert path.target == interp_expr1(FM, ABXD, subst1(outer, inners))


def test_norm_path_on_a_variable_is_empty():
    path = norm_path(FM, ABXD[:1], Var(0), (Var(0),))
    assert len(path) == 0


def test_pentagon_sides_are_parallel():
    eq = M.equations["pentagon"]
    p = interp_expr2(FM, eq.context, eq.lhs)
    q = interp_expr2(FM, eq.context, eq.rhs)
    assert check_parallel(p, q) and p.is_chained() and q.is_chained()


def test_every_equation_is_parallel():
    for eq in M.equations.values():
        assert check_parallel(interp_expr2(FM, eq.context, eq.lhs), interp_expr2(FM, eq.context, eq.rhs)), eq.name


def test_associator_and_unitor_not_parallel():
    ctx = (("A", "C"),)
    aa = interp_expr2(FM, ABXD[:3], parse_expr2_text("aa[A, B, X]", NAMES[:3]))
    ll = interp_expr2(FM, ctx, parse_expr2_text("ll[A]", ["A"]))
    assert not check_parallel(aa, ll)


def test_generator_step_appears_once():
    path = interp_expr2(FM, ABXD[:3], parse_expr2_text("aa[A, B, X]", NAMES[:3]))
    assert [s.cell for s in path.generator_steps()] == ["aa"]


def test_double_norm_depth_two():
    count = 0
    for outer in m_shapes(2):
        for mids in fillings(outer, 2):
            mids = localize(mids)
            middle = subst1(outer, mids)
            for inners in fillings(middle, 2):
                inners = localize(inners)
                ctx = m_context(len(vars1(subst1(middle, inners))))
                dn = double_norm(FM, ctx, outer, mids, inners)
                assert dn.parallel
                assert dn.via_outer.structural and dn.via_inner.structural
                assert decide_equal(dn.via_outer.source, dn.via_outer.target) is not None
                count += 1
    assert count == 87


def test_left_right_product_cells():
    f = interp_expr1(FM, ABXD, parse_expr1_text("P(P(A, B), P(X, D))", NAMES))
    assert f.cells == (
        Multiarrow((), "P", ("C", "C"), "C", ("C", "C")),
        Multiarrow(("C",), "P", ("C", "C"), "C", ()),
        Multiarrow((), "P", ("C", "C"), "C", ()),
    )


def _last_inner_is_a_product(outer_text):
    outer = parse_expr1_text(outer_text, ["A", "B", "X"])
    inners = localize([Var(0), Var(0), App("P", (Var(0), Var(1)))])
    return norm_path(FM, ABXD, outer, inners)


def test_norm_path_right_nested_is_empty():
    assert len(_last_inner_is_a_product("P(A, P(B, X))")) == 0


def test_norm_path_left_nested_is_one_interchange():
    path = _last_inner_is_a_product("P(P(A, B), X)")
    assert len(path) == 1 and path.structural
    assert path.target == interp_expr1(FM, ABXD, parse_expr1_text("P(P(A, B), P(X, D))", NAMES))
