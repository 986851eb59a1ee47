"""The acceptance suite: one test per criterion, each timed against its limit."""
import io
import random
from collections import defaultdict

from graycoh import rewrite as R
from graycoh.cli import run
from graycoh.components import (
    EquationDecl,
    Lemma,
    check_lemma,
    check_script,
    format_script,
    infer_expr2,
    localize,
    parse_script,
    subst1,
)
from graycoh.freecat import BRAIDED, PLAIN
from graycoh.interp import check_parallel, double_norm, free_model, interp_expr2
from graycoh.measures import LESS, braided_measure, compare, measure, prefix_weight
from graycoh.signature import builtin_theory, data_text, parse_theory, serialize_theory, theories_equal
from graycoh.syntax import format_term, parse_term, vars1
from support import (
    B0,
    B1,
    B3,
    G0,
    GOLDEN,
    M,
    OVERBRAID_TEXT,
    T1_NF_TEXT,
    T1_TEXT,
    WIDE,
    fillings,
    m_context,
    m_shapes,
    mutants,
    random_term,
    term,
)
from test_cli import CASES


def test_criterion_1_prefix_weight(criterion):
    t1, expected = term(T1_TEXT), term(T1_NF_TEXT)
    with criterion(1, "T1 prefix weight 1, normal form 0", 0.001) as d:
        nf, path = R.normalize(t1, PLAIN)
        assert prefix_weight(t1) == 1
        assert len(path) == 1 and nf == expected
        assert prefix_weight(nf) == 0
        d["text"] = "weights 1 -> 0"


def test_criterion_2_overbraid(criterion):
    f = term(OVERBRAID_TEXT, B0)
    with criterion(2, "overbraid width 2 -> 1 on unit wires", 0.001) as d:
        g, _ = R.apply(f, R.Redex(0, R.Kind.OVERBRAID))
        before, after = braided_measure(f).overbraid, braided_measure(g).overbraid
        assert (before, after) == (2, 1)
        d["text"] = f"widths {before} -> {after}"


def test_criterion_3_strong_normalization(criterion):
    with criterion(3, "every redex decreases the measure", 30) as d:
        rng = random.Random(20261019)
        terms = steps = violations = 0
        for mode in (PLAIN, BRAIDED):
            for _ in range(5000):
                f = random_term(rng, WIDE, mode, max_cells=8, max_wires=6)
                m = measure(f, mode)
                for _, g in R.reducts(f, mode):
                    steps += 1
                    if compare(measure(g, mode), m) != LESS:
                        violations += 1
                terms += 1
        assert terms >= 10_000 and violations == 0
        d["text"] = f"{terms} terms, {steps} steps, {violations} violations"


def _confluence(mg, mode, max_cells, max_wires):
    terms = list(R.enumerate_terms(mg, mode, max_cells, R.object_sequences(mg.objects, max_wires, True)))
    table = {}
    first = R.NormalFormCache(mode, R.first_redex, table)
    report = R.critical_pairs(mg, mode, max_cells, max_wires, terms=terms, cache=first)
    others = [R.NormalFormCache(mode, s, table)
              for s in (R.last_redex, R.random_strategy(1), R.random_strategy(2), R.random_strategy(3))]
    disagreements = R.strategy_disagreements(terms, [first] + others)
    return len(terms), len(report.peaks), len(report.failures), len(disagreements)


def test_criterion_4_unique_normal_forms(criterion):
    with criterion(4, "five strategies agree and all peaks join", 60) as d:
        parts = []
        for name, mg, mode in (("G0", G0, PLAIN), ("B0", B0, BRAIDED)):
            n, peaks, failures, disagreements = _confluence(mg, mode, 4, 3)
            assert failures == 0 and disagreements == 0, (name, failures, disagreements)
            parts.append(f"{name} {mode}: {n} terms, {peaks} peaks")
        d["text"] = "; ".join(parts)


def _decision_agrees(mg, mode, max_cells, max_wires, bound):
    """Compare normal-form classes with oracle components, then spot-check decide_equal."""
    terms = list(R.enumerate_terms(mg, mode, max_cells, R.object_sequences(mg.objects, max_wires, True)))
    known = set(terms)
    component = {}
    for f in terms:
        if f not in component:
            for g in R.oracle_component(f, mode, bound) & known:
                component[g] = f
    by_nf, by_oracle = defaultdict(set), defaultdict(set)
    nf = {}
    for f in terms:
        nf[f] = R.normal_form(f, mode)
        by_nf[nf[f]].add(f)
        by_oracle[component[f]].add(f)
    mismatched = {frozenset(s) for s in by_nf.values()} ^ {frozenset(s) for s in by_oracle.values()}
    # decide_equal itself, on each term against its class representative
    # and on representatives of distinct classes sharing a boundary
    for f in terms:
        assert R.decide_equal(f, component[f], mode) is not None
    reps = defaultdict(list)
    for r in set(component.values()):
        reps[(r.source, r.target)].append(r)
    for group in reps.values():
        for a, b in zip(group, group[1:]):
            assert R.decide_equal(a, b, mode) is None
    return len(terms), len(by_oracle), len(mismatched)


def test_criterion_5_decision_matches_oracle(criterion):
    with criterion(5, "decide_equal agrees with the rewrite-graph oracle", 120) as d:
        parts = []
        for name, mg, mode in (("G0", G0, PLAIN), ("B1", B1, BRAIDED), ("B3", B3, BRAIDED)):
            wires = 3 if mode == PLAIN else 2
            n, classes, mismatched = _decision_agrees(mg, mode, 4, wires, bound=4)
            assert mismatched == 0, name
            parts.append(f"{name} {mode}: {n} terms, {classes} classes")
        d["text"] = "; ".join(parts)


def test_criterion_6_proof_checker(criterion):
    with criterion(6, "kelly.gpf accepted, every mutant rejected", 5) as d:
        script = parse_script(data_text("kelly.gpf"))
        assert check_script(M, script).ok
        lemmas, total, survivors = {}, 0, []
        for lm in script.lemmas:
            for path, what, mutated in mutants(M, lm.context, lm.derivation, lemmas):
                total += 1
                if check_lemma(M, Lemma(lm.name, lm.context, lm.lhs, lm.rhs, mutated), lemmas) is None:
                    survivors.append((lm.name, path, what))
            obj = infer_expr2(M, lm.context, lm.lhs)[2]
            lemmas[lm.name] = EquationDecl(lm.name, lm.context, obj, lm.lhs, lm.rhs)
        assert total >= 50 and survivors == []
        d["text"] = f"{len(script.lemmas)} lemmas, {total} mutants, {len(survivors)} survive"


def test_criterion_7_interpretation(criterion):
    with criterion(7, "equations and double norm interpret soundly", 30) as d:
        fm = free_model(M)
        for name in ("pentagon", "triangle"):
            eq = M.equations[name]
            assert check_parallel(interp_expr2(fm, eq.context, eq.lhs), interp_expr2(fm, eq.context, eq.rhs))
        count = 0
        for outer in m_shapes(3):
            for mids in fillings(outer, 3):
                mids = localize(mids)
                middle = subst1(outer, mids)
                for inners in fillings(middle, 3):
                    inners = localize(inners)
                    ctx = m_context(len(vars1(subst1(middle, inners))))
                    dn = double_norm(fm, ctx, outer, mids, inners)
                    assert dn.parallel, (outer, mids, inners)
                    assert R.decide_equal(dn.via_outer.source, dn.via_outer.target) is not None
                    count += 1
        d["text"] = f"{count} double-norm instances"


def test_criterion_8_round_trips(criterion):
    with criterion(8, "parse-print-parse identity and exit codes", 120) as d:
        theories = 0
        for name in ("pseudomonoid", "example-G0"):
            T = builtin_theory(name)
            again = parse_theory(serialize_theory(T))
            assert theories_equal(T, again) and serialize_theory(again) == serialize_theory(T)
            theories += 1
        script = parse_script(data_text("kelly.gpf"))
        printed = format_script(script)
        assert format_script(parse_script(printed)) == printed
        terms = 0
        for mg, mode in ((G0, PLAIN), (B3, BRAIDED)):
            for f in R.enumerate_terms(mg, mode, 3, R.object_sequences(mg.objects, 3, True)):
                assert parse_term(format_term(f), mg) == f
                terms += 1
        for text in (T1_TEXT, T1_NF_TEXT):
            assert format_term(parse_term(text, G0)) == text
        for name, argv, code in CASES:
            out, err = io.StringIO(), io.StringIO()
            assert run(argv, out, err) == code, name
            assert out.getvalue() == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8"), name
        d["text"] = f"{theories} theories, 1 script, {terms} terms, {len(CASES)} golden runs"
