import random

import pytest
from hypothesis import given, settings, strategies as st

from bdlogic.bd_core import (
    AND4,
    BDSyntaxError,
    BOT,
    CapExceededError,
    NOT4,
    OR4,
    TOP,
    And,
    Not,
    Or,
    UnknownVariableError,
    Var,
    all_states,
    class_entails,
    class_join,
    class_meet,
    class_neg,
    class_of,
    conflate_state,
    entails,
    entails_with_witness,
    enumerate_lindenbaum,
    equivalent,
    fdnf,
    formula_of_class,
    has_constants,
    lindenbaum_class_keys,
    lit4_of_state,
    neg_states,
    nnf,
    normalize,
    parse_bd,
    positive_extension,
    negative_extension,
    support,
    to_str,
    value4,
    variables,
)

SIG2 = ["p", "q"]
STATES2 = all_states(SIG2)


def formulas(vars="pq", max_depth=5):
    base = st.sampled_from([Var(v) for v in vars])
    return st.recursive(
        base,
        lambda kids: st.one_of(
            kids.map(Not),
            st.tuples(kids, kids).map(lambda ab: And(*ab)),
            st.tuples(kids, kids).map(lambda ab: Or(*ab)),
        ),
        max_leaves=max_depth * 2,
    )


class TestParsePrint:
    def test_precedence(self):
        f = parse_bd("p & q | -r & p")
        assert f == Or(And(Var("p"), Var("q")), And(Not(Var("r")), Var("p")))

    def test_parens(self):
        f = parse_bd("p & (q | -r)")
        assert to_str(f) == "p & (q | -r)"

    def test_double_negation_kept_syntactically(self):
        assert to_str(parse_bd("--p")) == "--p"

    def test_constants_need_flag(self):
        with pytest.raises(BDSyntaxError):
            parse_bd("p & T")
        f = parse_bd("p & T", with_constants=True)
        assert f == And(Var("p"), TOP)

    def test_signature_enforced(self):
        with pytest.raises(UnknownVariableError):
            parse_bd("p & r", signature=["p", "q"])

    def test_garbage(self):
        for bad in ["", "p &", "p q", "(p", "p)", "&p", "p | | q"]:
            with pytest.raises(BDSyntaxError):
                parse_bd(bad)

    @given(formulas())
    def test_roundtrip(self, f):
        assert parse_bd(to_str(f)) == f

    def test_not_compound_parenthesized(self):
        assert to_str(Not(Or(Var("p"), Var("q")))) == "-(p | q)"


class TestSupport:
    def test_state_order_one_var(self):
        assert all_states(["p"]) == [
            frozenset(),
            frozenset({("p", True)}),
            frozenset({("p", False)}),
            frozenset({("p", True), ("p", False)}),
        ]

    def test_negation_swaps(self):
        w = frozenset({("p", True)})
        assert support(parse_bd("-p"), w) == (False, True)

    def test_conjunction_negative_clause(self):
        # a conjunction is refuted as soon as one conjunct is
        w = frozenset({("p", False)})
        assert support(parse_bd("p & q"), w) == (False, True)
        assert support(parse_bd("p | q"), w) == (False, False)

    def test_constants(self):
        for w in STATES2:
            assert support(TOP, w) == (True, False)
            assert support(BOT, w) == (False, True)

    @given(formulas(), st.sampled_from(STATES2))
    def test_four_valued_route_agrees(self, f, w):
        pos, neg = support(f, w)
        v = value4(f, lit4_of_state(w, SIG2))
        assert {"T": (True, False), "B": (True, True), "N": (False, False), "F": (False, True)}[v] == (pos, neg)

    def test_tables_are_de_morgan(self):
        for x in "TBNF":
            assert NOT4[NOT4[x]] == x
            for y in "TBNF":
                assert NOT4[AND4[(x, y)]] == OR4[(NOT4[x], NOT4[y])]
                assert AND4[(x, y)] == AND4[(y, x)]


class TestEntailment:
    def test_examples(self):
        assert entails(parse_bd("--p | q"), parse_bd("p | q"))
        assert entails(parse_bd("p"), parse_bd("p | (q & -q)"))
        assert not entails(parse_bd("p & -p"), parse_bd("q"))
        assert not entails(parse_bd("p"), parse_bd("q | -q"))

    def test_witness_side(self):
        ok, wit = entails_with_witness(parse_bd("p"), parse_bd("q"))
        assert not ok
        w, side = wit
        if side == "+":
            assert support(parse_bd("p"), w)[0] and not support(parse_bd("q"), w)[0]
        else:
            assert support(parse_bd("q"), w)[1] and not support(parse_bd("p"), w)[1]

    def test_constants_entail(self):
        assert entails(BOT, parse_bd("p"))
        assert entails(parse_bd("p"), TOP)
        assert not entails(TOP, parse_bd("p | -p"))

    def test_cap(self):
        many = [Var("v%d" % i) for i in range(9)]
        f = many[0]
        for g in many[1:]:
            f = And(f, g)
        with pytest.raises(CapExceededError):
            entails(f, f)

    @given(formulas(), formulas())
    @settings(max_examples=150)
    def test_positive_inclusion_suffices(self, f, g):
        # two-sided consequence coincides with positive-extension inclusion
        inc = positive_extension(f, STATES2) <= positive_extension(g, STATES2)
        assert entails(f, g) == inc


class TestNormalForms:
    @given(formulas())
    def test_nnf_equivalent(self, f):
        g = nnf(f)
        assert equivalent(f, g)

    @given(formulas())
    @settings(max_examples=80)
    def test_dnf_cnf_idnf_equivalent(self, f):
        for form in ("dnf", "cnf", "idnf"):
            assert equivalent(f, normalize(f, form))

    def test_idnf_absorbs(self):
        assert to_str(normalize(parse_bd("(p & q) | p"), "idnf")) == "p"

    def test_idnf_is_antichain(self):
        key = class_of(parse_bd("(p & q) | (q & p) | -q"))
        assert all(not (c < d or d < c) for c in key for d in key if c != d)

    def test_fdnf_golden(self):
        X = [("p", True), ("p", False), ("q", True), ("q", False)]
        out = fdnf(parse_bd("p & q"), X)
        assert to_str(out) == "p & q | p & -p & q | p & q & -q | p & -p & q & -q"

    def test_fdnf_requires_neg_closed(self):
        with pytest.raises(ValueError):
            fdnf(parse_bd("p"), [("p", True)])
        with pytest.raises(ValueError):
            fdnf(parse_bd("p & q"), [("p", True), ("p", False)])

    def test_fdnf_constants(self):
        X = [("p", True), ("p", False)]
        # everything entails T (its negative condition is vacuous)
        assert to_str(fdnf(TOP, X, with_constants=True)) == "F | T | p | -p | p & -p"
        # only F entails F: every literal clause supports itself somewhere
        assert to_str(fdnf(BOT, X, with_constants=True)) == "F"

    @given(formulas(max_depth=3))
    @settings(max_examples=60)
    def test_fdnf_equivalent(self, f):
        X = [(v, s) for v in SIG2 for s in (True, False)]
        assert equivalent(f, fdnf(f, X))


class TestLindenbaum:
    def test_counts(self):
        assert len(enumerate_lindenbaum(["p"])) == 4
        assert len(enumerate_lindenbaum(["p"], with_constants=True)) == 6
        assert len(enumerate_lindenbaum(SIG2)) == 166

    def test_cap(self):
        with pytest.raises(CapExceededError):
            enumerate_lindenbaum(["p", "q", "r"])

    def test_representatives_distinct_and_canonical(self):
        reps = enumerate_lindenbaum(SIG2)
        keys = {class_of(f) for f in reps}
        assert len(keys) == 166
        exts = {positive_extension(f, STATES2) for f in reps}
        assert len(exts) == 166  # positive extension already separates classes

    def test_one_variable_representatives(self):
        reps = [to_str(f) for f in enumerate_lindenbaum(["p"])]
        assert set(reps) == {"p", "-p", "p & -p", "p | -p"}

    @given(formulas(), formulas())
    @settings(max_examples=100)
    def test_class_ops_mirror_connectives(self, f, g):
        assert class_of(And(f, g)) == class_meet(class_of(f), class_of(g))
        assert class_of(Or(f, g)) == class_join(class_of(f), class_of(g))
        assert class_of(Not(f)) == class_neg(class_of(f))

    @given(formulas(), formulas())
    @settings(max_examples=100)
    def test_class_entails_matches(self, f, g):
        assert class_entails(class_of(f), class_of(g)) == entails(f, g)

    def test_class_formula_roundtrip(self):
        for key in lindenbaum_class_keys(SIG2):
            assert class_of(formula_of_class(key)) == key

    def test_constant_classes(self):
        keys = lindenbaum_class_keys(["p"], with_constants=True)
        assert class_of(TOP) in keys and class_of(BOT) in keys
        assert class_meet(class_of(BOT), class_of(parse_bd("p"))) == class_of(BOT)
        assert class_join(class_of(TOP), class_of(parse_bd("p"))) == class_of(TOP)
        assert class_neg(class_of(TOP)) == class_of(BOT)


class TestNegStates:
    def test_lit4_example(self):
        w = frozenset({("p", False), ("q", True), ("q", False)})
        assert lit4_of_state(w, ["p", "q", "r"]) == {"p": "F", "q": "B", "r": "N"}

    def test_conflation_involutive(self):
        for w in STATES2:
            assert conflate_state(conflate_state(w, SIG2), SIG2) == w

    def test_empty_and_full(self):
        full = frozenset(STATES2)
        assert neg_states(frozenset(), SIG2) == full
        assert neg_states(full, SIG2) == frozenset()

    @given(formulas())
    @settings(max_examples=100)
    def test_matches_formula_negation(self, f):
        A = positive_extension(f, STATES2)
        assert neg_states(A, SIG2) == positive_extension(Not(f), STATES2)
        assert positive_extension(Not(f), STATES2) == negative_extension(f, STATES2)

    def test_involution_random_subsets(self):
        rng = random.Random(20240817)
        full = list(STATES2)
        for _ in range(50):
            A = frozenset(s for s in full if rng.random() < 0.5)
            B = frozenset(s for s in full if rng.random() < 0.5)
            assert neg_states(neg_states(A, SIG2), SIG2) == A
            # De Morgan over union/intersection
            assert neg_states(A | B, SIG2) == neg_states(A, SIG2) & neg_states(B, SIG2)
            assert neg_states(A & B, SIG2) == neg_states(A, SIG2) | neg_states(B, SIG2)


def test_variables_and_constants_flags():
    f = parse_bd("(p & -q) | T", with_constants=True)
    assert variables(f) == ("p", "q")
    assert has_constants(f)
    assert not has_constants(parse_bd("p | q"))
