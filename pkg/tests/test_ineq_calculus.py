"""Measure-inequality atoms: parsing, evaluation, and the two decision
procedures, cross-checked against brute-force search where that is small
enough to enumerate."""

import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdlogic.bd_core import (
    BDSyntaxError,
    CapExceededError,
    Not,
    Var,
    class_of,
    entails as bd_entails,
    equivalent,
    parse_bd,
    random_formula,
)
from bdlogic.ineq_calculus import (
    BeliefAtom,
    Combo,
    Sat,
    Unsat,
    WeightAtom,
    _axiom_instances,
    _normal_branches,
    atom_to_str,
    c_and,
    c_atom,
    c_imp,
    c_not,
    c_or,
    combo_kind,
    combo_to_str,
    combo_variables,
    entails,
    eval_belief,
    eval_combo,
    eval_weight,
    normalize_atoms,
    parse_combo,
    sat_belief,
    sat_weight,
    validate_axioms,
)
from bdlogic import models
from bdlogic.models import ProbBDModel, canonical_model, measure_of


def watom(text):
    return parse_combo(text)


def _random_atom(rng, sig, kind):
    cls = WeightAtom if kind == "w" else BeliefAtom
    terms = tuple(
        (rng.randint(-3, 3), rng.choice("+-"), random_formula(rng, sig, 2))
        for _ in range(rng.randint(1, 3)))
    rel = rng.choice((">=", ">", "=", "<", "<="))
    return cls(terms, rel, rng.randint(-3, 3))


def _random_combo(rng, sig, kind, depth=2):
    if depth <= 0 or rng.random() < 0.4:
        return c_atom(_random_atom(rng, sig, kind))
    roll = rng.random()
    a = _random_combo(rng, sig, kind, depth - 1)
    if roll < 0.2:
        return c_not(a)
    b = _random_combo(rng, sig, kind, depth - 1)
    if roll < 0.5:
        return c_and(a, b)
    if roll < 0.8:
        return c_or(a, b)
    return c_imp(a, b)


class TestParser:
    def test_example(self):
        c = parse_combo("2*w+[p] - 1*w+[q] >= 1")
        assert c.op == "atom"
        assert c.atom == WeightAtom(
            ((2, "+", Var("p")), (-1, "+", Var("q"))), ">=", 1)

    def test_coefficient_defaults_to_one(self):
        c = parse_combo("w+[p & -p] >= 1")
        assert c.atom.terms == ((1, "+", parse_bd("p & -p")),)

    def test_negative_bound_and_leading_minus(self):
        c = parse_combo("-2*w-[p] + w+[q] < -3")
        assert c.atom.terms == ((-2, "-", Var("p")), (1, "+", Var("q")))
        assert c.atom.relation == "<" and c.atom.bound == -3

    def test_arrow_right_associative(self):
        c = parse_combo("w+[p] >= 1 -> w+[q] >= 1 -> w+[p] >= 0")
        assert c.op == "imp" and c.args[1].op == "imp"

    def test_precedence_not_and_or(self):
        c = parse_combo("not w+[p] >= 1 and w+[q] >= 1")
        assert c.op == "and" and c.args[0].op == "not"
        c = parse_combo("w+[p] >= 1 or w+[q] >= 1 and w+[p] < 1")
        assert c.op == "or" and c.args[1].op == "and"

    def test_belief_atoms(self):
        c = parse_combo("b+[p] - b-[q] = 0")
        assert isinstance(c.atom, BeliefAtom) and c.atom.kind == "b"

    def test_garbage(self):
        for text in ["w+[p", "w+[p] >=", "v+[p] >= 1", "w+[p] >> 1",
                     "w+[p] >= 1 and", "1 >= w+[p]", "w*[p] >= 1",
                     "w+[p] >= 1 extra"]:
            with pytest.raises(BDSyntaxError):
                parse_combo(text)

    def test_mixed_kinds_inside_atom(self):
        with pytest.raises(BDSyntaxError):
            parse_combo("w+[p] + b+[q] >= 1")

    def test_signature_enforced_inside_brackets(self):
        with pytest.raises(Exception):
            parse_combo("w+[r] >= 1", signature=["p", "q"])

    def test_constants_need_flag(self):
        with pytest.raises(BDSyntaxError):
            parse_combo("w+[T] >= 1")
        c = parse_combo("w+[T] >= 1", with_constants=True)
        assert c.atom.terms[0][2].kind == "top"

    def test_roundtrip_random(self):
        rng = random.Random(404)
        for _ in range(120):
            kind = rng.choice("wb")
            c = _random_combo(rng, ("p", "q"), kind, depth=3)
            assert parse_combo(combo_to_str(c)) == c

    @given(st.integers(-9, 9), st.integers(-9, 9),
           st.sampled_from((">=", ">", "=", "<", "<=")))
    @settings(max_examples=60)
    def test_atom_roundtrip(self, coeff, bound, rel):
        a = WeightAtom(((coeff, "+", Var("p")),), rel, bound)
        assert parse_combo(atom_to_str(a)).atom == a

    def test_combo_validation(self):
        with pytest.raises(ValueError):
            WeightAtom((), ">=", 0)
        with pytest.raises(TypeError):
            WeightAtom(((F(1, 2), "+", Var("p")),), ">=", 0)
        with pytest.raises(ValueError):
            Combo("xor", args=())
        with pytest.raises(ValueError):
            combo_kind(c_and(watom("w+[p] >= 0"), watom("b+[p] >= 0")))


class TestEval:
    def test_glut_weight(self):
        M0 = canonical_model(("p",))
        glut = frozenset({("p", True), ("p", False)})
        M = ProbBDModel(M0.states, M0.vplus, M0.vminus, {glut: F(1)})
        assert eval_weight(M, watom("w+[p & -p] >= 1"))
        assert eval_weight(M, watom("w+[p] = 1 and w-[p] = 1"))

    def test_weight_axioms_random(self):
        rng = random.Random(5)
        for _ in range(40):
            M = models.random_prob_model(("p", "q"), rng.randint(1, 4), rng)
            phi = random_formula(rng, ("p", "q"), 2)
            assert measure_of(M, phi, "prob", "-") == measure_of(M, Not(phi), "prob", "+")
            assert F(0) <= measure_of(M, phi, "prob", "+") <= F(1)

    def test_eval_combo_connectives(self):
        M0 = canonical_model(("p",))
        M = ProbBDModel(M0.states, M0.vplus, M0.vminus,
                        {frozenset({("p", True)}): F(1)})
        t, f = watom("w+[p] >= 1"), watom("w+[p] < 1")
        assert eval_combo(M, t) and not eval_combo(M, f)
        assert eval_combo(M, c_imp(f, f)) and eval_combo(M, c_imp(t, t))
        assert not eval_combo(M, c_imp(t, f))
        assert eval_combo(M, c_or(f, t)) and not eval_combo(M, c_and(t, f))

    def test_kind_guards(self):
        M0 = canonical_model(("p",))
        M = ProbBDModel(M0.states, M0.vplus, M0.vminus,
                        {frozenset(): F(1)})
        with pytest.raises(ValueError):
            eval_weight(M, watom("b+[p] >= 0"))
        with pytest.raises(ValueError):
            eval_belief(M, watom("w+[p] >= 0"))


class TestNormalize:
    def test_negation_flips_relation(self):
        n = normalize_atoms(c_not(watom("w+[p] >= 1")))
        assert n.op == "atom" and n.atom.relation == "<" and n.atom.bound == 1

    def test_negated_equality_splits(self):
        n = normalize_atoms(c_not(watom("w+[p] = 1")))
        assert n.op == "or"
        rels = {b[0].relation for b in _normal_branches(c_not(watom("w+[p] = 1")))}
        assert rels == {"<", ">"}

    def test_minus_measures_eliminated(self):
        n = normalize_atoms(watom("w-[p] >= 1"))
        (coeff, sign, phi), = n.atom.terms
        assert (coeff, sign) == (1, "+") and equivalent(phi, Not(Var("p")))

    def test_belief_merge_example(self):
        n = normalize_atoms(parse_combo("b+[p] + b+[p | p] >= 1"))
        (coeff, sign, phi), = n.atom.terms
        assert coeff == 2 and sign == "+"
        assert equivalent(phi, Var("p"))

    def test_cancellation_keeps_a_summand(self):
        n = normalize_atoms(watom("w+[p] - w+[p] >= 0"))
        (coeff, _, _), = n.atom.terms
        assert coeff == 0

    def test_preserves_truth_weight(self):
        rng = random.Random(77)
        for _ in range(60):
            c = _random_combo(rng, ("p", "q"), "w")
            M = models.random_prob_model(("p", "q"), rng.randint(1, 4), rng)
            assert eval_combo(M, normalize_atoms(c)) == eval_combo(M, c)

    def test_preserves_truth_belief(self):
        rng = random.Random(78)
        for _ in range(40):
            c = _random_combo(rng, ("p",), "b")
            M = models.random_ds_model(("p",), rng.randint(1, 4), rng)
            assert eval_combo(M, normalize_atoms(c)) == eval_combo(M, c)

    def test_all_atoms_positive(self):
        rng = random.Random(79)
        for _ in range(40):
            c = _random_combo(rng, ("p", "q"), rng.choice("wb"))
            for branch in _normal_branches(c):
                for a in branch:
                    assert all(sign == "+" for _, sign, _ in a.terms)
                    assert a.relation in (">=", ">", "=", "<", "<=")


def _grid_models():
    """Every probability mass over the four 1-variable states with
    denominator at most 4."""
    M0 = canonical_model(("p",))
    seen = set()
    out = []
    for denom in (1, 2, 3, 4):
        for cut in itertools.product(range(denom + 1), repeat=3):
            a, b, c = sorted(cut)
            parts = (a, b - a, c - b, denom - c)
            masses = tuple(F(x, denom) for x in parts)
            if masses in seen:
                continue
            seen.add(masses)
            mass = {s: v for s, v in zip(M0.states, masses) if v}
            out.append(ProbBDModel(M0.states, M0.vplus, M0.vminus, mass))
    return out


GRID = _grid_models()

CURATED_1VAR = [
    "w+[p] >= 1",
    "w+[p & -p] >= 1",
    "w+[p] + w+[-p] = 2",
    "w+[p] + w+[-p] <= 1",
    "w+[p] > 0 and w+[p] < 1",
    "w+[p] = 0 and w+[-p] = 0",
    "not (w+[p] >= 1)",
    "w+[p] - w+[p | p] = 0",
    "w+[p] - w+[p & p] > 0",
    "w+[p] >= 1 -> w+[p & -p] >= 1",
    "w+[p] < 0",
    "2*w+[p] - 2*w+[-p] = 1",
    "w+[p] = 1 and w-[p] = 1",
    "w+[p] + w+[-p] < 1 and w+[p] > 0",
    "w-[p] = 1 and w+[p] = 1 and w+[p & -p] < 1",
]


class TestSatWeight:
    def test_glut_witness(self):
        r = sat_weight(watom("w+[p & -p] >= 1"))
        assert isinstance(r, Sat)
        glut = frozenset({("p", True), ("p", False)})
        assert r.model.mass == {glut: F(1)}

    def test_contradictory_pair(self):
        assert isinstance(sat_weight(watom("w+[p] >= 1 and w+[p] < 1")), Unsat)

    def test_inclusion_exclusion_valid(self):
        c = parse_combo("not (w+[p | q] - w+[p] - w+[q] + w+[p & q] = 0)")
        assert not sat_weight(c)

    def test_paraconsistent_sum(self):
        # both a formula and its negation can have weight one
        assert not entails([], watom("w+[p] + w+[-p] <= 1"), "w")
        r = sat_weight(watom("w+[p] + w+[-p] = 2"))
        assert r and eval_weight(r.model, watom("w+[p] + w+[-p] = 2"))

    def test_grid_agreement(self):
        for text in CURATED_1VAR:
            c = parse_combo(text)
            grid_sat = any(eval_weight(M, c) for M in GRID)
            lp = sat_weight(c)
            if grid_sat:
                assert lp, text
            if lp:
                assert eval_weight(lp.model, c), text

    def test_branch_reorder_invariance(self):
        rng = random.Random(91)
        for _ in range(25):
            a = c_atom(_random_atom(rng, ("p", "q"), "w"))
            b = c_atom(_random_atom(rng, ("p", "q"), "w"))
            assert bool(sat_weight(c_or(a, b))) == bool(sat_weight(c_or(b, a)))

    def test_cap(self):
        c = watom("w+[a] + w+[b] + w+[c] + w+[d] >= 1")
        with pytest.raises(CapExceededError):
            sat_weight(c)

    def test_no_variables_at_all(self):
        c = parse_combo("w+[T] >= 1", with_constants=True)
        r = sat_weight(c)
        assert r and eval_weight(r.model, c)
        assert not sat_weight(parse_combo("w+[F] >= 1", with_constants=True))


class TestSatBelief:
    def test_two_monotone_unsat(self):
        c = parse_combo("b+[p] >= 1 and b+[q] >= 1 and b+[p & q] < 1")
        assert isinstance(sat_belief(c), Unsat)

    def test_monotone_unsat(self):
        assert not sat_belief(parse_combo("b+[p] - b+[p | q] > 0"))

    def test_vacuous_sat(self):
        c = parse_combo("b+[p | q] - b+[p] >= 0")
        r = sat_belief(c)
        assert r and eval_belief(r.model, c)

    def test_glut_belief(self):
        r = sat_belief(parse_combo("b+[p & -p] >= 1"))
        assert isinstance(r, Sat)
        assert measure_of(r.model, parse_bd("p & -p"), "bel", "+") == 1

    def test_belief_assignment_matches_model(self):
        c = parse_combo("2*b+[p & q] - 1*b+[p | q] >= 1")
        r = sat_belief(c)
        assert r
        for text in ["p", "q", "p & q", "p | q", "p & -q"]:
            phi = parse_bd(text)
            assert r.belief[class_of(phi)] == measure_of(r.model, phi, "bel", "+")

    def test_normalized_switch(self):
        low = parse_combo("b+[p | -p] < 1")
        assert sat_belief(low)
        assert not sat_belief(low, normalized=True)

    def test_not_one_kind(self):
        with pytest.raises(ValueError):
            sat_belief(watom("w+[p] >= 1"))

    def test_constants_rejected(self):
        c = parse_combo("b+[p & T] >= 1", with_constants=True)
        with pytest.raises(ValueError):
            sat_belief(c)

    def test_cap(self):
        with pytest.raises(CapExceededError):
            sat_belief(parse_combo("b+[a] + b+[b] + b+[c] >= 1"))


class TestEntails:
    def test_weight_monotone(self):
        assert entails([watom("w+[p] >= 1")], watom("w+[p | q] >= 1"), "w")

    def test_weight_paraconsistent(self):
        assert not entails([], watom("w+[p] + w+[-p] <= 1"), "w")

    def test_belief_from_glut(self):
        assert entails([parse_combo("b+[p & -p] >= 1")],
                       parse_combo("b+[p] >= 1"), "b")

    def test_belief_no_normalization(self):
        # beliefs may be totally agnostic: nothing forces b+[p | -p] up
        assert not entails([], parse_combo("b+[p | -p] > 0"), "b")

    def test_kind_mismatch(self):
        with pytest.raises(ValueError):
            entails([watom("w+[p] >= 1")], parse_combo("b+[p] >= 1"), "b")
        with pytest.raises(ValueError):
            entails([watom("w+[p] >= 1")], watom("w+[p] >= 1"), "pr")


class TestAxioms:
    def test_weight_axioms_hold(self):
        rep = validate_axioms("w", samples=60)
        assert sum(v["instances"] for v in rep.values()) > 300
        assert all(not v["violations"] for v in rep.values()), rep

    def test_belief_axioms_hold(self):
        rep = validate_axioms("b", samples=60)
        assert sum(v["instances"] for v in rep.values()) > 300
        assert all(not v["violations"] for v in rep.values()), rep

    def test_axiom_negations_unsat_weight(self):
        rng = random.Random(11)
        for _ in range(8):
            sig = ("p", "q")[:rng.randint(1, 2)]
            phi, chi, psi = (random_formula(rng, sig, 2) for _ in range(3))
            for name, inst in _axiom_instances("w", phi, chi, psi):
                assert not sat_weight(c_not(inst)), (name, combo_to_str(inst))

    def test_axiom_negations_unsat_belief(self):
        rng = random.Random(12)
        for trial in range(6):
            sig = ("p", "q") if trial < 2 else ("p",)
            phi, chi, psi = (random_formula(rng, sig, 2) for _ in range(3))
            for name, inst in _axiom_instances("b", phi, chi, psi):
                assert not sat_belief(c_not(inst)), (name, combo_to_str(inst))
