"""Tests for the two-dimensional Lukasiewicz outer logics."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdlogic import luk_two as lt
from bdlogic.bd_core import BDSyntaxError, UnknownVariableError
from bdlogic.luk_two import (
    L2, NL, OAtom, OAnd, ODelta, ODtop, OFuse, OIff, OImp, OMinus, ONot,
    OOr, OPlus, OSiff, OSimp, OSnot, OWimp, POINT_FALSE, POINT_TRUE,
    TwoPoint, axiom_suite, check_axioms, classify, conflate, designated,
    expand, falsify, is_nnf, nnf, outer_atoms, outer_to_str, parse_outer,
    random_outer, random_valuation,
)

ATOMS = ("a", "b", "c")


def tp(x, y):
    return TwoPoint(F(x), F(y))


class TestTwoPoint:
    def test_validation(self):
        with pytest.raises(ValueError):
            TwoPoint(2, 0)
        with pytest.raises(ValueError):
            TwoPoint(F(1, 2), F(-1, 3))

    def test_coercion_accepts_strings_and_pairs(self):
        assert lt.as_twopoint(("3/5", "3/10")) == TwoPoint(F(3, 5), F(3, 10))
        assert lt.as_twopoint(["0", "1"]) == POINT_FALSE

    def test_truth_order(self):
        # more support for, less support against
        assert tp("1/3", "1/2").leq_truth(tp("2/3", "1/4"))
        assert not tp("1/3", "1/2").leq_truth(tp("2/3", "3/4"))
        assert POINT_FALSE.leq_truth(POINT_TRUE)

    def test_info_order(self):
        # both supports grow
        assert tp("1/3", "1/4").leq_info(tp("2/3", "1/2"))
        assert not tp("1/3", "1/2").leq_info(tp("2/3", "1/4"))

    def test_orders_differ(self):
        a, b = tp("1/3", "1/2"), tp("2/3", "1/4")
        assert a.leq_truth(b) and not a.leq_info(b)

    def test_immutable_and_hashable(self):
        x = tp("1/2", "1/2")
        with pytest.raises(AttributeError):
            x.first = F(0)
        assert len({tp(0, 1), POINT_FALSE}) == 1


class TestParser:
    def test_precedence(self):
        f = parse_outer("~a & b | c -> a", L2)
        g = OImp(OOr(OAnd(OSnot(OAtom(L2, "a")), OAtom(L2, "b")),
                     OAtom(L2, "c")),
                 OAtom(L2, "a"))
        assert f is g

    def test_arrow_right_associative(self):
        f = parse_outer("a -> b -> c", L2)
        a, b, c = (OAtom(L2, x) for x in ATOMS)
        assert f is OImp(a, OImp(b, c))

    def test_prefix_stacks(self):
        f = parse_outer("-~D Dt a", L2)
        assert f is ONot(OSnot(ODelta(ODtop(OAtom(L2, "a")))))

    def test_group_ops_tokenised_apart_from_parens(self):
        f = parse_outer("a (+) (-b)", L2)
        assert f is OPlus(OAtom(L2, "a"), ONot(OAtom(L2, "b")))
        g = parse_outer("a (-) b (+) c", L2)
        a, b, c = (OAtom(L2, x) for x in ATOMS)
        assert g is OPlus(OMinus(a, b), c)

    def test_nl_connectives(self):
        f = parse_outer("a ~> b => (a <=> b)", NL)
        a, b = OAtom(NL, "a"), OAtom(NL, "b")
        assert f is OWimp(a, OSimp(b, OSiff(a, b)))

    def test_iff_available_in_both(self):
        assert parse_outer("a <-> b", L2).kind == "iff"
        assert parse_outer("a <-> b", NL).kind == "iff"

    def test_logic_gating(self):
        with pytest.raises(BDSyntaxError):
            parse_outer("a ~> b", L2)
        with pytest.raises(BDSyntaxError):
            parse_outer("a -> b", NL)
        with pytest.raises(BDSyntaxError):
            parse_outer("a => b", L2)
        with pytest.raises(BDSyntaxError):
            parse_outer("a <=> b", L2)
        with pytest.raises(ValueError):
            OWimp(OAtom(L2, "a"), OAtom(L2, "b"))
        with pytest.raises(ValueError):
            OAnd(OAtom(L2, "a"), OAtom(NL, "a"))

    def test_constants_gated(self):
        with pytest.raises(BDSyntaxError):
            parse_outer("a -> 1", L2)
        f = parse_outer("1 (-) 0", L2, with_constants=True)
        assert lt.eval({}, f) == POINT_TRUE

    def test_signature(self):
        with pytest.raises(UnknownVariableError):
            parse_outer("a -> d", L2, signature=("a", "b"))

    def test_modal_atoms(self):
        f = parse_outer("Pr[p & -q] -> Dt Pr[p | q]", L2)
        assert [lt.payload_str(p) for p in outer_atoms(f)] == \
            ["Pr[p & -q]", "Pr[p | q]"]
        assert parse_outer(outer_to_str(f), L2) is f
        g = parse_outer("B[p] ~> Pl[-p]", NL)
        assert {p[0] for p in outer_atoms(g)} == {"B", "Pl"}

    def test_garbage(self):
        for text in ("", "a ->", "(a", "a b", "-> a", "a ~~> b", "a & ", "2",
                     "Pr[p", "a <> b"):
            with pytest.raises(BDSyntaxError):
                parse_outer(text, L2)

    @settings(max_examples=120, deadline=None)
    @given(st.integers(0, 10 ** 9), st.sampled_from([L2, NL]))
    def test_roundtrip(self, seed, logic):
        rng = random.Random(seed)
        f = random_outer(rng, logic, ("p", "q", "r"), depth=4)
        assert parse_outer(outer_to_str(f), logic) is f


class TestEvalL2:
    def test_arrow(self):
        v = {"p": tp("3/5", "3/10"), "q": tp("2/5", "1/2")}
        assert lt.eval(v, parse_outer("p -> q", L2)) == tp("4/5", "1/5")

    def test_arrow_negation_certificate(self):
        # -(p -> q) = -q (-) -p pins the arrow's second coordinate: the
        # swap of (p -> q) must equal the (-) of the swaps.
        rng = random.Random(3)
        f = parse_outer("-(p -> q)", L2)
        g = parse_outer("-q (-) -p", L2)
        for _ in range(200):
            v = random_valuation(rng, ("p", "q"))
            assert lt.eval(v, f) == lt.eval(v, g)

    def test_swap_and_coordinate_negations(self):
        v = {"p": tp("3/5", "3/10")}
        assert lt.eval(v, parse_outer("-p", L2)) == tp("3/10", "3/5")
        assert lt.eval(v, parse_outer("~p", L2)) == tp("2/5", "7/10")

    def test_delta(self):
        cases = {
            tp(1, 0): tp(1, 0), tp(1, "1/5"): tp(1, 1),
            tp("1/2", 0): tp(0, 0), tp("1/2", "1/5"): tp(0, 1),
        }
        f = parse_outer("D p", L2)
        for x, want in cases.items():
            assert lt.eval({"p": x}, f) == want

    def test_dtop_detects_the_true_point(self):
        f = parse_outer("Dt p", L2)
        assert lt.eval({"p": tp(1, 0)}, f) == POINT_TRUE
        assert lt.eval({"p": tp(1, "1/5")}, f) == POINT_FALSE
        assert lt.eval({"p": tp("4/5", 0)}, f) == POINT_FALSE

    def test_lattice_and_group_connectives(self):
        v = {"p": tp("3/5", "3/10"), "q": tp("2/5", "1/2")}
        assert lt.eval(v, parse_outer("p & q", L2)) == tp("2/5", "1/2")
        assert lt.eval(v, parse_outer("p | q", L2)) == tp("3/5", "3/10")
        assert lt.eval(v, parse_outer("p &. q", L2)) == tp(0, "4/5")
        assert lt.eval(v, parse_outer("p (+) q", L2)) == tp(1, 0)
        # second coordinate of (-) is q2 ->l p2 = 1/2 ->l 3/10 = 4/5
        assert lt.eval(v, parse_outer("p (-) q", L2)) == tp("1/5", "4/5")

    def test_missing_atom(self):
        with pytest.raises(UnknownVariableError):
            lt.eval({"p": POINT_TRUE}, parse_outer("p -> q", L2))


class TestEvalNL:
    def test_weak_arrow(self):
        v = {"p": tp("3/5", "3/10"), "q": tp("2/5", "1/2")}
        got = lt.eval(v, parse_outer("p ~> q", NL))
        assert got == tp("4/5", "1/10")  # (3/5 ->l 2/5, 3/5 &l 1/2)

    def test_snot_lands_on_the_classical_line(self):
        v = {"p": tp("3/5", "3/10")}
        got = lt.eval(v, parse_outer("~p", NL))
        assert got == tp("2/5", "3/5")
        assert classify(got) == "classical"

    def test_right_triangle(self):
        # ~p ~> -p is designated exactly when support-for + support-against
        # reaches 1.
        f = parse_outer("~p ~> -p", NL)
        assert designated(lt.eval({"p": tp("4/5", "2/5")}, f), NL)
        assert not designated(lt.eval({"p": tp("1/5", "2/5")}, f), NL)
        assert designated(lt.eval({"p": tp("1/2", "1/2")}, f), NL)

    def test_designation_is_a_filter(self):
        assert designated(tp(1, "9/10"), NL)
        assert not designated(tp(1, "9/10"), L2)
        assert designated(POINT_TRUE, NL)

    def test_group_connectives(self):
        v = {"p": tp("3/5", "3/10"), "q": tp("2/5", "1/2")}
        # first coordinates follow one-dimensional Lukasiewicz arithmetic
        assert lt.eval(v, parse_outer("p (+) q", NL)).first == F(1)
        assert lt.eval(v, parse_outer("p (-) q", NL)).first == F(1, 5)
        assert lt.eval(v, parse_outer("p &. q", NL)).first == F(0)


class TestExpansion:
    """The closed coordinate forms must match the defining abbreviations."""

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 10 ** 9), st.sampled_from([L2, NL]))
    def test_eval_agrees_with_expansion(self, seed, logic):
        rng = random.Random(seed)
        f = random_outer(rng, logic, ATOMS, depth=4)
        v = random_valuation(rng, ATOMS)
        assert lt.eval(v, f) == lt.eval(v, expand(f))

    def test_expansion_is_primitive(self):
        prim = {"l2": {"atom", "top", "bot", "not", "snot", "imp", "delta"},
                "nl": {"atom", "top", "bot", "not", "snot", "wimp", "and",
                       "delta"}}

        def kinds(g, acc):
            acc.add(g.kind)
            for a in g.args:
                kinds(a, acc)
            return acc

        rng = random.Random(5)
        for logic in (L2, NL):
            for _ in range(60):
                f = random_outer(rng, logic, ATOMS, depth=4)
                assert kinds(expand(f), set()) <= prim[logic]


class TestNNF:
    def test_l2_arrow_example(self):
        f = nnf(parse_outer("-(p -> q)", L2))
        assert outer_to_str(f) == "~(~-p -> ~-q)"

    def test_double_negation(self):
        assert nnf(parse_outer("--p", L2)) is parse_outer("p", L2)

    def test_nl_arrow_example(self):
        f = nnf(parse_outer("-(p ~> q)", NL))
        assert outer_to_str(f) == "p &. -q"

    def test_negation_only_on_atoms(self):
        rng = random.Random(13)
        for logic in (L2, NL):
            for _ in range(150):
                f = random_outer(rng, logic, ATOMS, depth=4)
                assert is_nnf(nnf(f))

    def test_l2_nnf_exact(self):
        rng = random.Random(17)
        hits = 0
        while hits < 500:
            f = random_outer(rng, L2, ("a", "b"), depth=4)
            v = random_valuation(rng, ("a", "b"))
            assert lt.eval(v, nnf(f)) == lt.eval(v, f)
            hits += 1

    def test_nl_nnf_first_coordinate(self):
        rng = random.Random(19)
        hits = 0
        while hits < 500:
            f = random_outer(rng, NL, ("a", "b"), depth=4)
            v = random_valuation(rng, ("a", "b"))
            assert lt.eval(v, nnf(f)).first == lt.eval(v, f).first
            hits += 1

    def test_nl_nnf_exact_on_the_strong_fragment(self):
        # -(x & y) = -x | -y, -(x | y) = -x & -y, --x = x hold with both
        # coordinates, so lattice formulas rewrite exactly.
        rng = random.Random(23)

        def lattice_formula(depth):
            if depth <= 0 or rng.random() < 0.3:
                return OAtom(NL, rng.choice(ATOMS))
            roll = rng.random()
            if roll < 0.34:
                return ONot(lattice_formula(depth - 1))
            op = OAnd if roll < 0.67 else OOr
            return op(lattice_formula(depth - 1), lattice_formula(depth - 1))

        for _ in range(200):
            f = lattice_formula(4)
            v = random_valuation(rng, ATOMS)
            assert lt.eval(v, nnf(f)) == lt.eval(v, f)


class TestClassify:
    def test_examples(self):
        assert classify(tp("1/2", "1/2")) == "classical"
        assert classify(tp("1/5", "1/5")) == "incomplete"
        assert classify(tp("9/10", "9/10")) == "contradictory"

    def test_agrees_with_object_language_tests(self):
        crisp = parse_outer("Dt (p <-> ~-p)", L2)
        side = parse_outer("D (p -> ~-p)", L2)
        grid = [F(i, 6) for i in range(7)]
        for x in grid:
            for y in grid:
                v = {"p": TwoPoint(x, y)}
                label = classify(v["p"])
                assert (label == "classical") == \
                    (lt.eval(v, crisp) == POINT_TRUE)
                if label == "incomplete":
                    assert lt.eval(v, side).first == 1
                if label == "contradictory":
                    assert lt.eval(v, side).first == 0


class TestAlgebraicInvariants:
    def test_conflation_distributes_l2(self):
        rng = random.Random(29)
        a, b = OAtom(L2, "a"), OAtom(L2, "b")
        binary = [OImp, OFuse, OAnd, OOr, OPlus, OMinus]
        for _ in range(500):
            v = random_valuation(rng, ("a", "b"))
            w = {"a": conflate(v["a"]), "b": conflate(v["b"])}
            for op in binary:
                assert conflate(lt.eval(v, op(a, b))) == lt.eval(w, op(a, b))
            for op in (OSnot, ODelta):
                assert conflate(lt.eval(v, op(a))) == lt.eval(w, op(a))

    def test_dtop_is_a_conflation_fixpoint(self):
        rng = random.Random(31)
        f = ODtop(OAtom(L2, "a"))
        for _ in range(200):
            v = random_valuation(rng, ("a",))
            assert conflate(lt.eval(v, f)) == lt.eval(v, f)

    def test_involutions(self):
        rng = random.Random(37)
        for _ in range(200):
            v = random_valuation(rng, ("a",))
            x = v["a"]
            for logic in (L2, NL):
                nn = lt.eval(v, ONot(ONot(OAtom(logic, "a"))))
                assert nn == x
            ss2 = lt.eval(v, OSnot(OSnot(OAtom(L2, "a"))))
            assert ss2 == x
            ssn = lt.eval(v, OSnot(OSnot(OAtom(NL, "a"))))
            assert ssn.first == x.first

    def test_delta_and_dtop_images(self):
        rng = random.Random(41)
        corners = {tp(1, 0), tp(1, 1), tp(0, 0), tp(0, 1)}
        for _ in range(300):
            v = random_valuation(rng, ("a",))
            d = lt.eval(v, ODelta(OAtom(L2, "a")))
            assert d in corners
            t = lt.eval(v, ODtop(OAtom(L2, "a")))
            assert t in {POINT_TRUE, POINT_FALSE}

    def test_conflation_helper_matches_object_language(self):
        rng = random.Random(43)
        f = parse_outer("~-a", L2)
        for _ in range(100):
            v = random_valuation(rng, ("a",))
            assert lt.eval(v, f) == conflate(v["a"])


class TestAxioms:
    def test_l2_axioms_sound(self):
        report = check_axioms(L2, samples=1000)
        assert set(report) == {n for n, _ in axiom_suite(L2)} | \
            {"MP", "Nec", "Conf"}
        for name, entry in report.items():
            assert entry["violations"] == [], name
        assert report["MP"]["instances"] >= 100
        assert report["Nec"]["instances"] >= 100
        assert report["Conf"]["instances"] >= 100

    def test_nl_axioms_sound(self):
        report = check_axioms(NL, samples=1000)
        assert set(report) == {n for n, _ in axiom_suite(NL)} | {"MP"}
        for name, entry in report.items():
            assert entry["violations"] == [], name
        assert report["MP"]["instances"] >= 100

    def test_suites_cover_the_calculi(self):
        assert [n for n, _ in axiom_suite(L2)] == [
            "w", "sf", "waj", "co", "dn-", "-~", "K~-", "or",
            "D1", "D2", "D3", "D4", "D5", "-D"]
        assert [n for n, _ in axiom_suite(NL)] == [
            "w", "sf", "waj", "co", "dn-", "-~>", "or", "fuse",
            "meet", "-meet", "-join", "-~"]

    def test_dtop_delta_axioms(self):
        # Substituting Dt for D keeps D1, D2, D3 and D5 valid; D3 because
        # Dt is idempotent on its image {(1,0),(0,1)}.
        for text in ("Dt a | ~Dt a", "Dt a -> a", "Dt a -> Dt Dt a",
                     "Dt (a -> b) -> (Dt a -> Dt b)"):
            f = parse_outer(text, L2)
            assert falsify([], f, denominators=2, samples=200) is None, text

    def test_dtop_join_distribution_fails(self):
        # D4 does not survive the substitution: the lattice join of a glut
        # corner and a gap corner is the designated corner, but Dt of
        # neither disjunct is.
        v = {"a": tp(1, 1), "b": tp(0, 0)}
        join = lt.eval(v, parse_outer("a | b", L2))
        assert join == POINT_TRUE
        f = parse_outer("Dt (a | b) -> (Dt a | Dt b)", L2)
        assert lt.eval(v, f) != POINT_TRUE
        hit = falsify([], f, denominators=1, samples=0)
        assert hit is not None


class TestFalsify:
    def test_waj_instance_survives(self):
        waj = dict(axiom_suite(L2))["waj"]
        assert falsify([], waj) is None

    def test_plain_arrow_falsified(self):
        hit = falsify([], parse_outer("p -> q", L2))
        assert hit is not None
        v = {k: x for k, x in hit.items()}
        assert lt.eval(v, parse_outer("p -> q", L2)) != POINT_TRUE

    def test_conflation_rule(self):
        assert falsify([parse_outer("p", L2)], parse_outer("~-p", L2)) is None

    def test_premises_must_be_designated(self):
        # q does not follow from p, and the countervaluation keeps p at (1,0)
        hit = falsify([parse_outer("p", L2)], parse_outer("q", L2))
        assert hit is not None
        assert hit["p"] == POINT_TRUE
        assert hit["q"] != POINT_TRUE

    def test_nl_budget_search(self):
        tri = parse_outer("~p ~> -p", NL)
        hit = falsify([], tri)
        assert hit is not None
        assert hit["p"].first + hit["p"].second < 1
        # and the NL weakening axiom survives
        w = dict(axiom_suite(NL))["w"]
        assert falsify([], w, denominators=3) is None

    def test_mixed_logic_rejected(self):
        with pytest.raises(ValueError):
            falsify([parse_outer("p", L2)], parse_outer("p", NL))
        with pytest.raises(ValueError):
            falsify([], parse_outer("p", L2), logic=NL)

    def test_constant_only_formula(self):
        f = parse_outer("1 (-) 1", L2, with_constants=True)
        hit = falsify([], f)
        assert hit == {}
        g = parse_outer("1", L2, with_constants=True)
        assert falsify([], g) is None
