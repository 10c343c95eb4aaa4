import random
from fractions import Fraction as F

import pytest

from bdlogic.bd_core import (
    CapExceededError,
    Not,
    class_entails,
    class_of,
    formula_of_class,
    lindenbaum_class_keys,
    parse_bd,
)
from bdlogic.models import (
    BDModel,
    DSModel,
    DSplModel,
    ProbBDModel,
    canonical_model,
    check_nsprob_axioms,
    induced_belief,
    induced_nsprob,
    induced_plausibility,
    measure_of,
    model_from_belief,
    model_from_json,
    model_from_nsprob,
    model_from_plausibility,
    model_to_json,
    random_bd_model,
    random_ds_model,
    random_dspl_model,
    random_prob_model,
)

S_P = frozenset({("p", True)})
S_NP = frozenset({("p", False)})
S_B = frozenset({("p", True), ("p", False)})
S_N = frozenset()


class TestCanonicalModel:
    def test_four_states_in_order(self):
        M = canonical_model(["p"])
        assert M.states == (S_N, S_P, S_NP, S_B)

    def test_variable_extension(self):
        M = canonical_model(["p"])
        pos, neg = M.extensions(parse_bd("p"))
        assert pos == {S_P, S_B} and neg == {S_NP, S_B}

    def test_extensions_are_uppersets(self):
        M = canonical_model(["p", "q"])
        for key in lindenbaum_class_keys(["p", "q"]):
            pos, neg = M.extensions(formula_of_class(key))
            for ext in (pos, neg):
                for s in ext:
                    for t in M.states:
                        if s <= t:
                            assert t in ext

    def test_cap(self):
        with pytest.raises(CapExceededError):
            canonical_model(["p", "q", "r", "s"])


class TestMeasureOf:
    def test_negative_sign_is_negation(self):
        rng = random.Random(100)
        for _ in range(20):
            M = random_prob_model(["p", "q"], rng.randint(2, 6), rng)
            for text in ("p", "p & q", "-(p | -q)", "p & (q | -p)"):
                f = parse_bd(text)
                assert measure_of(M, f, "prob", "-") == measure_of(M, Not(f), "prob", "+")

    def test_vacuous_ds_mass(self):
        M0 = canonical_model(["p"])
        W = frozenset(M0.states)
        M = DSModel(M0.states, M0.vplus, M0.vminus, {W: F(1)})
        assert measure_of(M, parse_bd("p | -p | (p & -p)"), "bel", "+") == 0
        top = parse_bd("p | -p | T", with_constants=True)
        assert measure_of(M, top, "bel", "+") == 1

    def test_pl_is_complement_dual_of_its_mass(self):
        rng = random.Random(101)
        for _ in range(20):
            M = random_dspl_model(["p", "q"], 4, rng)
            W = frozenset(M.states)
            twin = DSModel(M.states, M.vplus, M.vminus, M.mass_pl)
            for text in ("p", "q & -p", "p | (q & -q)"):
                pos, _ = M.extensions(parse_bd(text))
                assert M.pl_set(pos) == 1 - twin.bel_set(W - pos)

    def test_missing_measure(self):
        M = random_bd_model(["p"], 3, random.Random(102))
        with pytest.raises(ValueError):
            measure_of(M, parse_bd("p"), "prob", "+")
        P = random_prob_model(["p"], 3, random.Random(103))
        with pytest.raises(ValueError):
            measure_of(P, parse_bd("p"), "bel", "+")


class TestNsprobAxioms:
    def test_induced_passes(self):
        rng = random.Random(104)
        for sig in (["p"], ["p", "q"]):
            for _ in range(5):
                M = random_prob_model(sig, rng.randint(1, 6), rng)
                assert check_nsprob_axioms(induced_nsprob(M), sig).ok

    def test_constant_one_passes(self):
        keys = lindenbaum_class_keys(["p"])
        rep = check_nsprob_axioms({k: 1 for k in keys}, ["p"])
        assert rep.ok  # p(a^b)=1 keeps inclusion-exclusion balanced

    def test_monotonicity_violation(self):
        p = {
            class_of(parse_bd("p & -p")): 1,
            class_of(parse_bd("p")): 0,
            class_of(parse_bd("-p")): 1,
            class_of(parse_bd("p | -p")): 1,
        }
        rep = check_nsprob_axioms(p, ["p"])
        assert not rep.ok and rep.violation[0] == "monotonicity"

    def test_requires_totality(self):
        with pytest.raises(ValueError):
            check_nsprob_axioms({class_of(parse_bd("p")): 1}, ["p"])


class TestModelFromNsprob:
    def test_hidden_model_round_trip(self):
        rng = random.Random(105)
        for sig in (["p"], ["p", "q"]):
            for _ in range(8):
                hidden = random_prob_model(sig, rng.randint(1, 6), rng)
                p = induced_nsprob(hidden)
                M = model_from_nsprob(p, sig)
                assert induced_nsprob(M) == p

    def test_all_zero_puts_mass_on_gap_state(self):
        keys = lindenbaum_class_keys(["p"])
        M = model_from_nsprob({k: 0 for k in keys}, ["p"])
        assert M.mass == {S_N: F(1)}

    def test_total_contradiction(self):
        p = {
            class_of(parse_bd("p")): 1,
            class_of(parse_bd("-p")): 1,
            class_of(parse_bd("p & -p")): 1,
            class_of(parse_bd("p | -p")): 1,
        }
        M = model_from_nsprob(p, ["p"])
        assert M.mass.get(S_B) == F(1)
        assert measure_of(M, parse_bd("p & -p"), "prob", "+") == 1

    def test_rejects_bad_input(self):
        p = {
            class_of(parse_bd("p & -p")): 1,
            class_of(parse_bd("p")): 0,
            class_of(parse_bd("-p")): 1,
            class_of(parse_bd("p | -p")): 1,
        }
        with pytest.raises(ValueError):
            model_from_nsprob(p, ["p"])

    def test_classical_states_make_prob_additive_under_negation(self):
        rng = random.Random(106)
        sig = ["p", "q"]
        states = tuple(range(5))
        for _ in range(5):
            vplus, vminus = {}, {}
            for v in sig:
                chosen = frozenset(s for s in states if rng.random() < 0.5)
                vplus[v] = chosen
                vminus[v] = frozenset(states) - chosen
            weights = [F(rng.randint(0, 4)) for _ in states]
            total = sum(weights) or F(1)
            mass = {s: w / total for s, w in zip(states, weights) if w}
            if not mass:
                mass = {states[0]: F(1)}
            M = ProbBDModel(states, vplus, vminus, mass)
            for key in lindenbaum_class_keys(sig):
                f = formula_of_class(key)
                assert measure_of(M, f, "prob", "+") + measure_of(M, Not(f), "prob", "+") == 1

    def test_glut_state_breaks_additivity(self):
        M = model_from_nsprob(
            {
                class_of(parse_bd("p")): 1,
                class_of(parse_bd("-p")): 1,
                class_of(parse_bd("p & -p")): 1,
                class_of(parse_bd("p | -p")): 1,
            },
            ["p"],
        )
        f = parse_bd("p")
        assert measure_of(M, f, "prob", "+") + measure_of(M, Not(f), "prob", "+") == 2


class TestBeliefCompleteness:
    def test_hidden_model_round_trip(self):
        rng = random.Random(107)
        for sig in (["p"], ["p", "q"]):
            for _ in range(6):
                hidden = random_ds_model(sig, rng.randint(2, 5), rng)
                bel = induced_belief(hidden)
                M = model_from_belief(bel, sig)
                assert induced_belief(M) == bel

    def test_vacuous_belief(self):
        keys = lindenbaum_class_keys(["p"])
        M = model_from_belief({k: 0 for k in keys}, ["p"])
        assert M.mass == {frozenset(M.states): F(1)}

    def test_induced_belief_monotone(self):
        rng = random.Random(108)
        hidden = random_ds_model(["p"], 4, rng)
        bel = induced_belief(hidden)
        keys = lindenbaum_class_keys(["p"])
        for a in keys:
            for b in keys:
                if class_entails(a, b):
                    assert bel[a] <= bel[b]
                    # sign '-' is antitone
                    fa, fb = formula_of_class(a), formula_of_class(b)
                    assert measure_of(hidden, fa, "bel", "-") >= \
                        measure_of(hidden, fb, "bel", "-")

    def test_rejects_non_belief(self):
        keys = lindenbaum_class_keys(["p"])
        fake = {k: F(1, 2) for k in keys}
        fake[class_of(parse_bd("p | -p"))] = F(1, 2)
        fake[class_of(parse_bd("p & -p"))] = F(0)  # 2-monotonicity breaks
        with pytest.raises(ValueError):
            model_from_belief(fake, ["p"])


class TestPlausibilityCompleteness:
    def test_hidden_model_round_trip(self):
        rng = random.Random(109)
        for sig in (["p"], ["p", "q"]):
            for _ in range(6):
                hidden = random_dspl_model(sig, rng.randint(2, 5), rng)
                pl = induced_plausibility(hidden)
                M = model_from_plausibility(pl, sig)
                assert induced_plausibility(M) == pl

    def test_constant_one(self):
        keys = lindenbaum_class_keys(["p"])
        M = model_from_plausibility({k: 1 for k in keys}, ["p"])
        assert M.mass_pl == {frozenset(M.states): F(1)}
        assert all(v == 1 for v in induced_plausibility(M).values())

    def test_rejects_non_plausibility(self):
        keys = lindenbaum_class_keys(["p"])
        bad = {k: 0 for k in keys}
        bad[class_of(parse_bd("p & -p"))] = F(1)  # dual belief check fails
        with pytest.raises(ValueError):
            model_from_plausibility(bad, ["p"])


class TestDSplModels:
    def one_glut_state(self, mass_pl=None):
        states = ("w",)
        vplus = {"p": frozenset("w")}
        vminus = {"p": frozenset("w")}
        m = {frozenset("w"): F(1)}
        return DSplModel(states, vplus, vminus, m, mass_pl or dict(m))

    def test_flag_rejects_bel_above_pl(self):
        states = ("a", "b")
        vplus = {"p": frozenset("a")}
        vminus = {"p": frozenset("b")}
        with pytest.raises(ValueError):
            DSplModel(states, vplus, vminus,
                      {frozenset("a"): F(1)}, {frozenset("b"): F(1)},
                      require_bel_leq_pl=True)

    def test_sampler_respects_flag(self):
        rng = random.Random(110)
        for _ in range(20):
            M = random_dspl_model(["p", "q"], 4, rng, require_bel_leq_pl=True)
            assert M.require_bel_leq_pl
            assert M.find_bel_gt_pl() is None
            # a true variable-level consequence of the flag: with
            # Y = W minus |p|-, pl(Y) unfolds to 1 - sum of m_pl inside |p|-
            W = frozenset(M.states)
            for v in M.signature:
                negext = M.extensions(parse_bd(v, [v]))[1]
                lhs = M.bel_set(W - negext)
                rhs = 1 - sum((w for X, w in M.mass_pl.items() if X <= negext), F(0))
                assert lhs <= rhs

    def test_glut_state_defeats_the_mixed_mass_inequality(self):
        # bel <= pl holds set-wise, yet sum of m_bel inside |p|+ exceeds
        # 1 - sum of m_pl inside |-p|+: the variable-level form needs the
        # conflation-image mass keys, not the raw complement-based ones
        M = self.one_glut_state()
        assert M.find_bel_gt_pl() is None
        pos, neg = M.extensions(parse_bd("p"))
        lhs = sum((w for X, w in M.mass.items() if X <= pos), F(0))
        rhs = 1 - sum((w for X, w in M.mass_pl.items() if X <= neg), F(0))
        assert lhs > rhs

    def test_shared_mass_always_admissible(self):
        rng = random.Random(111)
        for _ in range(30):
            base = random_ds_model(["p"], 4, rng)
            M = DSplModel(base.states, base.vplus, base.vminus,
                          base.mass, dict(base.mass), require_bel_leq_pl=True)
            assert M.find_bel_gt_pl() is None


class TestJson:
    def test_round_trip_measures(self):
        rng = random.Random(112)
        M = random_dspl_model(["p", "q"], 4, rng)
        M2 = model_from_json(model_to_json(M))
        assert isinstance(M2, DSplModel)
        for text in ("p", "p & -q", "-(p | q)"):
            f = parse_bd(text)
            assert measure_of(M, f, "bel", "+") == measure_of(M2, f, "bel", "+")
            assert measure_of(M, f, "pl", "-") == measure_of(M2, f, "pl", "-")

    def test_prob_round_trip(self):
        rng = random.Random(113)
        M = random_prob_model(["p"], 4, rng)
        M2 = model_from_json(model_to_json(M))
        assert isinstance(M2, ProbBDModel)
        p = parse_bd("p & -p")
        assert measure_of(M, p, "prob", "+") == measure_of(M2, p, "prob", "+")

    def test_canonical_state_labels(self):
        doc = model_to_json(canonical_model(["p"]))
        assert doc["states"] == ["", "p", "-p", "p,-p"]
        assert doc["vplus"]["p"] == [1, 3]
