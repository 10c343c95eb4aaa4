"""Belnap–Dunn frames with uncertainty on top.

A BD model is a state set W with two independent valuations: v+ (states
supporting a variable) and v- (states anti-supporting it).  Extensions
|phi|+ and |phi|- are computed set-wise.  On top of a model live

  * probabilistic models — a classical probability on W (held as singleton
    masses), read off formulas via p+(phi) = mu(|phi|+);
  * DS models — a normalized mass on P(W) with m(empty)=0, read off via
    bel+(phi) = bel(|phi|+), bel(Y) = sum of m(X) over X subset of Y;
  * DS_pl models — a second mass inducing a plausibility via
    pl(Y) = 1 - sum of m_pl(X) over X subset of the complement of Y,
    optionally constrained by bel(Y) <= pl(Y) everywhere.

The canonical model over a signature has W = all subsets of the literal set;
extensions there are uppersets of the inclusion order.  The completeness
constructions go the other way: from a measure on formula classes satisfying
the right axioms to a model on canonical states inducing it.  All of them
hinge on the canonical-state order and are exact (Fractions only).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import bd_core
from .bd_core import (
    CapExceededError,
    Formula,
    all_states,
    big_and,
    class_neg,
    class_of,
    formula_of_class,
    lindenbaum_class_keys,
    lit_key,
    neg_states,
    Var,
    Not,
)
from .lattice_measures import (
    CheckReport,
    MassFunction,
    Q,
    ZERO,
    ONE,
    class_lattice,
    is_belief_function,
    mobius_transform,
)

CANONICAL_CAP = 3  # 4^3 = 64 canonical states


# ---------------------------------------------------------------------------
# model types

@dataclass(frozen=True)
class BDModel:
    states: tuple
    vplus: dict
    vminus: dict

    def __post_init__(self):
        if not self.states:
            raise ValueError("empty state set")
        if set(self.vplus) != set(self.vminus):
            raise ValueError("valuations disagree on the signature")
        W = set(self.states)
        for v in self.vplus:
            if not (set(self.vplus[v]) <= W and set(self.vminus[v]) <= W):
                raise ValueError("valuation leaves the state set")

    @property
    def signature(self):
        return tuple(sorted(self.vplus))

    def extensions(self, phi: Formula):
        """(|phi|+, |phi|-) as frozensets of states, computed set-wise."""
        W = frozenset(self.states)

        def go(f):
            k = f.kind
            if k == "var":
                return frozenset(self.vplus[f.name]), frozenset(self.vminus[f.name])
            if k == "top":
                return W, frozenset()
            if k == "bot":
                return frozenset(), W
            if k == "not":
                p, n = go(f.args[0])
                return n, p
            ap, an = go(f.args[0])
            bp, bn = go(f.args[1])
            if k == "and":
                return ap & bp, an | bn
            return ap | bp, an & bn

        return go(phi)


@dataclass(frozen=True)
class ProbBDModel(BDModel):
    mass: dict = field(default_factory=dict)  # state -> Fraction, total 1

    def __post_init__(self):
        super().__post_init__()
        W = set(self.states)
        total = ZERO
        for s, v in self.mass.items():
            if s not in W:
                raise ValueError("mass on an unknown state")
            if Q(v) < 0:
                raise ValueError("negative mass")
            total += Q(v)
        if total != 1:
            raise ValueError("probability mass must total 1")

    def mu(self, Y) -> Fraction:
        return sum((Q(v) for s, v in self.mass.items() if s in Y), ZERO)


@dataclass(frozen=True)
class DSModel(BDModel):
    mass: dict = field(default_factory=dict)  # frozenset(states) -> Fraction

    def __post_init__(self):
        super().__post_init__()
        _check_set_mass(self.mass, set(self.states), "mass")

    def bel_set(self, Y) -> Fraction:
        Y = frozenset(Y)
        return sum((Q(v) for X, v in self.mass.items() if X <= Y), ZERO)


@dataclass(frozen=True)
class DSplModel(DSModel):
    mass_pl: dict = field(default_factory=dict)
    require_bel_leq_pl: bool = False

    def __post_init__(self):
        super().__post_init__()
        _check_set_mass(self.mass_pl, set(self.states), "mass_pl")
        if self.require_bel_leq_pl:
            bad = self.find_bel_gt_pl()
            if bad is not None:
                raise ValueError(
                    "bel(Y) > pl(Y) at Y=%r: %s > %s" % bad)

    def pl_set(self, Y) -> Fraction:
        comp = frozenset(self.states) - frozenset(Y)
        return ONE - sum((Q(v) for X, v in self.mass_pl.items() if X <= comp), ZERO)

    def find_bel_gt_pl(self, rng=None, samples=200):
        """First Y with bel(Y) > pl(Y); exhaustive for |W| <= 4, sampled above."""
        states = list(self.states)
        if len(states) <= 4:
            candidates = (frozenset(c) for r in range(len(states) + 1)
                          for c in itertools.combinations(states, r))
        else:
            rng = rng or random.Random(0)
            candidates = (frozenset(s for s in states if rng.random() < 0.5)
                          for _ in range(samples))
        for Y in candidates:
            b, p = self.bel_set(Y), self.pl_set(Y)
            if b > p:
                return (Y, b, p)
        return None


def _check_set_mass(mass, W, what):
    total = ZERO
    for X, v in mass.items():
        if not isinstance(X, frozenset) or not X <= W:
            raise ValueError("%s keyed by a non-subset" % what)
        if not X and Q(v) != 0:
            raise ValueError("%s puts weight on the empty set" % what)
        if Q(v) < 0:
            raise ValueError("negative %s" % what)
        total += Q(v)
    if total != 1:
        raise ValueError("%s must total 1" % what)


# ---------------------------------------------------------------------------
# canonical model and measures of formulas

def canonical_model(signature) -> BDModel:
    """W = all subsets of the literal set, in (size, literal) order;
    v+(p) = states containing p, v-(p) = states containing -p."""
    sig = tuple(sorted(signature))
    if len(sig) > CANONICAL_CAP:
        raise CapExceededError("canonical model capped at %d variables" % CANONICAL_CAP)
    W = tuple(all_states(sig))
    vplus = {p: frozenset(s for s in W if (p, True) in s) for p in sig}
    vminus = {p: frozenset(s for s in W if (p, False) in s) for p in sig}
    return BDModel(W, vplus, vminus)


def measure_of(M: BDModel, phi: Formula, kind: str = "prob", sign: str = "+") -> Fraction:
    """Apply the model's measure to |phi|+ (sign '+') or |phi|- (sign '-')."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    pos, neg = M.extensions(phi)
    ext = pos if sign == "+" else neg
    if kind == "prob":
        if not isinstance(M, ProbBDModel):
            raise ValueError("model carries no probability")
        return M.mu(ext)
    if kind == "bel":
        if not isinstance(M, DSModel):
            raise ValueError("model carries no belief mass")
        return M.bel_set(ext)
    if kind == "pl":
        if not isinstance(M, DSplModel):
            raise ValueError("model carries no plausibility mass")
        return M.pl_set(ext)
    raise ValueError("kind must be prob, bel or pl")


# ---------------------------------------------------------------------------
# non-standard probabilities on the formula algebra

def check_nsprob_axioms(p: dict, signature, with_constants=False) -> CheckReport:
    """p maps every formula class (clause-antichain key) to a rational.

    Verifies (i) 0 <= p <= 1, (ii) monotonicity under consequence,
    (iii) the inclusion–exclusion identity
    p(a v b) = p(a) + p(b) - p(a ^ b), over the whole enumerated algebra.
    """
    keys = lindenbaum_class_keys(signature, with_constants)
    missing = [k for k in keys if k not in p]
    if missing:
        raise ValueError("p is not total on the algebra (%d classes missing)"
                         % len(missing))
    for k in keys:
        if not (0 <= Q(p[k]) <= 1):
            return CheckReport(False, ("range", k, Q(p[k])), "value out of [0,1]")
    for a in keys:
        for b in keys:
            if bd_core.class_entails(a, b) and Q(p[a]) > Q(p[b]):
                return CheckReport(
                    False, ("monotonicity", a, b, Q(p[a]), Q(p[b])),
                    "monotonicity fails")
    for a, b in itertools.combinations(keys, 2):
        lhs = Q(p[bd_core.class_join(a, b)])
        rhs = Q(p[a]) + Q(p[b]) - Q(p[bd_core.class_meet(a, b)])
        if lhs != rhs:
            return CheckReport(
                False, ("inclusion-exclusion", a, b, lhs, rhs),
                "inclusion-exclusion fails")
    return CheckReport(True)


def induced_nsprob(M: ProbBDModel, with_constants=False) -> dict:
    """p(class) = mu(|representative|+), for every enumerated class."""
    out = {}
    for k in lindenbaum_class_keys(M.signature, with_constants):
        out[k] = measure_of(M, formula_of_class(k), "prob", "+")
    return out


def model_from_nsprob(p: dict, signature) -> ProbBDModel:
    """Completeness construction: singleton masses on the canonical model,
    defined top-down from the full literal set,

        m({s}) = p(conj of s) - sum of m({s'}) over strict supersets s',

    with the remainder put on the empty-literal state.  Reproduces p on every
    class: mu(|phi|+) = p(phi)."""
    rep = check_nsprob_axioms(p, signature)
    if not rep.ok:
        raise ValueError("input fails the probability axioms: %s" % (rep.violation,))
    sig = tuple(sorted(signature))
    M0 = canonical_model(sig)
    states = sorted(M0.states, key=len, reverse=True)
    mass = {}
    for s in states:
        if not s:
            continue
        clause = class_of(big_and(
            Var(v) if positive else Not(Var(v))
            for v, positive in sorted(s, key=lit_key)))
        extra = sum((mass[t] for t in mass if s < t), ZERO)
        mass[s] = Q(p[clause]) - extra
        if mass[s] < 0:
            raise ValueError("inconsistent input: negative mass at %r" % (s,))
    mass[frozenset()] = ONE - sum(mass.values(), ZERO)
    if mass[frozenset()] < 0:
        raise ValueError("inconsistent input: masses exceed 1")
    return ProbBDModel(M0.states, M0.vplus, M0.vminus,
                       {s: v for s, v in mass.items() if v != 0 or not s})


# ---------------------------------------------------------------------------
# belief / plausibility completeness constructions

def induced_belief(M: DSModel, with_constants=False) -> dict:
    return {k: measure_of(M, formula_of_class(k), "bel", "+")
            for k in lindenbaum_class_keys(M.signature, with_constants)}


def induced_plausibility(M: DSplModel, with_constants=False) -> dict:
    return {k: measure_of(M, formula_of_class(k), "pl", "+")
            for k in lindenbaum_class_keys(M.signature, with_constants)}


def model_from_belief(bel: dict, signature) -> DSModel:
    """Mass = Möbius transform of bel on the class algebra, placed on the
    positive extensions (uppersets of the canonical model), zero-padded;
    the residual 1 - total goes to the full state set.  Then
    bel'(|phi|+) = bel(phi) for every class."""
    sig = tuple(sorted(signature))
    lat = class_lattice(sig)
    ok, witness = is_belief_function(bel, lat)
    if not ok:
        raise ValueError("input is not a belief function: %r" % (witness,))
    g = mobius_transform(bel, lat)
    M0 = canonical_model(sig)
    mass = {}
    for k, v in g.items():
        if v == 0:
            continue
        upper, _ = M0.extensions(formula_of_class(k))
        mass[upper] = mass.get(upper, ZERO) + v
    residual = ONE - sum(mass.values(), ZERO)
    if residual:
        full = frozenset(M0.states)
        mass[full] = mass.get(full, ZERO) + residual
    return DSModel(M0.states, M0.vplus, M0.vminus, mass)


def model_from_plausibility(pl: dict, signature) -> DSplModel:
    """Dual construction: bel_pl(x) = 1 - pl(neg x) is a belief function on
    the class algebra; its Möbius mass is placed on the *conflation images*
    of the uppersets — equivalently on W minus the negative extensions —
    which is exactly what the complement-based plausibility reading needs:
    pl'(|phi|+) = pl(phi) for every class.  The belief half of the result is
    vacuous (all mass on W), which keeps bel <= pl available."""
    sig = tuple(sorted(signature))
    lat = class_lattice(sig)
    bel_pl = {k: ONE - Q(pl[class_neg(k)]) for k in lat.elements}
    ok, witness = is_belief_function(bel_pl, lat)
    if not ok:
        raise ValueError("input is not a plausibility function (dual check): %r"
                         % (witness,))
    g = mobius_transform(bel_pl, lat)
    M0 = canonical_model(sig)
    W = frozenset(M0.states)
    mass_pl = {}
    for k, v in g.items():
        if v == 0:
            continue
        _, negext = M0.extensions(formula_of_class(k))
        target = W - negext
        mass_pl[target] = mass_pl.get(target, ZERO) + v
    residual = ONE - sum(mass_pl.values(), ZERO)
    if residual:
        mass_pl[W] = mass_pl.get(W, ZERO) + residual
    return DSplModel(M0.states, M0.vplus, M0.vminus,
                     {W: ONE}, mass_pl, require_bel_leq_pl=True)


# ---------------------------------------------------------------------------
# random model generation (seeded, rational-valued)

def _random_subset(items, rng):
    return frozenset(x for x in items if rng.random() < 0.5)


def random_bd_model(signature, n_states, rng) -> BDModel:
    states = tuple(range(n_states))
    vplus = {p: _random_subset(states, rng) for p in signature}
    vminus = {p: _random_subset(states, rng) for p in signature}
    return BDModel(states, vplus, vminus)


def _random_weights(n, rng, denom=16):
    cuts = sorted(rng.randint(0, denom) for _ in range(n - 1))
    parts = []
    prev = 0
    for c in cuts + [denom]:
        parts.append(Fraction(c - prev, denom))
        prev = c
    return parts


def random_prob_model(signature, n_states, rng) -> ProbBDModel:
    M = random_bd_model(signature, n_states, rng)
    weights = _random_weights(len(M.states), rng)
    mass = {s: w for s, w in zip(M.states, weights) if w}
    return ProbBDModel(M.states, M.vplus, M.vminus, mass)


def _random_set_mass(states, rng, max_focal=4):
    focal = []
    while len(focal) < rng.randint(1, max_focal):
        X = _random_subset(states, rng)
        if X:
            focal.append(X)
    weights = _random_weights(len(focal), rng)
    mass = {}
    for X, w in zip(focal, weights):
        if w:
            mass[X] = mass.get(X, ZERO) + w
    if not mass:
        mass[frozenset(states)] = ONE
    # weights may sum short of 1 after dropping zeros; park the rest on W
    short = ONE - sum(mass.values(), ZERO)
    if short:
        full = frozenset(states)
        mass[full] = mass.get(full, ZERO) + short
    return mass


def random_ds_model(signature, n_states, rng) -> DSModel:
    M = random_bd_model(signature, n_states, rng)
    return DSModel(M.states, M.vplus, M.vminus, _random_set_mass(M.states, rng))


def random_dspl_model(signature, n_states, rng, require_bel_leq_pl=False) -> DSplModel:
    """When the bel <= pl constraint is requested, half the draws reuse the
    belief mass for the plausibility side (always admissible); the other half
    draw an independent mass and reject until the constraint holds."""
    M = random_bd_model(signature, n_states, rng)
    mass = _random_set_mass(M.states, rng)
    if not require_bel_leq_pl:
        return DSplModel(M.states, M.vplus, M.vminus, mass,
                         _random_set_mass(M.states, rng))
    if rng.random() < 0.5:
        return DSplModel(M.states, M.vplus, M.vminus, mass, dict(mass), True)
    for _ in range(60):
        cand = _random_set_mass(M.states, rng)
        trial = DSplModel(M.states, M.vplus, M.vminus, mass, cand)
        if trial.find_bel_gt_pl() is None:
            return DSplModel(M.states, M.vplus, M.vminus, mass, cand, True)
    return DSplModel(M.states, M.vplus, M.vminus, mass, dict(mass), True)


# ---------------------------------------------------------------------------
# JSON serialization

def _state_label(s):
    if isinstance(s, frozenset):
        return ",".join(("" if positive else "-") + v
                        for v, positive in sorted(s, key=lit_key))
    return str(s)


def model_to_json(M: BDModel) -> dict:
    idx = {s: i for i, s in enumerate(M.states)}
    out = {
        "states": [_state_label(s) for s in M.states],
        "vplus": {p: sorted(idx[s] for s in M.vplus[p]) for p in M.vplus},
        "vminus": {p: sorted(idx[s] for s in M.vminus[p]) for p in M.vminus},
    }
    if isinstance(M, ProbBDModel):
        out["mass"] = {str(idx[s]): str(v) for s, v in sorted(
            M.mass.items(), key=lambda kv: idx[kv[0]])}
    elif isinstance(M, DSModel):
        out["mass"] = [{"set": sorted(idx[s] for s in X), "value": str(v)}
                       for X, v in sorted(M.mass.items(),
                                          key=lambda kv: sorted(idx[s] for s in kv[0]))]
    if isinstance(M, DSplModel):
        out["mass_pl"] = [{"set": sorted(idx[s] for s in X), "value": str(v)}
                          for X, v in sorted(M.mass_pl.items(),
                                             key=lambda kv: sorted(idx[s] for s in kv[0]))]
        out["require_bel_leq_pl"] = M.require_bel_leq_pl
    return out


def model_from_json(doc: dict) -> BDModel:
    states = tuple(doc["states"])
    vplus = {p: frozenset(states[i] for i in idxs) for p, idxs in doc["vplus"].items()}
    vminus = {p: frozenset(states[i] for i in idxs) for p, idxs in doc["vminus"].items()}
    mass = doc.get("mass")
    if mass is None:
        return BDModel(states, vplus, vminus)
    if isinstance(mass, dict):
        return ProbBDModel(states, vplus, vminus,
                           {states[int(i)]: Q(v) for i, v in mass.items()})
    dmass = {frozenset(states[i] for i in e["set"]): Q(e["value"]) for e in mass}
    if "mass_pl" in doc:
        pmass = {frozenset(states[i] for i in e["set"]): Q(e["value"])
                 for e in doc["mass_pl"]}
        return DSplModel(states, vplus, vminus, dmass, pmass,
                         doc.get("require_bel_leq_pl", False))
    return DSModel(states, vplus, vminus, dmass)
