"""Two-layered languages: measure modalities over BD events, Lukasiewicz outside.

Three dialects, differing in the modality set, the outer logic, and the model
class the atoms are read on:

  ==========  ==========  ======  =====================================
  tag         modalities  outer   atom semantics on a model
  ==========  ==========  ======  =====================================
  "pr"        Pr          L2      Pr phi  = (mu(|phi|+),  mu(|phi|-))
  "bel-l2"    B           L2      B phi   = (bel(|phi|+), bel(|phi|-))
  "bel-nl"    B, Pl       NL      B phi   = (bel(|phi|+), pl(|phi|-))
                                  Pl phi  = (pl(|phi|+),  bel(|phi|-))
  ==========  ==========  ======  =====================================

Inner formulas never contain modalities (no nesting), so a two-layered
formula is an outer formula whose atoms carry (modality, inner) payloads.
An outer formula is valid on a model when its value is designated in the
outer algebra: (1,0) for the L2 dialects, first coordinate 1 for "bel-nl".

The n-monotonicity of belief is expressed by the formulas

    gamma_1 = B p1,   gamma_{n+1} = gamma_n (+) (B p_{n+1} (-) gamma_n')
    alpha_n = gamma_n -> B(p1 | ... | pn)

where gamma_n' replaces every atom B psi of gamma_n by B(psi & p_{n+1});
dually for plausibility,

    sigma_1 = Pl p1,  sigma_{n+1} = (sigma_n (+) ~sigma_n'') (-) ~Pl p_{n+1}
    beta_n  = Pl(p1 & ... & pn) ~> sigma_n

with sigma_n'' replacing Pl psi by Pl(psi | p_{n+1}).  The first coordinate
of gamma_n equals the inclusion-exclusion term t_n on every mass model (the
Lukasiewicz truncations never clip there; asserted during evaluation), so
alpha_n is designated in the dialects whose designation only reads the first
coordinate.  In the "bel-l2" dialect designation also constrains the second
coordinate, where the analogous chain runs against 2-monotonicity: gamma_n's
second coordinate sits *below* bel(|p1 | ... | pn|-) rather than above it,
so alpha_n with n >= 2 fails on some mass models (see the frozen model in
the test suite).  The printed companion term s_n likewise disagrees with the
second coordinate in general; its plausibility reading, however, matches the
first coordinate of sigma_n exactly.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from . import bd_core, luk_two, models
from .bd_core import And, Or, Not, Var, Formula
from .luk_two import (
    L2, NL, OAtom, OImp, OWimp, OIff, OSiff, ONot, OSnot, OPlus, OMinus,
    OuterFormula, TwoPoint, outer_atoms, outer_to_str, payload_str,
)
from .models import BDModel, ProbBDModel, DSModel, DSplModel

PR = "pr"
BEL_L2 = "bel-l2"
BEL_NL = "bel-nl"

_TAGS = (PR, BEL_L2, BEL_NL)
_MODALITIES = {PR: ("Pr",), BEL_L2: ("B",), BEL_NL: ("B", "Pl")}
_OUTER_LOGIC = {PR: L2, BEL_L2: L2, BEL_NL: NL}
_MODEL_KIND = {PR: ProbBDModel, BEL_L2: DSModel, BEL_NL: DSplModel}

ALPHA_CAP = 5       # gamma_n doubles in size with each step
ALPHA_DEFAULT = 3   # suite default; 4 and 5 only on request


# ---------------------------------------------------------------------------
# the two-layered formula type

@dataclass(frozen=True)
class TwoLayerFormula:
    """An outer formula over modal atoms, tagged with its dialect.

    Construction checks that the outer connectives belong to the dialect's
    logic, that every atom is modal, and that the modalities are the
    dialect's own.  Nesting is impossible by construction: payloads hold
    plain BD formulas.
    """
    tag: str
    outer: OuterFormula

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError("unknown dialect tag %r" % (self.tag,))
        want = _OUTER_LOGIC[self.tag]
        if self.outer.logic != want:
            raise ValueError(
                "dialect %s reasons in %s, got a %s formula"
                % (self.tag, want, self.outer.logic))
        allowed = _MODALITIES[self.tag]
        for p in outer_atoms(self.outer):
            if isinstance(p, str):
                raise ValueError(
                    "plain atom %r: two-layered atoms must be modal" % (p,))
            if p[0] not in allowed:
                raise ValueError(
                    "modality %s is not part of dialect %s (allowed: %s)"
                    % (p[0], self.tag, "/".join(allowed)))

    def __str__(self):
        return outer_to_str(self.outer)


def parse_two_layer(text: str, tag: str) -> TwoLayerFormula:
    if tag not in _TAGS:
        raise ValueError("unknown dialect tag %r" % (tag,))
    return TwoLayerFormula(tag, luk_two.parse_outer(text, _OUTER_LOGIC[tag]))


def infer_tag(outer: OuterFormula) -> str:
    """Dialect of a bare outer formula, read off its logic and modalities."""
    mods = {p[0] for p in outer_atoms(outer) if not isinstance(p, str)}
    if outer.logic == NL:
        return BEL_NL
    if mods <= {"Pr"}:
        return PR
    if mods <= {"B"}:
        return BEL_L2
    raise ValueError("no L2 dialect carries modalities %s" % sorted(mods))


# ---------------------------------------------------------------------------
# evaluation on models

def modal_valuation(M: BDModel, payloads, tag: str) -> dict:
    """Value every (modality, inner) payload on M per the dialect table."""
    kind = _MODEL_KIND[tag]
    if not isinstance(M, kind):
        raise ValueError(
            "dialect %s needs a %s, got %s"
            % (tag, kind.__name__, type(M).__name__))
    out = {}
    for p in payloads:
        mod, phi = p
        pos, neg = M.extensions(phi)
        if tag == PR:
            out[p] = TwoPoint(M.mu(pos), M.mu(neg))
        elif tag == BEL_L2:
            out[p] = TwoPoint(M.bel_set(pos), M.bel_set(neg))
        elif mod == "B":
            out[p] = TwoPoint(M.bel_set(pos), M.pl_set(neg))
        else:
            out[p] = TwoPoint(M.pl_set(pos), M.bel_set(neg))
    return out


def eval_two_layer(M: BDModel, alpha: TwoLayerFormula) -> TwoPoint:
    v = modal_valuation(M, outer_atoms(alpha.outer), alpha.tag)
    return luk_two.eval(v, alpha.outer)


def designated(value: TwoPoint, tag: str) -> bool:
    return luk_two.designated(value, _OUTER_LOGIC[tag])


def defined_pl(M: DSModel, phi: Formula) -> TwoPoint:
    """The plausibility pair definable inside the B-only L2 dialect.

    pl+(phi) = 1 - bel(|phi|-) and pl-(phi) = 1 - bel(|phi|+), which is
    exactly the value of ~B[-phi]; `test_defined_pl` pins the equivalence.
    """
    pos, neg = M.extensions(phi)
    return TwoPoint(1 - M.bel_set(neg), 1 - M.bel_set(pos))


# ---------------------------------------------------------------------------
# the gamma/sigma monotonicity formulas

def _subst_modal(f: OuterFormula, fn) -> OuterFormula:
    """Rebuild f with every modal payload p replaced by fn(p)."""
    if f.kind == "atom":
        if isinstance(f.payload, str):
            return f
        return OAtom(f.logic, fn(f.payload))
    if not f.args:
        return f
    return OuterFormula(f.logic, f.kind, f.payload,
                        tuple(_subst_modal(a, fn) for a in f.args))


def _letters(n):
    return [Var("p%d" % i) for i in range(1, n + 1)]


def _check_n(n):
    if not (isinstance(n, int) and 1 <= n <= ALPHA_CAP):
        raise ValueError("n must be an integer in 1..%d, got %r" % (ALPHA_CAP, n))


def gamma_formula(n: int, logic: str = L2) -> OuterFormula:
    """gamma_n over atoms B p1 .. B pn, in the requested outer logic."""
    _check_n(n)
    ps = _letters(n)
    g = OAtom(logic, ("B", ps[0]))
    for p in ps[1:]:
        relativised = _subst_modal(g, lambda q: ("B", And(q[1], p)))
        g = OPlus(g, OMinus(OAtom(logic, ("B", p)), relativised))
    return g


def sigma_formula(n: int) -> OuterFormula:
    """sigma_n over atoms Pl p1 .. Pl pn (NL only)."""
    _check_n(n)
    ps = _letters(n)
    s = OAtom(NL, ("Pl", ps[0]))
    for p in ps[1:]:
        relativised = _subst_modal(s, lambda q: ("Pl", Or(q[1], p)))
        s = OMinus(OPlus(s, OSnot(relativised)), OSnot(OAtom(NL, ("Pl", p))))
    return s


def _big_or(fs):
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def _big_and(fs):
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def generate_monotonicity_axiom(kind: str, n: int, logic: str = None) -> TwoLayerFormula:
    """alpha_n (kind "bel_gamma") or beta_n (kind "pl_sigma"), 1 <= n <= 5.

    alpha_n = gamma_n -> B(p1 | ... | pn) lives in the B-only L2 dialect by
    default; pass logic="nl" for the weak-implication variant of the B/Pl
    dialect.  beta_n = Pl(p1 & ... & pn) ~> sigma_n is NL-only.
    """
    _check_n(n)
    ps = _letters(n)
    if kind == "bel_gamma":
        logic = L2 if logic is None else logic
        g = gamma_formula(n, logic)
        head = OAtom(logic, ("B", _big_or(ps)))
        arrow = OImp if logic == L2 else OWimp
        return TwoLayerFormula(BEL_L2 if logic == L2 else BEL_NL, arrow(g, head))
    if kind == "pl_sigma":
        if logic not in (None, NL):
            raise ValueError("sigma_n only exists in the NL dialect")
        s = sigma_formula(n)
        return TwoLayerFormula(
            BEL_NL, OWimp(OAtom(NL, ("Pl", _big_and(ps))), s))
    raise ValueError("kind must be 'bel_gamma' or 'pl_sigma', got %r" % (kind,))


# ---------------------------------------------------------------------------
# the t_n / s_n arithmetic terms
#
# Plain (untruncated) rational arithmetic mirroring gamma_n / sigma_n:
#   t_1 = m+(p1)        t_{n+1} = t_n + (m+(p_{n+1}) - t_n[phi := phi & p])
#   s_1 = m-(p1)        s_{n+1} = (s_n + 1 - s_n[phi := phi | p]) - (1 - m-(p_{n+1}))
# Leaves name a measure sign only; the measure itself (bel of the model, or
# pl) is chosen at evaluation time.

@dataclass(frozen=True)
class Term:
    op: str            # "leaf" | "add" | "sub" | "comp"
    sign: str = "+"    # leaves only
    phi: Formula = None
    args: tuple = ()

    def __str__(self):
        return term_to_str(self)


def _leaf(sign, phi):
    return Term("leaf", sign, phi)


def _subst_term(t: Term, fn) -> Term:
    if t.op == "leaf":
        return Term("leaf", t.sign, fn(t.phi))
    return Term(t.op, t.sign, None, tuple(_subst_term(a, fn) for a in t.args))


def term_to_str(t: Term, measure: str = "bel") -> str:
    if t.op == "leaf":
        return "%s%s[%s]" % (measure, t.sign, bd_core.to_str(t.phi))
    if t.op == "comp":
        return "(1 - %s)" % term_to_str(t.args[0], measure)
    sep = " + " if t.op == "add" else " - "
    return "(%s)" % sep.join(term_to_str(a, measure) for a in t.args)


def generate_inequality_terms(kind: str, n: int) -> Term:
    """The recursive t_n ("t") or s_n ("s") term over letters p1..pn."""
    _check_n(n)
    ps = _letters(n)
    if kind == "t":
        t = _leaf("+", ps[0])
        for p in ps[1:]:
            rel = _subst_term(t, lambda q: And(q, p))
            t = Term("add", args=(t, Term("sub", args=(_leaf("+", p), rel))))
        return t
    if kind == "s":
        s = _leaf("-", ps[0])
        for p in ps[1:]:
            rel = _subst_term(s, lambda q: Or(q, p))
            s = Term("sub", args=(
                Term("add", args=(s, Term("comp", args=(rel,)))),
                Term("comp", args=(_leaf("-", p),))))
        return s
    raise ValueError("kind must be 't' or 's', got %r" % (kind,))


def eval_term(M: DSModel, t: Term, measure: str = "bel",
              sign: str = None, assert_unit: bool = False) -> Fraction:
    """Evaluate a term on M with plain rational arithmetic (no truncation).

    measure picks bel or pl; sign, when given, overrides the leaf signs
    (the plausibility reading of s_n uses positive extensions).  With
    assert_unit every node value is checked to lie in [0,1] — the condition
    under which the Lukasiewicz evaluation of the matching formula cannot
    clip.  It holds for t_n on every mass model; it is *not* a theorem for
    the belief reading of s_n.
    """
    def go(u):
        if u.op == "leaf":
            val = models.measure_of(M, u.phi, measure, sign or u.sign)
        elif u.op == "comp":
            val = 1 - go(u.args[0])
        elif u.op == "add":
            val = go(u.args[0]) + go(u.args[1])
        else:
            val = go(u.args[0]) - go(u.args[1])
        if assert_unit:
            assert 0 <= val <= 1, \
                "node %s evaluates to %s outside [0,1]" % (term_to_str(u), val)
        return val

    return go(t)


def term_vs_gamma(M: DSModel, n: int) -> dict:
    """Both coordinates of gamma_n on M next to the t_n / s_n term values.

    The t-identity v1(gamma_n) = t_n is exact on every mass model, and for
    n <= 3 the evaluation asserts the no-clipping bounds node by node.  The
    s-column is reported without assertion: it coincides with v2(gamma_n)
    only when no truncation interferes (compare the keys "s" and "v2").
    """
    v = eval_two_layer(M, TwoLayerFormula(BEL_L2, gamma_formula(n)))
    t = eval_term(M, generate_inequality_terms("t", n), assert_unit=(n <= 3))
    s = eval_term(M, generate_inequality_terms("s", n))
    return {"v1": v.first, "t": t, "v2": v.second, "s": s,
            "t_matches": t == v.first, "s_matches": s == v.second}


def sigma_vs_pl_term(M: DSplModel, n: int) -> dict:
    """First coordinate of sigma_n against the plausibility reading of s_n.

    Reading the s_n tree with pl on positive extensions gives exactly
    v1(sigma_n): the +/-(1-..) steps never leave [0,1] because pl is
    2-alternating, so the NL truncations are inert.  Asserted for n <= 3.
    """
    v = eval_two_layer(M, TwoLayerFormula(BEL_NL, sigma_formula(n)))
    s = eval_term(M, generate_inequality_terms("s", n), measure="pl",
                  sign="+", assert_unit=(n <= 3))
    return {"v1": v.first, "s_pl": s, "matches": s == v.first}


# ---------------------------------------------------------------------------
# axiom suites

def _bd_subst(f: Formula, mapping: dict) -> Formula:
    """Substitute formulas for variables in an inner formula."""
    if f.kind == "var":
        return mapping.get(f.name, f)
    if not f.args:
        return f
    args = [_bd_subst(a, mapping) for a in f.args]
    if f.kind == "not":
        return Not(args[0])
    if f.kind == "and":
        return And(args[0], args[1])
    return Or(args[0], args[1])


def _schema_instances(signature, n):
    """Inner formulas substituted for the schema letters p1..pn.

    alpha_n/beta_n are axiom *schemata*; the suite instantiates them with a
    fixed tuple of formulas over the signature so they can be evaluated on
    models of that signature.
    """
    vs = [Var(v) for v in sorted(signature)]
    if len(vs) == 1:
        x = vs[0]
        pool = [x, Not(x), And(x, Not(x)), Or(x, Not(x)), x]
    else:
        x, y = vs[0], vs[1]
        pool = [x, y, And(x, y), Or(x, y), Not(x)]
    return {"p%d" % i: pool[i - 1] for i in range(1, n + 1)}


def _instantiate(tlf: TwoLayerFormula, mapping: dict) -> TwoLayerFormula:
    outer = _subst_modal(tlf.outer,
                         lambda p: (p[0], _bd_subst(p[1], mapping)))
    return TwoLayerFormula(tlf.tag, outer)


def _inst_label(mapping, n):
    return "[%s]" % ", ".join(
        bd_core.to_str(mapping["p%d" % i]) for i in range(1, n + 1))


def _pairs_for_binary_schemes(signature, keys):
    """Pairs fed to the binary axiom schemes (additivity).

    All class pairs for one variable; the full square over two variables
    (166^2) is out of evaluation range, so a fixed ten-formula pool stands
    in for it.
    """
    if len(keys) <= 8:
        reps = [bd_core.formula_of_class(k) for k in keys]
        return [(a, b) for a in reps for b in reps]
    x, y = (Var(v) for v in sorted(signature)[:2])
    pool = [x, y, Not(x), Not(y), And(x, y), Or(x, y), And(x, Not(x)),
            Or(x, Not(x)), And(x, Not(y)), And(y, Not(y))]
    return [(a, b) for a in pool for b in pool]


def modal_axiom_suite(tag: str, signature, n_cap: int = ALPHA_DEFAULT,
                      bel_leq_pl: bool = False,
                      with_constants: bool = False) -> list:
    """All modal axiom instances over the signature's formula classes.

    Returns (name, TwoLayerFormula) pairs:
      * monotonicity for every entailing pair of distinct Lindenbaum classes
        (strong implication in the B/Pl dialect, for both modalities);
      * the negation axiom per class (Pr-[.] <-> -Pr[.], B[-.] <-> -B[.],
        or B[-.] <=> -Pl[.]);
      * for "pr": the inclusion-exclusion axiom over class pairs (pool-backed
        above one variable, see _pairs_for_binary_schemes);
      * alpha_n (and beta_n for the B/Pl dialect) up to n_cap;
      * with bel_leq_pl, B[.] ~> Pl[.] per class — B/Pl dialect only;
      * with constants, the unit axioms Pr[T] / B[T] / Pl[T].
    """
    if tag not in _TAGS:
        raise ValueError("unknown dialect tag %r" % (tag,))
    _check_n(n_cap)
    logic = _OUTER_LOGIC[tag]
    keys = bd_core.lindenbaum_class_keys(signature, with_constants)
    reps = {k: bd_core.formula_of_class(k) for k in keys}
    out = []

    def atom(mod, phi):
        return OAtom(logic, (mod, phi))

    def emit(name, f):
        out.append((name, TwoLayerFormula(tag, f)))

    mono_mods = ("Pr",) if tag == PR else (("B",) if tag == BEL_L2 else ("B", "Pl"))
    arrow = OImp if logic == L2 else (lambda a, b: luk_two.OSimp(a, b))
    for a in keys:
        for b in keys:
            if a == b or not bd_core.class_entails(a, b):
                continue
            for mod in mono_mods:
                emit("mono:%s[%s => %s]" % (mod, bd_core.to_str(reps[a]),
                                            bd_core.to_str(reps[b])),
                     arrow(atom(mod, reps[a]), atom(mod, reps[b])))

    for k in keys:
        phi = reps[k]
        s = bd_core.to_str(phi)
        if tag == PR:
            emit("neg:%s" % s, OIff(atom("Pr", Not(phi)), ONot(atom("Pr", phi))))
        elif tag == BEL_L2:
            emit("neg:%s" % s, OIff(atom("B", Not(phi)), ONot(atom("B", phi))))
        else:
            emit("neg:%s" % s, OSiff(atom("B", Not(phi)), ONot(atom("Pl", phi))))

    if tag == PR:
        for phi, psi in _pairs_for_binary_schemes(signature, keys):
            emit("add:(%s, %s)" % (bd_core.to_str(phi), bd_core.to_str(psi)),
                 OIff(atom("Pr", Or(phi, psi)),
                      OPlus(OMinus(atom("Pr", phi), atom("Pr", And(phi, psi))),
                            atom("Pr", psi))))

    if tag in (BEL_L2, BEL_NL):
        for n in range(1, n_cap + 1):
            inst = _schema_instances(signature, n)
            out.append(("alpha%d%s" % (n, _inst_label(inst, n)),
                        _instantiate(
                            generate_monotonicity_axiom("bel_gamma", n, logic),
                            inst)))
    if tag == BEL_NL:
        for n in range(1, n_cap + 1):
            inst = _schema_instances(signature, n)
            out.append(("beta%d%s" % (n, _inst_label(inst, n)),
                        _instantiate(
                            generate_monotonicity_axiom("pl_sigma", n), inst)))
        if bel_leq_pl:
            for k in keys:
                phi = reps[k]
                emit("bel<=pl:%s" % bd_core.to_str(phi),
                     OWimp(atom("B", phi), atom("Pl", phi)))

    if with_constants:
        mod = "Pr" if tag == PR else "B"
        emit("unit:%s[T]" % mod, atom(mod, bd_core.TOP))
        if tag == BEL_NL:
            emit("unit:Pl[T]", atom("Pl", bd_core.TOP))

    return out


def default_sampler(tag: str, signature, n_states: int = 4,
                    bel_leq_pl: bool = False):
    """rng -> model, per the dialect's model class."""
    if tag == PR:
        return lambda rng: models.random_prob_model(signature, n_states, rng)
    if tag == BEL_L2:
        return lambda rng: models.random_ds_model(signature, n_states, rng)
    if tag == BEL_NL:
        return lambda rng: models.random_dspl_model(
            signature, n_states, rng, require_bel_leq_pl=bel_leq_pl)
    raise ValueError("unknown dialect tag %r" % (tag,))


def soundness_suite(tag: str, sampler, trials: int, suite=None,
                    signature=("p", "q"), rng=None, n_cap: int = ALPHA_DEFAULT,
                    bel_leq_pl: bool = False, max_violations: int = 20) -> dict:
    """Evaluate a modal axiom suite on sampled models; collect violations.

    The modal atom values are computed once per model and shared across the
    suite (the axioms heavily reuse class representatives).  Violations
    record the axiom name, the value, and the model, up to max_violations;
    the counters keep running regardless.
    """
    rng = rng or random.Random(20250818)
    if sampler is None:
        sampler = default_sampler(tag, signature, bel_leq_pl=bel_leq_pl)
    if suite is None:
        suite = modal_axiom_suite(tag, signature, n_cap=n_cap,
                                  bel_leq_pl=bel_leq_pl)
    payloads = set()
    for _, tlf in suite:
        payloads.update(outer_atoms(tlf.outer))
    payloads = sorted(payloads, key=luk_two._payload_key)

    report = {"tag": tag, "axioms": len(suite), "trials": trials,
              "checked": 0, "violation_count": 0, "violations": [],
              "by_axiom": {}}
    for _ in range(trials):
        M = sampler(rng)
        v = modal_valuation(M, payloads, tag)
        for name, tlf in suite:
            val = luk_two.eval(v, tlf.outer)
            report["checked"] += 1
            if not designated(val, tag):
                report["violation_count"] += 1
                report["by_axiom"][name] = report["by_axiom"].get(name, 0) + 1
                if len(report["violations"]) < max_violations:
                    report["violations"].append(
                        {"axiom": name, "value": str(val),
                         "model": models.model_to_json(M)})
    return report
