"""Linear-inequality statements about BD measures, decided exactly.

An atom bounds an integer combination of measure values, e.g.

    2*w+[p] - 1*w+[q] >= 1      (probability of p at least twice that of q,
                                 plus one; weights read the mass function)
    b+[p & -p] > 0              (strictly positive belief in a glut)

``w+``/``w-`` read the probability of the positive/negative extension of
the bracketed formula; ``b+``/``b-`` do the same for a belief function.
Atoms combine classically with ``and``, ``or``, ``not`` and ``->``.

Satisfiability reduces to exact rational linear programs: weight atoms are
linear in the masses of the 4^n canonical states, and belief atoms are
linear in the Möbius masses over the finitely many formula classes --
nonnegative Möbius mass characterizes belief functions, so feasibility over
those masses is equivalent to the axiomatic system with its exponential
family of monotonicity constraints.  Every SAT answer ships a concrete
model which is re-evaluated before being returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .bd_core import (
    BDSyntaxError,
    CapExceededError,
    Formula,
    Not,
    And,
    Or,
    class_entails,
    class_of,
    entails as bd_entails,
    fdnf,
    has_constants,
    lindenbaum_class_keys,
    parse_bd,
    positive_extension,
    random_formula,
    to_str,
    variables,
)
from .lattice_measures import ONE, Q, ZERO
from . import models
from .ratlp import LinearSystem, solve

RELATIONS = (">=", ">", "=", "<", "<=")
_FLIP = {">=": "<", ">": "<=", "<=": ">", "<": ">="}  # classical negation

WEIGHT_VAR_CAP = 3   # 4^3 = 64 mass unknowns
BELIEF_VAR_CAP = 2   # 166 formula classes


# ---------------------------------------------------------------------------
# syntax

@dataclass(frozen=True)
class WeightAtom:
    """sum of coeff * w±[formula]  REL  bound, with integer data.

    terms is a tuple of (coefficient, sign, formula) with sign '+' or '-'
    selecting the positive or negative extension.
    """

    terms: tuple
    relation: str
    bound: int
    kind = "w"

    def __post_init__(self):
        if not self.terms:
            raise ValueError("an atom needs at least one summand")
        if self.relation not in RELATIONS:
            raise ValueError("unknown relation %r" % (self.relation,))
        for coeff, sign, phi in self.terms:
            if not isinstance(coeff, int):
                raise TypeError("coefficients must be integers, got %r" % (coeff,))
            if sign not in ("+", "-"):
                raise ValueError("measure sign must be '+' or '-'")
            if not isinstance(phi, Formula):
                raise TypeError("argument must be a formula")
        if not isinstance(self.bound, int):
            raise TypeError("bound must be an integer, got %r" % (self.bound,))


@dataclass(frozen=True)
class BeliefAtom(WeightAtom):
    kind = "b"


@dataclass(frozen=True)
class Combo:
    """Classical combination of atoms; op is one of atom/not/and/or/imp."""

    op: str
    atom: object = None
    args: tuple = ()

    def __post_init__(self):
        if self.op == "atom":
            if not isinstance(self.atom, WeightAtom):
                raise TypeError("leaf must carry an atom")
        elif self.op == "not":
            if len(self.args) != 1:
                raise ValueError("negation takes one argument")
        elif self.op in ("and", "or", "imp"):
            if len(self.args) != 2:
                raise ValueError("%s takes two arguments" % self.op)
        else:
            raise ValueError("unknown combo op %r" % (self.op,))


def c_atom(a) -> Combo:
    return Combo("atom", atom=a)


def c_not(c: Combo) -> Combo:
    return Combo("not", args=(c,))


def c_and(a: Combo, b: Combo) -> Combo:
    return Combo("and", args=(a, b))


def c_or(a: Combo, b: Combo) -> Combo:
    return Combo("or", args=(a, b))


def c_imp(a: Combo, b: Combo) -> Combo:
    return Combo("imp", args=(a, b))


def combo_atoms(c: Combo):
    if c.op == "atom":
        yield c.atom
    else:
        for arg in c.args:
            yield from combo_atoms(arg)


def combo_kind(c: Combo) -> str:
    kinds = {a.kind for a in combo_atoms(c)}
    if len(kinds) != 1:
        raise ValueError("mixed atom kinds in one combination")
    return kinds.pop()


def combo_variables(c: Combo) -> tuple:
    out = set()
    for a in combo_atoms(c):
        for _, _, phi in a.terms:
            out.update(variables(phi))
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# parsing / printing

def _lex_combo(text):
    toks, i, n = [], 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("->", i):
            toks.append(("arrow", "->", i))
            i += 2
            continue
        if text.startswith(">=", i) or text.startswith("<=", i):
            toks.append(("rel", text[i:i + 2], i))
            i += 2
            continue
        if c in "><=":
            toks.append(("rel", c, i))
            i += 1
            continue
        if c in "+-*()":
            tag = {"+": "plus", "-": "minus", "*": "star",
                   "(": "lpar", ")": "rpar"}[c]
            toks.append((tag, c, i))
            i += 1
            continue
        if c == "[":
            j = text.find("]", i)
            if j < 0:
                raise BDSyntaxError("unterminated '['", i)
            toks.append(("inner", text[i + 1:j], i))
            i = j + 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), i))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and text[j].isalnum():
                j += 1
            word = text[i:j]
            i = j
            if word in ("and", "or", "not"):
                toks.append((word, word, i))
                continue
            if word in ("w", "b") and i < n and text[i] in "+-":
                toks.append(("meas", word + text[i], i))
                i += 1
                continue
            raise BDSyntaxError("unexpected word %r" % word, i)
        raise BDSyntaxError("unexpected character %r" % c, i)
    toks.append((None, None, n))
    return toks


def parse_combo(text: str, signature=None, with_constants: bool = False) -> Combo:
    """Parse a combination of measure atoms.

    Grammar (-> is right-associative and binds loosest; coefficients
    default to 1; bounds and leading coefficients may be negative):

        combo := orterm ('->' combo)?
        orterm := andterm ('or' andterm)*
        andterm := unary ('and' unary)*
        unary := 'not' unary | '(' combo ')' | atom
        atom := ['-'] term (('+'|'-') term)* REL ['-'] INT
        term := [INT '*'] ('w+'|'w-'|'b+'|'b-') '[' formula ']'
    """
    toks = _lex_combo(text)
    pos = [0]

    def peek():
        return toks[pos[0]][0]

    def take(tag=None):
        t = toks[pos[0]]
        if tag is not None and t[0] != tag:
            raise BDSyntaxError("expected %s, got %r" % (tag, t[1]), t[2])
        pos[0] += 1
        return t

    def combo():
        left = orterm()
        if peek() == "arrow":
            take()
            return c_imp(left, combo())
        return left

    def orterm():
        f = andterm()
        while peek() == "or":
            take()
            f = c_or(f, andterm())
        return f

    def andterm():
        f = unary()
        while peek() == "and":
            take()
            f = c_and(f, unary())
        return f

    def unary():
        if peek() == "not":
            take()
            return c_not(unary())
        if peek() == "lpar":
            take()
            f = combo()
            take("rpar")
            return f
        return atom()

    def term(sgn):
        coeff = 1
        if peek() == "int":
            coeff = take()[1]
            take("star")
        tag, meas, at = take("meas")
        inner = take("inner")[1]
        phi = parse_bd(inner, signature, with_constants)
        return (sgn * coeff, meas[1], phi), meas[0]

    def atom():
        sgn = 1
        if peek() == "minus":
            take()
            sgn = -1
        first, letter = term(sgn)
        terms = [first]
        while peek() in ("plus", "minus"):
            sgn = 1 if take()[0] == "plus" else -1
            nxt, letter2 = term(sgn)
            if letter2 != letter:
                raise BDSyntaxError("w and b mixed inside one atom",
                                    toks[pos[0]][2])
            terms.append(nxt)
        rel = take("rel")[1]
        bsgn = 1
        if peek() == "minus":
            take()
            bsgn = -1
        bound = bsgn * take("int")[1]
        cls = WeightAtom if letter == "w" else BeliefAtom
        return c_atom(cls(tuple(terms), rel, bound))

    out = combo()
    tag, val, at = take()
    if tag is not None:
        raise BDSyntaxError("trailing input %r" % (val,), at)
    return out


def atom_to_str(a: WeightAtom) -> str:
    parts = []
    for i, (coeff, sign, phi) in enumerate(a.terms):
        mag = abs(coeff)
        body = "%s%s[%s]" % (a.kind, sign, to_str(phi))
        if mag != 1:
            body = "%d*%s" % (mag, body)
        if i == 0:
            parts.append(("-" if coeff < 0 else "") + body)
        else:
            parts.append(("- " if coeff < 0 else "+ ") + body)
    return "%s %s %d" % (" ".join(parts), a.relation, a.bound)


_COMBO_PREC = {"imp": 0, "or": 1, "and": 2, "not": 3, "atom": 4}


def combo_to_str(c: Combo) -> str:
    def go(g, p):
        q = _COMBO_PREC[g.op]
        if g.op == "atom":
            s = atom_to_str(g.atom)
        elif g.op == "not":
            s = "not " + go(g.args[0], q)
        elif g.op == "imp":
            s = go(g.args[0], q + 1) + " -> " + go(g.args[1], q)
        else:
            word = {"and": "and", "or": "or"}[g.op]
            s = go(g.args[0], q) + " " + word + " " + go(g.args[1], q + 1)
        return "(" + s + ")" if q < p else s

    return go(c, 0)


# ---------------------------------------------------------------------------
# semantics

_MEASURE = {"w": "prob", "b": "bel"}


def _compare(lhs, rel, rhs) -> bool:
    if rel == ">=":
        return lhs >= rhs
    if rel == ">":
        return lhs > rhs
    if rel == "=":
        return lhs == rhs
    if rel == "<=":
        return lhs <= rhs
    return lhs < rhs


def eval_atom(M, a: WeightAtom) -> bool:
    total = ZERO
    for coeff, sign, phi in a.terms:
        total += coeff * models.measure_of(M, phi, _MEASURE[a.kind], sign)
    return _compare(total, a.relation, Q(a.bound))


def eval_combo(M, c: Combo) -> bool:
    if c.op == "atom":
        return eval_atom(M, c.atom)
    if c.op == "not":
        return not eval_combo(M, c.args[0])
    if c.op == "and":
        return eval_combo(M, c.args[0]) and eval_combo(M, c.args[1])
    if c.op == "or":
        return eval_combo(M, c.args[0]) or eval_combo(M, c.args[1])
    return (not eval_combo(M, c.args[0])) or eval_combo(M, c.args[1])


def eval_weight(M: models.ProbBDModel, alpha: Combo) -> bool:
    """Exact truth of a weight combination on a probabilistic model."""
    if combo_kind(alpha) != "w":
        raise ValueError("expected weight atoms")
    return eval_combo(M, alpha)


def eval_belief(M: models.DSModel, alpha: Combo) -> bool:
    """Exact truth of a belief combination on a mass-carrying model."""
    if combo_kind(alpha) != "b":
        raise ValueError("expected belief atoms")
    return eval_combo(M, alpha)


# ---------------------------------------------------------------------------
# normalization: DNF over atoms, + signs only, merged arguments

def _flip_atom(a: WeightAtom):
    """Classical negation of an atom, as a list of replacement atoms joined
    by 'or' (negating an equality splits it into two strict atoms)."""
    cls = type(a)
    if a.relation == "=":
        return [cls(a.terms, "<", a.bound), cls(a.terms, ">", a.bound)]
    return [cls(a.terms, _FLIP[a.relation], a.bound)]


def _positive_signs(a: WeightAtom):
    """w-/b- of phi becomes w+/b+ of -phi."""
    cls = type(a)
    terms = tuple((coeff, "+", phi if sign == "+" else Not(phi))
                  for coeff, sign, phi in a.terms)
    return cls(terms, a.relation, a.bound)


def _merge_terms(a: WeightAtom, canon=None):
    """Merge summands with the same argument, summing coefficients.

    canon, when given, maps each argument to a canonical representative
    first, so provably equivalent arguments merge too.  A merge that
    cancels completely keeps a zero-coefficient summand: the atom then
    reads 0 REL bound, which downstream code decides trivially.
    """
    cls = type(a)
    order = []
    sums = {}
    for coeff, sign, phi in a.terms:
        if canon is not None:
            phi = canon(phi)
        if phi not in sums:
            order.append(phi)
            sums[phi] = 0
        sums[phi] += coeff
    terms = tuple((sums[phi], "+", phi) for phi in order
                  if sums[phi] != 0)
    if not terms:
        terms = ((0, "+", order[0]),)
    return cls(terms, a.relation, a.bound)


def normalize_atoms(alpha: Combo, class_args: bool = False) -> Combo:
    """Disjunctive normal form over atoms, with atoms in positive form.

    Classical negation is absorbed into the relations (not t >= c becomes
    t < c; not t = c splits into t < c or t > c), minus-signed measures are
    rewritten through negated arguments, and summands with provably
    equivalent arguments merge with summed coefficients.  For belief atoms
    the arguments are additionally replaced by their full disjunctive
    normal forms over the literals of the whole combination, so equivalent
    arguments become syntactically identical; class_args=True instead
    merges them by Lindenbaum class while keeping the first-seen argument
    verbatim (the translations prefer readable arguments over syntactic
    normal forms).
    """
    kind = combo_kind(alpha)
    if kind == "b" and not class_args:
        lits = [(v, pol) for v in combo_variables(alpha) for pol in (True, False)]

        def canon(phi):
            return fdnf(phi, lits)
    else:
        seen = {}

        def canon(phi):
            key = class_of(phi)
            return seen.setdefault(key, phi)

    def leaf(a):
        branchable = [_merge_terms(_positive_signs(x), canon)
                      for x in _flip_atom(a)]
        out = c_atom(branchable[0])
        for x in branchable[1:]:
            out = c_or(out, c_atom(x))
        return out

    def push(c, neg):
        if c.op == "atom":
            if neg:
                return leaf(c.atom)
            return c_atom(_merge_terms(_positive_signs(c.atom), canon))
        if c.op == "not":
            return push(c.args[0], not neg)
        if c.op == "imp":
            l, r = c.args
            if neg:
                return c_and(push(l, False), push(r, True))
            return c_or(push(l, True), push(r, False))
        l, r = c.args
        join = c_or if (c.op == "or") != neg else c_and
        return join(push(l, neg), push(r, neg))

    def branches(c):
        if c.op == "atom":
            return [[c.atom]]
        if c.op == "or":
            return branches(c.args[0]) + branches(c.args[1])
        out = []
        for x in branches(c.args[0]):
            for y in branches(c.args[1]):
                merged = list(x)
                for a in y:
                    if a not in merged:
                        merged.append(a)
                out.append(merged)
        return out

    rebuilt = None
    for branch in branches(push(alpha, False)):
        node = c_atom(branch[0])
        for a in branch[1:]:
            node = c_and(node, c_atom(a))
        rebuilt = node if rebuilt is None else c_or(rebuilt, node)
    return rebuilt


def _normal_branches(alpha: Combo):
    """Branches of normalize_atoms(alpha) as lists of atoms."""
    out = []

    def walk(c, current):
        if c.op == "or":
            walk(c.args[0], current)
            walk(c.args[1], current)
        elif c.op == "and":
            walk(c.args[0], current)
            walk(c.args[1], current)
        else:
            current.append(c.atom)

    norm = normalize_atoms(alpha)
    if norm.op == "or":
        stack = [norm]
        tops = []
        while stack:
            node = stack.pop()
            if node.op == "or":
                stack.extend(node.args)
            else:
                tops.append(node)
        for node in reversed(tops):
            branch = []
            walk(node, branch)
            out.append(branch)
    else:
        branch = []
        walk(norm, branch)
        out.append(branch)
    return out


# ---------------------------------------------------------------------------
# decision procedures

@dataclass(frozen=True)
class Sat:
    model: object
    belief: dict = None

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Unsat:
    def __bool__(self):
        return False


def _atom_rows(atoms, columns, membership):
    """Linear rows for the atoms; columns are the LP unknowns, and
    membership(column, phi) says whether the column's mass counts towards
    the measure of phi."""
    rows = []
    for a in atoms:
        coeffs = [ZERO] * len(columns)
        for coeff, sign, phi in a.terms:
            if sign != "+":
                raise AssertionError("normalize before building rows")
            for j, col in enumerate(columns):
                if membership(col, phi):
                    coeffs[j] += coeff
        rows.append((coeffs, a.relation, Q(a.bound)))
    return rows


def sat_weight(alpha: Combo, var_cap: int = WEIGHT_VAR_CAP):
    """Sat(probabilistic model) or Unsat(), deciding the weight combination.

    Each disjunctive branch becomes one linear program over the masses of
    the canonical states for the occurring variables; the first feasible
    branch is materialized and re-evaluated before being returned.
    """
    if combo_kind(alpha) != "w":
        raise ValueError("expected weight atoms")
    sig = combo_variables(alpha)
    if len(sig) > var_cap:
        raise CapExceededError(
            "weight decision capped at %d variables, got %d" % (var_cap, len(sig)))
    M0 = models.canonical_model(sig)
    states = list(M0.states)
    names = tuple("m%d" % i for i in range(len(states)))
    extension = {}

    def membership(state, phi):
        if phi not in extension:
            extension[phi] = positive_extension(phi, states)
        return state in extension[phi]

    total_row = ([ONE] * len(states), "=", ONE)
    for branch in _normal_branches(alpha):
        rows = [total_row] + _atom_rows(branch, states, membership)
        res = solve(LinearSystem(names, rows), nonneg=True)
        if res:
            mass = {s: res.witness[names[i]] for i, s in enumerate(states)
                    if res.witness[names[i]] != 0}
            model = models.ProbBDModel(M0.states, M0.vplus, M0.vminus, mass)
            if not eval_weight(model, alpha):
                raise AssertionError("internal error: witness model fails re-evaluation")
            return Sat(model)
    return Unsat()


def sat_belief(alpha: Combo, normalized: bool = False,
               var_cap: int = BELIEF_VAR_CAP):
    """Sat(mass model, belief assignment) or Unsat() for belief atoms.

    Unknowns are nonnegative Möbius masses, one per formula class over the
    occurring variables; b+[phi] is the sum of the masses of the classes
    entailing phi.  Totals are <= 1 (beliefs need not reach 1 anywhere);
    normalized=True forces the total to 1 exactly.  On success the belief
    assignment is materialized as a mass-carrying model over the canonical
    states and re-evaluated.
    """
    if combo_kind(alpha) != "b":
        raise ValueError("expected belief atoms")
    for a in combo_atoms(alpha):
        for _, _, phi in a.terms:
            if has_constants(phi):
                raise ValueError("belief decision is for the constant-free language")
    sig = combo_variables(alpha)
    if len(sig) > var_cap:
        raise CapExceededError(
            "belief decision capped at %d variables, got %d" % (var_cap, len(sig)))
    if not sig:
        raise ValueError("belief decision needs at least one variable")
    keys = list(lindenbaum_class_keys(sig))
    names = tuple("c%d" % i for i in range(len(keys)))
    target = {}

    def membership(key, phi):
        if phi not in target:
            target[phi] = class_of(phi)
        return class_entails(key, target[phi])

    total_row = ([ONE] * len(keys), "=" if normalized else "<=", ONE)
    for branch in _normal_branches(alpha):
        rows = [total_row] + _atom_rows(branch, keys, membership)
        res = solve(LinearSystem(names, rows), nonneg=True)
        if res:
            mass = {k: res.witness[names[i]] for i, k in enumerate(keys)}
            bel = {k: sum((mass[j] for j in keys if class_entails(j, k)), ZERO)
                   for k in keys}
            model = models.model_from_belief(bel, sig)
            if not eval_belief(model, alpha):
                raise AssertionError("internal error: witness model fails re-evaluation")
            return Sat(model, belief=bel)
    return Unsat()


def entails(premises, alpha: Combo, kind: str) -> bool:
    """No model satisfies all premises while falsifying alpha."""
    if kind not in ("w", "b"):
        raise ValueError("kind must be 'w' or 'b'")
    everything = list(premises) + [alpha]
    for c in everything:
        if combo_kind(c) != kind:
            raise ValueError("mixed atom kinds")
    query = c_not(alpha)
    for p in reversed(list(premises)):
        query = c_and(p, query)
    res = sat_weight(query) if kind == "w" else sat_belief(query)
    return not res


# ---------------------------------------------------------------------------
# axiom suites over random models

def _axiom_instances(kind, phi, chi, psi):
    """Instances of the calculus axioms for the given formulas, as
    (name, combo) pairs; every one of them must hold on every model."""
    k = kind
    A = WeightAtom if k == "w" else BeliefAtom

    def at(terms, rel, bound):
        return c_atom(A(tuple(terms), rel, bound))

    out = [
        ("%s1" % k, at([(1, "+", phi)], ">=", 0)),
        ("%s1" % k, at([(1, "+", phi)], "<=", 1)),
        ("%s1" % k, at([(1, "-", phi)], ">=", 0)),
        ("%s1" % k, at([(1, "-", phi)], "<=", 1)),
        ("%s2" % k, at([(1, "-", phi), (-1, "+", Not(phi))], "=", 0)),
        ("%s2" % k, at([(1, "+", phi), (-1, "-", Not(phi))], "=", 0)),
    ]
    # inclusion-exclusion: equality for weights, one-sided for beliefs
    rel3 = "=" if k == "w" else ">="
    out.append(("%s3(2)" % k, at(
        [(1, "+", Or(phi, chi)), (-1, "+", phi), (-1, "+", chi),
         (1, "+", And(phi, chi))], rel3, 0)))
    out.append(("%s3(3)" % k, at(
        [(1, "+", Or(Or(phi, chi), psi)),
         (-1, "+", phi), (-1, "+", chi), (-1, "+", psi),
         (1, "+", And(phi, chi)), (1, "+", And(phi, psi)), (1, "+", And(chi, psi)),
         (-1, "+", And(And(phi, chi), psi))], rel3, 0)))
    # monotonicity along provable consequence; phi entails phi or chi
    out.append(("%s4" % k, at(
        [(1, "+", phi), (-1, "+", Or(phi, chi))], "<=", 0)))
    out.append(("%s4" % k, at(
        [(1, "-", phi), (-1, "-", Or(phi, chi))], ">=", 0)))
    if bd_entails(phi, chi):
        out.append(("%s4" % k, at([(1, "+", phi), (-1, "+", chi)], "<=", 0)))
        out.append(("%s4" % k, at([(1, "-", phi), (-1, "-", chi)], ">=", 0)))
    return out


def validate_axioms(kind: str = "w", samples: int = 100, rng=None) -> dict:
    """Evaluate the calculus axioms on random models and random instances.

    Returns {axiom name: {"instances": n, "violations": [...]}}; a sound
    implementation leaves every violation list empty.
    """
    if kind not in ("w", "b"):
        raise ValueError("kind must be 'w' or 'b'")
    rng = rng if rng is not None else random.Random(20250818)
    report = {}
    for _ in range(samples):
        sig = ("p", "q")[:rng.randint(1, 2)]
        if kind == "w":
            M = models.random_prob_model(sig, rng.randint(1, 4), rng)
        else:
            M = models.random_ds_model(sig, rng.randint(1, 4), rng)
        phi = random_formula(rng, sig, depth=2)
        chi = random_formula(rng, sig, depth=2)
        psi = random_formula(rng, sig, depth=1)
        for name, inst in _axiom_instances(kind, phi, chi, psi):
            slot = report.setdefault(name, {"instances": 0, "violations": []})
            slot["instances"] += 1
            if not eval_combo(M, inst):
                slot["violations"].append((combo_to_str(inst), models.model_to_json(M)))
    return report
