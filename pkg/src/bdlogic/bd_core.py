"""Syntax, semantics, entailment and normal forms for Belnap–Dunn logic.

The inner (event) language is

    phi ::= p | T | F | -phi | phi & phi | phi | phi

where ``-`` is De Morgan negation and ``T``/``F`` are the constants of the
extended language (written BD* below); the constant-free fragment is plain BD.

Semantics is two-dimensional: a state w carries *independent* positive and
negative supports, so a variable may be supported, anti-supported, both, or
neither.  A state over a signature is therefore just a subset of the literal
set Lit = {p, -p : p in signature}, and the support clauses are

    w |=+ p      iff  p in w            w |=- p      iff  -p in w
    w |=+ -phi   iff  w |=- phi         w |=- -phi   iff  w |=+ phi
    w |=+ a & b  iff  both |=+          w |=- a & b  iff  either |=-
    w |=+ a | b  iff  either |=+        w |=- a | b  iff  both |=-
    w |=+ T always, never |=- T;        never |=+ F, w |=- F always.

Entailment is two-sided:  phi |- chi  iff at every state, positive support of
phi forces positive support of chi AND negative support of chi forces negative
support of phi.  Both conditions are checked exhaustively over the 4^|Var|
states (|Var| <= 8).

Equivalence classes of formulas form a free De Morgan algebra.  We key a class
by its irredundant DNF, i.e. the antichain of subset-minimal conjunctive
clauses (a clause is a set of literals).  Under this keying

    bottom = no clauses,   top = the empty clause,
    join   = union of antichains, pruned,
    meet   = pairwise clause unions, pruned,
    neg    = pick one literal per clause, negate, re-prune (De Morgan dual),

and A |- B iff every clause of A contains some clause of B.  The class count
is 4 for one variable and 166 for two; for three it is already 7,828,352
(Dedekind-type growth), so enumeration is capped at two variables.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

# ---------------------------------------------------------------------------
# errors

class BDError(Exception):
    """Base class for inner-logic errors."""


class BDSyntaxError(BDError):
    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else "%s (at position %d)" % (msg, pos))
        self.pos = pos


class UnknownVariableError(BDError):
    pass


class CapExceededError(BDError):
    pass


ENTAILS_CAP = 8          # 4^8 = 65536 states per check
LINDENBAUM_CAP = 2       # 166 classes; three variables would need 7,828,352


# ---------------------------------------------------------------------------
# formulas (interned, immutable)

_VAR, _TOP, _BOT, _NOT, _AND, _OR = "var", "top", "bot", "not", "and", "or"

_intern: dict = {}


class Formula:
    """An interned inner-logic formula; compare/hash by identity."""

    __slots__ = ("kind", "name", "args")

    def __new__(cls, kind, name=None, args=()):
        key = (kind, name, tuple(id(a) for a in args))
        hit = _intern.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "args", tuple(args))
        _intern[key] = self
        return self

    def __setattr__(self, *_):
        raise AttributeError("formulas are immutable")

    def __repr__(self):
        return "Formula(%s)" % to_str(self)

    def __str__(self):
        return to_str(self)


TOP = Formula(_TOP)
BOT = Formula(_BOT)


def Var(name: str) -> Formula:
    return Formula(_VAR, name)


def Not(f: Formula) -> Formula:
    return Formula(_NOT, args=(f,))


def And(f: Formula, g: Formula) -> Formula:
    return Formula(_AND, args=(f, g))


def Or(f: Formula, g: Formula) -> Formula:
    return Formula(_OR, args=(f, g))


def big_and(fs):
    fs = list(fs)
    if not fs:
        return TOP
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def big_or(fs):
    fs = list(fs)
    if not fs:
        return BOT
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def variables(f: Formula) -> tuple:
    """Sorted tuple of variable names occurring in f."""
    seen = set()

    def walk(g):
        if g.kind == _VAR:
            seen.add(g.name)
        for a in g.args:
            walk(a)

    walk(f)
    return tuple(sorted(seen))


def has_constants(f: Formula) -> bool:
    if f.kind in (_TOP, _BOT):
        return True
    return any(has_constants(a) for a in f.args)


# ---------------------------------------------------------------------------
# parsing / printing
#
# formula := term ('|' term)* ; term := factor ('&' factor)* ;
# factor := '-' factor | atom | '(' formula ')' ; atom := IDENT | 'T' | 'F'

def _lex(text):
    toks, i, n = [], 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "&|-()":
            toks.append((c, i))
            i += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append((text[i:j], i))
            i = j
            continue
        raise BDSyntaxError("unexpected character %r" % c, i)
    toks.append((None, n))
    return toks


def parse_bd(text: str, signature=None, with_constants: bool = False) -> Formula:
    """Parse the inner grammar.  `-` binds tightest, then `&`, then `|`.

    If a signature (iterable of names) is given, variables outside it are
    rejected.  The constants T / F are rejected unless with_constants is set.
    """
    toks = _lex(text)
    sig = None if signature is None else set(signature)
    pos = [0]

    def peek():
        return toks[pos[0]][0]

    def take():
        t = toks[pos[0]]
        pos[0] += 1
        return t

    def formula():
        f = term()
        while peek() == "|":
            take()
            f = Or(f, term())
        return f

    def term():
        f = factor()
        while peek() == "&":
            take()
            f = And(f, factor())
        return f

    def factor():
        t, at = take()
        if t == "-":
            return Not(factor())
        if t == "(":
            f = formula()
            t2, at2 = take()
            if t2 != ")":
                raise BDSyntaxError("expected ')'", at2)
            return f
        if t in ("T", "F"):
            if not with_constants:
                raise BDSyntaxError("constant %r outside the extended language" % t, at)
            return TOP if t == "T" else BOT
        if t is not None and (t[0].isalpha() or t[0] == "_"):
            if sig is not None and t not in sig:
                raise UnknownVariableError("unknown variable %r" % t)
            return Var(t)
        raise BDSyntaxError("expected a formula", at)

    f = formula()
    t, at = take()
    if t is not None:
        raise BDSyntaxError("trailing input %r" % t, at)
    return f


_PREC = {_OR: 1, _AND: 2, _NOT: 3, _VAR: 4, _TOP: 4, _BOT: 4}


def to_str(f: Formula) -> str:
    """Minimal-parentheses printer; `&` binds tighter than `|`."""

    def go(g, parent):
        p = _PREC[g.kind]
        if g.kind == _VAR:
            s = g.name
        elif g.kind == _TOP:
            s = "T"
        elif g.kind == _BOT:
            s = "F"
        elif g.kind == _NOT:
            s = "-" + go(g.args[0], _PREC[_NOT])
        elif g.kind == _AND:
            # left-associative reading: right children of equal strength
            # keep their parentheses so printing inverts parsing exactly
            s = go(g.args[0], p) + " & " + go(g.args[1], p + 1)
        else:
            s = go(g.args[0], p) + " | " + go(g.args[1], p + 1)
        if p < parent:
            return "(" + s + ")"
        return s

    return go(f, 0)


# ---------------------------------------------------------------------------
# states and support

# a literal is (name, positive?); a state is a frozenset of literals

def lit_key(l):
    return (l[0], 0 if l[1] else 1)


def neg_lit(l):
    return (l[0], not l[1])


def state_key(s):
    return (len(s), tuple(sorted(lit_key(l) for l in s)))


def all_states(signature):
    """All 4^n states over the signature, ordered by (size, literal order).

    Over {p} this yields  {} , {p} , {-p} , {p,-p}  in that order.
    """
    sig = list(signature)
    lits = [(v, pol) for v in sig for pol in (True, False)]
    out = []
    for r in range(len(lits) + 1):
        for combo in itertools.combinations(lits, r):
            out.append(frozenset(combo))
    return sorted(out, key=state_key)


def random_formula(rng, signature, depth: int = 3, with_constants: bool = False) -> Formula:
    """Random formula tree over the signature; leaves are variables (plus
    T/F when allowed), inner nodes -, &, | with the binary connectives
    favoured.  Drawn with the caller's rng so suites stay reproducible."""
    leaves = [Var(v) for v in signature]
    if with_constants:
        leaves.extend([TOP, BOT])
    if not leaves:
        raise ValueError("empty signature")
    if depth <= 0 or rng.random() < 0.25:
        return rng.choice(leaves)
    roll = rng.random()
    if roll < 0.3:
        return Not(random_formula(rng, signature, depth - 1, with_constants))
    a = random_formula(rng, signature, depth - 1, with_constants)
    b = random_formula(rng, signature, depth - 1, with_constants)
    return And(a, b) if roll < 0.65 else Or(a, b)


def support(f: Formula, state) -> tuple:
    """(positively supported?, negatively supported?) of f at the state."""
    k = f.kind
    if k == _VAR:
        return ((f.name, True) in state, (f.name, False) in state)
    if k == _TOP:
        return (True, False)
    if k == _BOT:
        return (False, True)
    if k == _NOT:
        p, n = support(f.args[0], state)
        return (n, p)
    a_p, a_n = support(f.args[0], state)
    b_p, b_n = support(f.args[1], state)
    if k == _AND:
        return (a_p and b_p, a_n or b_n)
    return (a_p or b_p, a_n and b_n)


# four-valued reading, used as the independent oracle for `support`

NOT4 = {"T": "F", "B": "B", "N": "N", "F": "T"}
AND4 = {}
OR4 = {}
_to_pair = {"T": (1, 0), "B": (1, 1), "N": (0, 0), "F": (0, 1)}
_from_pair = {v: k for k, v in _to_pair.items()}
for _x in "TBNF":
    for _y in "TBNF":
        (xp, xn), (yp, yn) = _to_pair[_x], _to_pair[_y]
        AND4[(_x, _y)] = _from_pair[(xp & yp, xn | yn)]
        OR4[(_x, _y)] = _from_pair[(xp | yp, xn & yn)]


def value4(f: Formula, assignment: dict) -> str:
    """Evaluate under a map var -> one of 'T','B','N','F'."""
    k = f.kind
    if k == _VAR:
        return assignment[f.name]
    if k == _TOP:
        return "T"
    if k == _BOT:
        return "F"
    if k == _NOT:
        return NOT4[value4(f.args[0], assignment)]
    a = value4(f.args[0], assignment)
    b = value4(f.args[1], assignment)
    return AND4[(a, b)] if k == _AND else OR4[(a, b)]


def entails(phi: Formula, chi: Formula, signature=None) -> bool:
    """Two-sided consequence, exhaustive over single states.

    phi |- chi  iff at every state w over the joint signature:
    (w |=+ phi implies w |=+ chi) and (w |=- chi implies w |=- phi).
    """
    ok, _ = entails_with_witness(phi, chi, signature)
    return ok


def entails_with_witness(phi: Formula, chi: Formula, signature=None):
    """Like `entails`, but on failure also returns (state, side)."""
    if signature is None:
        signature = sorted(set(variables(phi)) | set(variables(chi)))
    if len(signature) > ENTAILS_CAP:
        raise CapExceededError("entailment capped at %d variables" % ENTAILS_CAP)
    for w in all_states(signature):
        pp, pn = support(phi, w)
        cp, cn = support(chi, w)
        if pp and not cp:
            return False, (w, "+")
        if cn and not pn:
            return False, (w, "-")
    return True, None


def equivalent(phi: Formula, chi: Formula) -> bool:
    return entails(phi, chi) and entails(chi, phi)


# ---------------------------------------------------------------------------
# normal forms

def nnf(f: Formula) -> Formula:
    """Push negation to atoms; -T and -F are rewritten away."""

    def pos(g):
        k = g.kind
        if k in (_VAR, _TOP, _BOT):
            return g
        if k == _NOT:
            return neg(g.args[0])
        op = And if k == _AND else Or
        return op(pos(g.args[0]), pos(g.args[1]))

    def neg(g):
        k = g.kind
        if k == _VAR:
            return Not(g)
        if k == _TOP:
            return BOT
        if k == _BOT:
            return TOP
        if k == _NOT:
            return pos(g.args[0])
        op = Or if k == _AND else And
        return op(neg(g.args[0]), neg(g.args[1]))

    return pos(f)


def _clause_sets(f):
    """DNF clause sets of an NNF formula.

    Returns a set of frozensets of literals; the empty clause stands for T
    and the empty set of clauses for F (constants absorb in the usual way:
    a clause mentioning F dies, T drops out of clauses, a T-disjunct makes
    the whole DNF {empty clause} only after pruning — kept verbatim here).
    """
    k = f.kind
    if k == _VAR:
        return {frozenset([(f.name, True)])}
    if k == _TOP:
        return {frozenset()}
    if k == _BOT:
        return set()
    if k == _NOT:
        g = f.args[0]
        if g.kind != _VAR:
            raise ValueError("not in NNF")
        return {frozenset([(g.name, False)])}
    left = _clause_sets(f.args[0])
    right = _clause_sets(f.args[1])
    if k == _OR:
        return left | right
    return {c | d for c in left for d in right}


def clause_order_key(c):
    return (len(c), tuple(sorted(lit_key(l) for l in c)))


def prune_clauses(clauses):
    """Keep only subset-minimal clauses (an antichain)."""
    cs = set(clauses)
    return frozenset(c for c in cs if not any(d < c for d in cs))


def formula_of_clause(c) -> Formula:
    if not c:
        return TOP
    lits = sorted(c, key=lit_key)
    return big_and(Var(v) if pos else Not(Var(v)) for v, pos in lits)


def formula_of_clauses(clauses) -> Formula:
    clauses = sorted(clauses, key=clause_order_key)
    if not clauses:
        return BOT
    return big_or(formula_of_clause(c) for c in clauses)


def dnf_clauses(f: Formula):
    return _clause_sets(nnf(f))


def _cnf_clause_sets(f):
    # dual: sets of disjunctive clauses; empty clause = F, no clauses = T
    k = f.kind
    if k == _VAR:
        return {frozenset([(f.name, True)])}
    if k == _TOP:
        return set()
    if k == _BOT:
        return {frozenset()}
    if k == _NOT:
        g = f.args[0]
        if g.kind != _VAR:
            raise ValueError("not in NNF")
        return {frozenset([(g.name, False)])}
    left = _cnf_clause_sets(f.args[0])
    right = _cnf_clause_sets(f.args[1])
    if k == _AND:
        return left | right
    return {c | d for c in left for d in right}


def normalize(f: Formula, form: str) -> Formula:
    """Rewrite f into 'nnf', 'dnf', 'cnf' or 'idnf' (canonical clause order)."""
    form = form.lower()
    if form == "nnf":
        return nnf(f)
    if form == "dnf":
        return formula_of_clauses(dnf_clauses(f))
    if form == "idnf":
        return formula_of_clauses(prune_clauses(dnf_clauses(f)))
    if form == "cnf":
        clauses = sorted(_cnf_clause_sets(nnf(f)), key=clause_order_key)
        if not clauses:
            return TOP
        disjuncts = []
        for c in clauses:
            if not c:
                return BOT
            lits = sorted(c, key=lit_key)
            disjuncts.append(big_or(Var(v) if pos else Not(Var(v)) for v, pos in lits))
        return big_and(disjuncts)
    raise ValueError("unknown normal form %r" % form)


def fdnf(f: Formula, X, with_constants: bool = False) -> Formula:
    """The X-full DNF: the disjunction of *all* conjunctive X-clauses that
    entail f, in canonical (size, literal-order) clause order.

    X must be a finite neg-closed literal set covering f's variables.  The
    clause over all of X always entails f whenever any X-clause does, so it
    closes the disjunction.  In the extended language the constants count as
    standalone clauses: F entails everything and opens the disjunction, T is
    included exactly when T |- f.
    """
    X = frozenset(X)
    vars_x = {v for v, _ in X}
    for v in vars_x:
        if (v, True) not in X or (v, False) not in X:
            raise ValueError("literal set is not neg-closed")
    if not set(variables(f)) <= vars_x:
        raise ValueError("literal set misses a variable of the formula")
    sig = sorted(vars_x)
    parts = []
    if with_constants or has_constants(f):
        if entails(BOT, f, sig):
            parts.append(BOT)
        if entails(TOP, f, sig):
            parts.append(TOP)
    lits = sorted(X, key=lit_key)
    clauses = []
    for r in range(1, len(lits) + 1):
        for combo in itertools.combinations(lits, r):
            c = frozenset(combo)
            if entails(formula_of_clause(c), f, sig):
                clauses.append(c)
    parts.extend(formula_of_clause(c) for c in sorted(clauses, key=clause_order_key))
    if not parts:
        raise ValueError("no X-clause entails the formula")
    return big_or(parts)


# ---------------------------------------------------------------------------
# Lindenbaum classes as antichains of clauses
#
# key: frozenset of frozensets of literals; bottom = frozenset(),
# top = frozenset({frozenset()}).  Constant-free classes contain at least one
# clause and never the empty one.

BOT_CLASS = frozenset()
TOP_CLASS = frozenset([frozenset()])


def class_of(f: Formula):
    """Canonical class key of a formula (its irredundant DNF antichain)."""
    return prune_clauses(dnf_clauses(f))


def formula_of_class(key) -> Formula:
    return formula_of_clauses(key)


def class_entails(a, b) -> bool:
    # every clause of a must strengthen some clause of b
    return all(any(d <= c for d in b) for c in a)


def class_join(a, b):
    return prune_clauses(a | b)


def class_meet(a, b):
    return prune_clauses({c | d for c in a for d in b})


def class_neg(a):
    """De Morgan dual: one negated literal from each clause, all combinations."""
    out = {frozenset()}
    for c in a:
        out = {d | {neg_lit(l)} for d in out for l in c}
    return prune_clauses(out)


def class_key_sort(key):
    return tuple(sorted((clause_order_key(c) for c in key)))


def enumerate_lindenbaum(signature, with_constants: bool = False):
    """Canonical representatives of all formula classes over the signature.

    Classes are antichains of conjunctive clauses; counts: one variable -> 4
    (p, -p, p&-p, p|-p), two -> 166, plus T and F when constants are allowed.
    Three variables would give 7,828,352 classes, which is out of enumeration
    range, hence the hard cap.
    """
    keys = lindenbaum_class_keys(signature, with_constants)
    return [formula_of_class(k) for k in keys]


def lindenbaum_class_keys(signature, with_constants: bool = False):
    sig = tuple(sorted(signature))
    if len(sig) > LINDENBAUM_CAP:
        raise CapExceededError(
            "class enumeration capped at %d variables (3 variables already "
            "have 7828352 classes)" % LINDENBAUM_CAP
        )
    return _lind_keys(sig, bool(with_constants))


@lru_cache(maxsize=None)
def _lind_keys(sig, with_constants):
    lits = [(v, pol) for v in sig for pol in (True, False)]
    clauses = []
    for r in range(1, len(lits) + 1):
        for combo in itertools.combinations(lits, r):
            clauses.append(frozenset(combo))
    clauses.sort(key=clause_order_key)
    n = len(clauses)
    above = [[j for j in range(n) if i != j and clauses[i] < clauses[j]] for i in range(n)]
    below = [[j for j in range(n) if i != j and clauses[j] < clauses[i]] for i in range(n)]
    out = []

    def grow(start, chosen, blocked):
        if chosen:
            out.append(frozenset(clauses[i] for i in chosen))
        for i in range(start, n):
            if i in blocked:
                continue
            grow(i + 1, chosen + [i], blocked | set(above[i]) | set(below[i]))

    grow(0, [], set())
    keys = sorted(out, key=class_key_sort)
    if with_constants:
        keys = [BOT_CLASS, TOP_CLASS] + keys
    return tuple(keys)


# ---------------------------------------------------------------------------
# 4-literals and the De Morgan negation on sets of states

def lit4_of_state(state, signature) -> dict:
    """Classify each variable at the state: T (only p), B (both), N (neither),
    F (only -p)."""
    out = {}
    for v in signature:
        pos = (v, True) in state
        neg = (v, False) in state
        out[v] = "T" if pos and not neg else "B" if pos and neg else "F" if neg else "N"
    return out


def conflate_state(state, signature):
    """Swap the gluts and gaps of a state (T and F stay put, B <-> N)."""
    out = set()
    for v in signature:
        if (v, False) not in state:
            out.add((v, True))
        if (v, True) not in state:
            out.add((v, False))
    return frozenset(out)


def neg_states(A, signature):
    """De Morgan negation on sets of canonical states.

    The operation is the complement of the conflation image:
    s is in neg(A) iff conflate(s) is not in A.  It is an antitone
    involution on the powerset of states satisfying De Morgan's laws, it
    swaps the empty set with the full state set, and on definable sets it
    agrees with formula negation: neg({s : s |=+ phi}) = {s : s |=+ -phi}.
    (Writing A as a disjunction of total four-valued state descriptions and
    pushing negation through with the four-valued truth tables normalizes to
    the same set.)
    """
    A = frozenset(A)
    sig = list(signature)
    return frozenset(s for s in all_states(sig) if conflate_state(s, sig) not in A)


def positive_extension(f: Formula, states) -> frozenset:
    return frozenset(s for s in states if support(f, s)[0])


def negative_extension(f: Formula, states) -> frozenset:
    return frozenset(s for s in states if support(f, s)[1])
