"""Translations between the inequality calculi and the two-layered logics.

The forward direction maps a weight or belief combination into the crisp
fragment of the two-layered language.  A normalized atom

    a1*m+[phi_1] + ... + an*m+[phi_n]  >=  c

becomes  Dt beta(M[phi_1], ..., M[phi_n])  where M is Pr (weights) or B
(beliefs), Dt is the definedness guard, and beta is an outer formula whose
pointwise function is the clamp  (a1*x1 + ... + an*xn - c + 1)#  with
t# = min(1, max(0, t)).  The guard makes every translated formula
two-valued -- (1,0) or (0,1) -- on every model.  The remaining relations
reduce classically:  t <= c  is  -t >= -c,  and the strict forms are
guarded negations of the weak ones.

The backward direction computes a piecewise-linear normal form

    f_alpha = max over blocks of min over leaves

for the first coordinate of a modality-free formula over
{~, ->, (+), (-), &., &, |, D, Dt}, with leaves that are either clamped
integer affine maps or {0,1}-valued affine threshold indicators, and reads
each leaf back as the inequality atom stating that the leaf takes value 1:

    clamp(sum a_i x_i + c) = 1   <=>   sum a_i * m+[phi_i]  >=  1 - c
    [sum a_i x_i + c >  0]       <=>   sum a_i * m+[phi_i]  >   -c
    [sum a_i x_i + c >= 0]       <=>   sum a_i * m+[phi_i]  >=  -c

Both coordinates of the two-layered semantics are linear in the measure,
so designation of a translated formula is itself a classical combination
of inequalities: the plain one on the positive extensions plus a
conflation companion, the same inequality read on the dual measure
(sum (-a_i) * m+[-phi_i] >= c - sum a_i).  equisat_harness uses this to
decide the Lukasiewicz side of a consequence exactly with the same linear
machinery that decides the inequality side, and to transfer witness models
between the two readings.

One caveat, verified by the tests rather than hidden: the definedness
guard is genuinely two-dimensional, and the piecewise-linear form reads it
one-dimensionally (as the first-coordinate indicator, the same reading as
D).  That is exact on conflation-fixpoint valuations (second coordinate
1 - first) and for D everywhere; designation bookkeeping on arbitrary
models goes through the conflation companions instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import ineq_calculus as ineq
from . import luk_two
from . import models
from . import two_layered
from .bd_core import CapExceededError, Not
from .luk_two import (
    L2,
    OAnd,
    OAtom,
    OBot,
    ODelta,
    ODtop,
    OFuse,
    OOr,
    OPlus,
    OSnot,
    OTop,
    OuterFormula,
    outer_atoms,
    payload_str,
)

Q = Fraction
_Q0 = Q(0)
_Q1 = Q(1)

#: soft cap on max-of-min blocks; the lattice distributions are exponential
#: in principle and this module only ever needs desk-sized formulas.
BLOCK_CAP = 4096


# ---------------------------------------------------------------------------
# piecewise-linear forms


@dataclass(frozen=True)
class ClampedAffine:
    """min(1, max(0, sum(a_i * x_i) + c)) with integer data."""

    a: tuple
    c: int

    def __post_init__(self):
        if not all(isinstance(k, int) for k in self.a):
            raise TypeError("coefficients must be integers, got %r" % (self.a,))
        if not isinstance(self.c, int):
            raise TypeError("constant must be an integer, got %r" % (self.c,))


@dataclass(frozen=True)
class StrictIndicator:
    """{0,1}-valued threshold  [sum(a_i * x_i) + c > 0]  (or >= 0 when weak).

    The weak variant shows up as the complement of a strict one and as D of
    a clamped leaf; both read back as inequality atoms.
    """

    a: tuple
    c: int
    strict: bool = True

    def __post_init__(self):
        if not all(isinstance(k, int) for k in self.a):
            raise TypeError("coefficients must be integers, got %r" % (self.a,))
        if not isinstance(self.c, int):
            raise TypeError("constant must be an integer, got %r" % (self.c,))


@dataclass(frozen=True)
class PwlForm:
    """Max over blocks of min over leaves, all leaves of one arity."""

    blocks: tuple

    def __post_init__(self):
        if not self.blocks or any(not b for b in self.blocks):
            raise ValueError("a form needs at least one leaf in every block")
        arities = {len(leaf.a) for b in self.blocks for leaf in b}
        if len(arities) != 1:
            raise ValueError("mixed leaf arities %s" % sorted(arities))

    @property
    def arity(self) -> int:
        return len(self.blocks[0][0].a)


def eval_leaf(leaf, xs) -> Fraction:
    total = Q(leaf.c)
    for coeff, x in zip(leaf.a, xs):
        if coeff:
            total += coeff * x
    if isinstance(leaf, StrictIndicator):
        hit = total > 0 if leaf.strict else total >= 0
        return _Q1 if hit else _Q0
    if total <= 0:
        return _Q0
    if total >= 1:
        return _Q1
    return total


def eval_pwl(P: PwlForm, xs) -> Fraction:
    """Exact value of the form at a point of the unit cube."""
    xs = [x if isinstance(x, Fraction) else Q(x) for x in xs]
    if len(xs) != P.arity:
        raise ValueError("expected %d coordinates, got %d" % (P.arity, len(xs)))
    return max(min(eval_leaf(leaf, xs) for leaf in block) for block in P.blocks)


# --- leaf algebra ----------------------------------------------------------

def _leaf_key(leaf):
    return (isinstance(leaf, StrictIndicator),
            getattr(leaf, "strict", False), leaf.a, leaf.c)


def _neg_leaf(leaf):
    # 1 - clamp(f) = clamp(1 - f);  1 - [f > 0] = [-f >= 0]  and dually
    if isinstance(leaf, StrictIndicator):
        return StrictIndicator(tuple(-k for k in leaf.a), -leaf.c,
                               strict=not leaf.strict)
    return ClampedAffine(tuple(-k for k in leaf.a), 1 - leaf.c)


def _delta_leaf(leaf):
    # [clamp(f) = 1] = [f - 1 >= 0]; indicators are their own D-image
    if isinstance(leaf, StrictIndicator):
        return leaf
    return StrictIndicator(leaf.a, leaf.c - 1, strict=False)


def _leaf_const(leaf):
    """0 or 1 when the leaf is constant on the cube, else None."""
    if any(leaf.a):
        return None
    if isinstance(leaf, StrictIndicator):
        hit = leaf.c > 0 if leaf.strict else leaf.c >= 0
        return 1 if hit else 0
    return 1 if leaf.c >= 1 else 0


def _aff_leq(f: ClampedAffine, g: ClampedAffine) -> bool:
    """f <= g everywhere on the cube (checked on the plain affines)."""
    slack = f.c - g.c
    for af, ag in zip(f.a, g.a):
        if af > ag:
            slack += af - ag
    return slack <= 0


def _ind_leq(f: StrictIndicator, g: StrictIndicator) -> bool:
    if f.a != g.a:
        return False
    if f.c != g.c:
        return f.c < g.c
    return f.strict or not g.strict


def _dominated_within(leaf, others):
    for other in others:
        if other is leaf:
            continue
        if isinstance(leaf, ClampedAffine) and isinstance(other, ClampedAffine):
            if _aff_leq(other, leaf):
                return True
        elif isinstance(leaf, StrictIndicator) and isinstance(other, StrictIndicator):
            if _ind_leq(other, leaf):
                return True
    return False


def _prune(blocks, n) -> PwlForm:
    """Canonical, trimmed form: constants folded, min-dominated leaves and
    max-subsumed blocks dropped, deterministic order."""
    zeros = (0,) * n
    survivors = []
    for block in blocks:
        keep = []
        dead = False
        for leaf in block:
            k = _leaf_const(leaf)
            if k == 0:
                dead = True
                break
            if k == 1:
                continue
            keep.append(leaf)
        if dead:
            continue
        if not keep:  # a block of ones: the whole form is constant 1
            return PwlForm(((ClampedAffine(zeros, 1),),))
        uniq = sorted(set(keep), key=_leaf_key)
        trimmed = tuple(l for l in uniq if not _dominated_within(l, uniq))
        survivors.append(trimmed)
    if not survivors:
        return PwlForm(((ClampedAffine(zeros, 0),),))

    sets = [frozenset(b) for b in survivors]
    keep_blocks = []
    for i, b in enumerate(sets):
        subsumed = False
        for j, other in enumerate(sets):
            if i == j:
                continue
            if other < b or (other == b and j < i):
                subsumed = True
                break
        if not subsumed:
            keep_blocks.append(survivors[i])

    # between singleton clamped blocks the max keeps the larger affine
    singles = [(i, b[0]) for i, b in enumerate(keep_blocks)
               if len(b) == 1 and isinstance(b[0], ClampedAffine)]
    drop = set()
    for i, f in singles:
        for j, g in singles:
            if i != j and j not in drop and _aff_leq(f, g):
                drop.add(i)
                break
    keep_blocks = [b for i, b in enumerate(keep_blocks) if i not in drop]

    if len(keep_blocks) > BLOCK_CAP:
        raise CapExceededError("piecewise-linear form grew to %d blocks"
                               % len(keep_blocks))
    keep_blocks.sort(key=lambda b: (len(b), [_leaf_key(l) for l in b]))
    return PwlForm(tuple(keep_blocks))


# --- form algebra ----------------------------------------------------------

def _const_form(bit, n) -> PwlForm:
    return PwlForm(((ClampedAffine((0,) * n, 1 if bit else 0),),))


def _atom_form(i, n) -> PwlForm:
    return PwlForm(((ClampedAffine(tuple(1 if j == i else 0
                                         for j in range(n)), 0),),))


def pwl_max(P: PwlForm, R: PwlForm) -> PwlForm:
    return _prune(P.blocks + R.blocks, P.arity)


def pwl_min(P: PwlForm, R: PwlForm) -> PwlForm:
    return _prune([b + c for b in P.blocks for c in R.blocks], P.arity)


def pwl_neg(P: PwlForm) -> PwlForm:
    """1 - P: the min-max dual of the negated leaves, redistributed."""
    count = 1
    for b in P.blocks:
        count *= len(b)
        if count > BLOCK_CAP:
            raise CapExceededError("complement would need %d blocks" % count)
    blocks = [tuple(_neg_leaf(l) for l in pick)
              for pick in itertools.product(*P.blocks)]
    return _prune(blocks, P.arity)


def pwl_delta(P: PwlForm) -> PwlForm:
    """[P = 1]: D distributes through max and min onto the leaves."""
    return _prune([tuple(_delta_leaf(l) for l in b) for b in P.blocks], P.arity)


def _plus_leaf(x, y):
    """min(1, value(x) + value(y)) as a small max of leaves.

    Leaf values live in [0,1], so a {0,1}-valued summand turns truncated
    addition into max; for two clamps the exact identity is
    min(1, f# + g#) = max(f, g, f+g)#.
    """
    if isinstance(x, StrictIndicator) or isinstance(y, StrictIndicator):
        return (x, y)
    return (x, y, ClampedAffine(tuple(i + j for i, j in zip(x.a, y.a)),
                                x.c + y.c))


def pwl_plus(P: PwlForm, R: PwlForm) -> PwlForm:
    n = P.arity
    blocks = []
    for B in P.blocks:
        for C in R.blocks:
            forms = [_plus_leaf(x, y) for x in B for y in C]
            count = 1
            for f in forms:
                count *= len(f)
                if count > BLOCK_CAP:
                    raise CapExceededError(
                        "truncated sum would need %d blocks" % count)
            blocks.extend(itertools.product(*forms))
    return _prune(blocks, n)


def pwl_imp(P: PwlForm, R: PwlForm) -> PwlForm:
    return pwl_plus(pwl_neg(P), R)


def pwl_minus(P: PwlForm, R: PwlForm) -> PwlForm:
    return pwl_neg(pwl_plus(pwl_neg(P), R))


def pwl_fuse(P: PwlForm, R: PwlForm) -> PwlForm:
    return pwl_neg(pwl_plus(pwl_neg(P), pwl_neg(R)))


# ---------------------------------------------------------------------------
# functional counterparts

_SYMBOL = {"not": "-", "iff": "<->", "wimp": "~>", "simp": "=>",
           "siff": "<=>"}


def functional_counterpart(alpha: OuterFormula, atoms=None) -> PwlForm:
    """Piecewise-linear normal form of the first coordinate of alpha.

    atoms fixes the coordinate order (default: outer_atoms(alpha)).  The
    result evaluates exactly like the first coordinate of luk_two.eval at
    valuations whose second coordinates are 1 - x_i; for D-only formulas
    the second coordinates do not matter at all.  Raises ValueError on
    connectives outside {~, ->, (+), (-), &., &, |, D, Dt} -- in
    particular on the inner negation -, which mixes coordinates (push it
    into the modal arguments first, cf. translate).
    """
    if atoms is None:
        atoms = outer_atoms(alpha)
    index = {p: i for i, p in enumerate(atoms)}
    n = len(atoms)
    memo: dict = {}

    def go(f):
        hit = memo.get(id(f))
        if hit is not None:
            return hit
        k = f.kind
        if k == "atom":
            try:
                out = _atom_form(index[f.payload], n)
            except KeyError:
                raise ValueError("atom %s is not among the declared "
                                 "coordinates" % payload_str(f.payload)) from None
        elif k == "top":
            out = _const_form(1, n)
        elif k == "bot":
            out = _const_form(0, n)
        elif k == "snot":
            out = pwl_neg(go(f.args[0]))
        elif k in ("delta", "dtop"):
            out = pwl_delta(go(f.args[0]))
        elif k == "imp":
            out = pwl_imp(go(f.args[0]), go(f.args[1]))
        elif k == "oplus":
            out = pwl_plus(go(f.args[0]), go(f.args[1]))
        elif k == "ominus":
            out = pwl_minus(go(f.args[0]), go(f.args[1]))
        elif k == "fuse":
            out = pwl_fuse(go(f.args[0]), go(f.args[1]))
        elif k == "and":
            out = pwl_min(go(f.args[0]), go(f.args[1]))
        elif k == "or":
            out = pwl_max(go(f.args[0]), go(f.args[1]))
        else:
            raise ValueError("unsupported connective %r"
                             % _SYMBOL.get(k, k))
        memo[id(f)] = out
        return out

    return go(alpha)


def mcnaughton_clamped(f: ClampedAffine, atoms, logic=L2) -> OuterFormula:
    """An outer formula beta over the given atom payloads with f_beta = f#.

    Negative coefficients fold through ~ (a*x = |a|*(~x) + a for a < 0),
    after which f# = clamp(c' + u_1 + ... + u_N) over unit-coefficient
    literals; the truncated sum is then built one literal at a time with
    the slice identity

        clamp(S + u - j) = clamp(S - j) (+) (u &. clamp(S - j + 1)),

    which only ever needs integer-shifted tails of the partial sum.  The
    pointwise contract (exact equality with the clamp) is what the tests
    pin; this construction is just one convenient witness of it.
    """
    if len(f.a) != len(atoms):
        raise ValueError("affine arity %d against %d atoms"
                         % (len(f.a), len(atoms)))
    lits = []
    shift = f.c
    for coeff, payload in zip(f.a, atoms):
        base = payload if isinstance(payload, OuterFormula) \
            else OAtom(logic, payload)
        if coeff > 0:
            lits.extend([base] * coeff)
        elif coeff < 0:
            lits.extend([OSnot(base)] * (-coeff))
            shift += coeff

    def splus(x, y):
        if x == 1 or y == 1:
            return 1
        if x == 0:
            return y
        if y == 0:
            return x
        return OPlus(x, y)

    def sfuse(x, y):
        if x == 0 or y == 0:
            return 0
        if x == 1:
            return y
        if y == 1:
            return x
        return OFuse(x, y)

    target = -shift
    n_lits = len(lits)
    tails = {j: (1 if j <= -1 else 0)
             for j in range(target - n_lits, target + 1)}
    for m, u in enumerate(lits, start=1):
        tails = {j: splus(tails[j], sfuse(tails[j - 1], u))
                 for j in range(target - n_lits + m, target + 1)}
    beta = tails[target]
    if isinstance(beta, int):
        return OTop(logic) if beta else OBot(logic)
    return beta


def pwl_to_formula(P: PwlForm, atoms, logic=L2) -> OuterFormula:
    """Realize a form back as a formula: clamped leaves via the affine
    synthesis, [f >= 0] as D clamp(f + 1), [f > 0] as ~D clamp(1 - f);
    blocks join with | and leaves within a block with &."""
    def realize(leaf):
        if isinstance(leaf, StrictIndicator):
            if leaf.strict:
                mirrored = ClampedAffine(tuple(-k for k in leaf.a), 1 - leaf.c)
                return OSnot(ODelta(mcnaughton_clamped(mirrored, atoms, logic)))
            return ODelta(mcnaughton_clamped(
                ClampedAffine(leaf.a, leaf.c + 1), atoms, logic))
        return mcnaughton_clamped(leaf, atoms, logic)

    out = None
    for block in P.blocks:
        node = None
        for leaf in block:
            g = realize(leaf)
            node = g if node is None else OAnd(node, g)
        out = node if out is None else OOr(out, node)
    return out


# ---------------------------------------------------------------------------
# the composite translations

_DIRECTIONS = ("w2l", "l2w", "b2l", "l2b")
_MOD = {"w": "Pr", "b": "B"}
_TAG = {"w": two_layered.PR, "b": two_layered.BEL_L2}


def _atom_to_layer(atom, mod) -> OuterFormula:
    """The guarded image of one normalized inequality atom."""
    coeffs, payloads = [], []
    for coeff, sign, phi in atom.terms:
        if sign != "+":
            raise ValueError("normalization precondition violated: %s "
                             "carries a minus-signed measure"
                             % ineq.atom_to_str(atom))
        coeffs.append(coeff)
        payloads.append((mod, phi))

    def guard(a, const):
        beta = mcnaughton_clamped(ClampedAffine(tuple(a), const), payloads)
        return ODtop(beta)

    flipped = [-k for k in coeffs]
    rel, c = atom.relation, atom.bound
    if rel == ">=":
        return guard(coeffs, 1 - c)
    if rel == "<=":
        return guard(flipped, 1 + c)
    if rel == "<":
        return OSnot(guard(coeffs, 1 - c))
    if rel == ">":
        return OSnot(guard(flipped, 1 + c))
    # t = c  is  t >= c  and  t <= c
    return OAnd(guard(coeffs, 1 - c), guard(flipped, 1 + c))


def _combo_to_layer(combo, kind) -> "two_layered.TwoLayerFormula":
    mod = _MOD[kind]
    norm = ineq.normalize_atoms(combo, class_args=True)

    def build(c):
        if c.op == "atom":
            return _atom_to_layer(c.atom, mod)
        if c.op == "and":
            return OAnd(build(c.args[0]), build(c.args[1]))
        if c.op == "or":
            return OOr(build(c.args[0]), build(c.args[1]))
        raise AssertionError("normal form left op %r" % c.op)

    return two_layered.TwoLayerFormula(_TAG[kind], build(norm))


def _push_inner_negation(f: OuterFormula) -> OuterFormula:
    """Rewrite - and <-> away, exactly in both coordinates.

    - commutes with ~ and D (via -D x = ~D ~-x), distributes over the
    lattice pair, and swaps the residuated pairs:

        -(x -> y)  = -y (-) -x        -(x (-) y) = -y -> -x
        -(x (+) y) = -x &. -y         -(x &. y)  = -x (+) -y

    Over a guarded formula - collapses to ~ (the guard is two-valued), and
    on a modal atom it moves into the argument: the measures translated
    here satisfy  v(-M[phi]) = v(M[-phi]).  <-> unfolds into a fused pair
    of implications first.
    """
    from .luk_two import OImp, OMinus

    def push(g, neg):
        k = g.kind
        if k == "atom":
            if not neg:
                return g
            p = g.payload
            if isinstance(p, str):
                raise ValueError("unsupported connective '-' on plain atom %r"
                                 % p)
            return OAtom(g.logic, (p[0], Not(p[1])))
        if k == "top":
            return OBot(g.logic) if neg else g
        if k == "bot":
            return OTop(g.logic) if neg else g
        if k == "not":
            return push(g.args[0], not neg)
        if k == "snot":
            return OSnot(push(g.args[0], neg))
        if k == "delta":
            if neg:
                return OSnot(ODelta(OSnot(push(g.args[0], True))))
            return ODelta(push(g.args[0], False))
        if k == "dtop":
            inner = ODtop(push(g.args[0], False))
            return OSnot(inner) if neg else inner
        if k == "imp":
            a, b = g.args
            if neg:
                return OMinus(push(b, True), push(a, True))
            return OImp(push(a, False), push(b, False))
        if k == "ominus":
            a, b = g.args
            if neg:
                return OImp(push(b, True), push(a, True))
            return OMinus(push(a, False), push(b, False))
        if k == "oplus":
            a, b = g.args
            if neg:
                return OFuse(push(a, True), push(b, True))
            return OPlus(push(a, False), push(b, False))
        if k == "fuse":
            a, b = g.args
            if neg:
                return OPlus(push(a, True), push(b, True))
            return OFuse(push(a, False), push(b, False))
        if k == "and":
            a, b = g.args
            if neg:
                return OOr(push(a, True), push(b, True))
            return OAnd(push(a, False), push(b, False))
        if k == "or":
            a, b = g.args
            if neg:
                return OAnd(push(a, True), push(b, True))
            return OOr(push(a, False), push(b, False))
        if k == "iff":
            a, b = g.args
            return push(OFuse(OImp(a, b), OImp(b, a)), neg)
        raise ValueError("unsupported connective %r" % _SYMBOL.get(k, k))

    return push(f, False)


def _readoff(P: PwlForm, inners, kind):
    """The inequality combination stating that the form takes value 1."""
    cls = ineq.WeightAtom if kind == "w" else ineq.BeliefAtom

    def atom(leaf):
        terms = tuple((coeff, "+", phi)
                      for coeff, phi in zip(leaf.a, inners) if coeff)
        if not terms:
            terms = ((0, "+", inners[0]),)
        if isinstance(leaf, StrictIndicator):
            return ineq.c_atom(cls(terms, ">" if leaf.strict else ">=",
                                   -leaf.c))
        return ineq.c_atom(cls(terms, ">=", 1 - leaf.c))

    out = None
    for block in P.blocks:
        clause = None
        for leaf in block:
            node = atom(leaf)
            clause = node if clause is None else ineq.c_and(clause, node)
        out = clause if out is None else ineq.c_or(out, clause)
    return out


def _layer_to_combo(outer: OuterFormula, kind):
    rewritten = _push_inner_negation(outer)
    payloads = outer_atoms(rewritten)
    if not payloads:
        raise ValueError("nothing to translate: no modal atoms")
    for p in payloads:
        if isinstance(p, str):
            raise ValueError("plain atom %r has no inequality reading" % p)
    P = functional_counterpart(rewritten, payloads)
    return _readoff(P, [p[1] for p in payloads], kind)


def translate(item, direction: str):
    """The composite translation in the requested direction.

    w2l/b2l take an inequality combination (or its source text), normalize
    it, and return the guarded two-layer formula; l2w/l2b take a two-layer
    formula (or text) over Pr/B atoms and return the inequality
    combination that holds exactly when the formula's first coordinate is
    1 -- on the crisp image of the forward direction that is designation.
    """
    if direction not in _DIRECTIONS:
        raise ValueError("direction must be one of %s, got %r"
                         % ("/".join(_DIRECTIONS), direction))
    if direction in ("w2l", "b2l"):
        combo = ineq.parse_combo(item) if isinstance(item, str) else item
        want = "w" if direction == "w2l" else "b"
        kind = ineq.combo_kind(combo)
        if kind != want:
            raise ValueError("%s expects %s-atoms, got %s-atoms"
                             % (direction, want, kind))
        return _combo_to_layer(combo, want)

    kind = "w" if direction == "l2w" else "b"
    tag = _TAG[kind]
    if isinstance(item, str):
        tlf = two_layered.parse_two_layer(item, tag)
    elif isinstance(item, two_layered.TwoLayerFormula):
        if item.tag != tag:
            raise ValueError("%s expects the %s dialect, got %s"
                             % (direction, tag, item.tag))
        tlf = item
    elif isinstance(item, OuterFormula):
        tlf = two_layered.TwoLayerFormula(tag, item)
    else:
        raise TypeError("cannot translate %r" % (item,))
    return _layer_to_combo(tlf.outer, kind)


# ---------------------------------------------------------------------------
# designation bookkeeping and the equisatisfiability harness

def conflation_companion(atom):
    """The same inequality on the dual measure.

    sum a_i * (1 - m-(phi_i)) REL c  rewrites, through m-(phi) = m+(-phi),
    to  sum (-a_i) * m+(-phi_i)  REL  c - sum a_i.
    """
    cls = type(atom)
    terms = []
    total = 0
    for coeff, sign, phi in atom.terms:
        if sign != "+":
            raise ValueError("companions are for normalized atoms")
        terms.append((-coeff, "+", Not(phi)))
        total += coeff
    return cls(tuple(terms), atom.relation, atom.bound - total)


def designation_combo(combo):
    """A combination that holds on M exactly when translate(combo, ...)
    is designated on M.

    Weak-relation atoms translate to guarded formulas, designated iff the
    plain inequality and its conflation companion both hold; strict atoms
    translate to guarded negations, designated iff either strict form
    holds.  Equalities behave like conjunctions of two weak atoms.  The
    connectives are classical on the crisp fragment, so the gadgets
    compose structurally.
    """
    if isinstance(combo, str):
        combo = ineq.parse_combo(combo)
    norm = ineq.normalize_atoms(combo, class_args=True)

    def gadget(a):
        pair = (ineq.c_atom(a), ineq.c_atom(conflation_companion(a)))
        if a.relation in ("<", ">"):
            return ineq.c_or(*pair)
        return ineq.c_and(*pair)

    def build(c):
        if c.op == "atom":
            return gadget(c.atom)
        join = ineq.c_and if c.op == "and" else ineq.c_or
        return join(build(c.args[0]), build(c.args[1]))

    return build(norm)


_PAIRS = {
    "weight": "w", "w": "w", "weight/PrL2": "w", "pr": "w",
    "belief": "b", "b": "b", "belief/BelL2": "b", "bel": "b",
}


def equisat_harness(premises, conclusion, pair="weight") -> dict:
    """Decide a consequence on both sides and transfer the witness.

    The inequality side goes through ineq_calculus.entails.  The
    Lukasiewicz side lives in the crisp guarded fragment, where
    designation is again a classical combination of inequalities
    (designation_combo), so the query "all premises designated, conclusion
    not" is decided by the same exact LP machinery; a feasible model is
    re-checked against the actual translations with eval_two_layer.  The
    two verdicts agree on entailments whose countermodels can be taken
    classical; intrinsically paraconsistent countermodels are exactly
    where the guarded reading is stricter than the inequality one, and the
    report then shows ineq_valid=False, luk_valid=True.
    """
    try:
        kind = _PAIRS[pair]
    except KeyError:
        raise ValueError("unknown pair %r" % (pair,)) from None
    prem = [ineq.parse_combo(x) if isinstance(x, str) else x
            for x in premises]
    conc = ineq.parse_combo(conclusion) if isinstance(conclusion, str) \
        else conclusion
    direction = "w2l" if kind == "w" else "b2l"
    layered_prem = [translate(x, direction) for x in prem]
    layered_conc = translate(conc, direction)

    ineq_valid = ineq.entails(prem, conc, kind)

    query = ineq.c_not(designation_combo(conc))
    for x in reversed(prem):
        query = ineq.c_and(designation_combo(x), query)
    res = ineq.sat_weight(query) if kind == "w" else ineq.sat_belief(query)
    luk_valid = not res

    report = {
        "pair": "weight/PrL2" if kind == "w" else "belief/BelL2",
        "premises": [ineq.combo_to_str(x) for x in prem],
        "conclusion": ineq.combo_to_str(conc),
        "layered_premises": [str(x) for x in layered_prem],
        "layered_conclusion": str(layered_conc),
        "ineq_valid": ineq_valid,
        "luk_valid": luk_valid,
        "witness": None,
        "transferred": None,
    }
    if res:
        M = res.model
        tag = _TAG[kind]
        prem_ok = all(
            two_layered.designated(two_layered.eval_two_layer(M, x), tag)
            for x in layered_prem)
        conc_bad = not two_layered.designated(
            two_layered.eval_two_layer(M, layered_conc), tag)
        evalf = ineq.eval_weight if kind == "w" else ineq.eval_belief
        report["witness"] = models.model_to_json(M)
        report["witness_designates_premises"] = prem_ok
        report["witness_falsifies_conclusion"] = conc_bad
        report["witness_decides_ineq_side"] = (
            all(evalf(M, x) for x in prem) and not evalf(M, conc))
        report["transferred"] = prem_ok and conc_bad
    report["agree"] = (ineq_valid == luk_valid) and (
        ineq_valid or bool(report["transferred"]))
    return report


# ---------------------------------------------------------------------------
# curated suites

def curated_weight_suite():
    """(name, premises, conclusion, valid) quadruples over the weight
    calculus: the valid half instantiates the axiom shapes (bounds,
    duality, inclusion-exclusion, monotonicity and their arithmetic
    consequences), the invalid half all admit classical countermodels, so
    the designation witness transfers."""
    V, I = True, False
    return [
        ("bounds-lower", [], "w+[p] >= 0", V),
        ("bounds-upper", [], "w+[p] <= 1", V),
        ("bounds-minus", [], "w-[p] >= 0", V),
        ("mono-or", [], "w+[p] - w+[p | q] <= 0", V),
        ("mono-and", [], "w+[p & q] - w+[p] <= 0", V),
        ("incl-excl", [], "w+[p | q] + w+[p & q] - w+[p] - w+[q] = 0", V),
        ("neg-duality", [], "w-[p] - w+[-p] = 0", V),
        ("or-lift", ["w+[p] >= 1"], "w+[p | q] >= 1", V),
        ("and-meet", ["w+[p] >= 1", "w+[q] >= 1"], "w+[p & q] >= 1", V),
        ("or-lift-half", ["2*w+[p] >= 1"], "2*w+[p | q] >= 1", V),
        ("order-trans", ["w+[p] - w+[q] >= 0", "w+[q] - w+[r] >= 0"],
         "w+[p] - w+[r] >= 0", V),
        ("and-project", ["w+[p & q] >= 1"], "w+[p] >= 1", V),
        ("sum-pins", ["w+[p] + w+[q] >= 2"], "w+[p] >= 1", V),
        ("zero-sinks", ["w+[p] <= 0"], "w+[p & q] <= 0", V),
        ("arith-chain", ["2*w+[p] - w+[q] >= 1", "w+[q] >= 1"],
         "w+[p] >= 1", V),
        ("duality-gap", ["w+[p] >= 1", "w-[p] <= 0"],
         "w+[p] - w+[-p] >= 1", V),
        ("or-zero", ["w+[p | q] <= 0"], "w+[q] <= 0", V),
        ("eq-join", ["w+[p] = 1", "w+[q] = 1"], "w+[p | q] = 1", V),
        ("strict-mono-down", ["w+[p] < 1"], "w+[p & q] < 1", V),
        ("strict-mono-up", ["w+[p] > 0"], "w+[p | q] > 0", V),
        ("unit-unreachable", [], "w+[p] >= 1", I),
        ("zero-unreachable", [], "w+[p] <= 0", I),
        ("no-crosstalk", ["w+[p] >= 1"], "w+[q] >= 1", I),
        ("or-split", ["w+[p | q] >= 1"], "w+[p] >= 1", I),
        ("and-not-free", ["w+[p] >= 1"], "w+[p & q] >= 1", I),
        ("sum-no-meet", ["w+[p] + w+[q] >= 1"], "w+[p & q] > 0", I),
        ("dead-conjunct", ["w+[p] >= 1", "w+[q] <= 0"], "w+[p & q] > 0", I),
        ("half-not-unit", ["2*w+[p] >= 1"], "w+[p] >= 1", I),
        ("strict-gap", ["w+[p] > 0"], "w+[p] >= 1", I),
        ("and-zero-split", ["w+[p & q] <= 0"], "w+[p] <= 0", I),
        ("no-strictening", ["w+[p] - w+[q] >= 0"], "w+[p] - w+[q] >= 1", I),
        ("join-not-pin", ["w+[p | q] >= 1", "w+[p & q] <= 0"],
         "w+[p] >= 1", I),
        ("unit-no-export", ["w+[p] = 1"], "w+[q] > 0", I),
        ("scale-mismatch", ["w+[p] >= 1"], "2*w+[q] - w+[p] >= 0", I),
        ("three-vars-free", ["w+[p | q] <= 0"], "w+[r] >= 1", I),
        ("order-no-pin", ["w+[p] - w+[r] >= 0", "w+[q] >= 1"],
         "w+[r] > 0", I),
        ("strict-not-zero", ["w+[p] < 1"], "w+[p] <= 0", I),
        ("assoc-deepening", ["w+[p & q] >= 1"], "w+[p & (q & r)] >= 1", I),
        ("or-not-below", [], "w+[p | q] - w+[p] <= 0", I),
        ("meet-needs-units", ["w+[p] >= 1", "w+[q] > 0"],
         "w+[p & q] >= 1", I),
    ]


def curated_belief_suite():
    """Belief-calculus analogue, curated to the faithful fragment.

    Belief atoms only carry two inner variables (the exact solver's cap),
    and the cases avoid the corners listed in faithfulness_gaps(), where
    the guarded reading and the inequality reading genuinely part ways."""
    V, I = True, False
    return [
        ("b-bounds-lower", [], "b+[p] >= 0", V),
        ("b-bounds-upper", [], "b+[p] <= 1", V),
        ("b-bounds-minus", [], "b-[p] >= 0", V),
        ("b-mono-or", [], "b+[p] - b+[p | q] <= 0", V),
        ("b-mono-and", [], "b+[p & q] - b+[p] <= 0", V),
        ("b-mono-diff", [], "b+[p | q] - b+[p] >= 0", V),
        ("b-neg-dual", [], "b-[p] - b+[-p] = 0", V),
        ("b-or-lift", ["b+[p] >= 1"], "b+[p | q] >= 1", V),
        ("b-and-project", ["b+[p & q] >= 1"], "b+[p] >= 1", V),
        ("b-zero-sinks", ["b+[p] <= 0"], "b+[p & q] <= 0", V),
        ("b-order-trans", ["b+[p] - b+[q] >= 0", "b+[q] - b+[p & q] >= 0"],
         "b+[p] - b+[p & q] >= 0", V),
        ("b-or-lift-half", ["2*b+[p] >= 1"], "2*b+[p | q] >= 1", V),
        ("b-sum-pins", ["b+[p] + b+[q] >= 2"], "b+[p] >= 1", V),
        ("b-duality-gap", ["b+[p] >= 1", "b-[p] <= 0"],
         "b+[p] - b+[-p] >= 1", V),
        ("b-or-zero", ["b+[p | q] <= 0"], "b+[q] <= 0", V),
        ("b-strict-up", ["b+[p] > 0"], "b+[p | q] > 0", V),
        ("b-strict-down", ["b+[p] < 1"], "b+[p & q] < 1", V),
        ("b-eq-join", ["b+[p] = 1"], "b+[p | q] = 1", V),
        ("b-arith-chain", ["3*b+[p] - b+[q] >= 2", "b+[q] >= 1"],
         "b+[p] >= 1", V),
        ("b-glut-mono", [], "b+[p & -p] - b+[p] <= 0", V),
        ("b-unit-unreachable", [], "b+[p] >= 1", I),
        ("b-zero-unreachable", [], "b+[p] <= 0", I),
        ("b-no-crosstalk", ["b+[p] >= 1"], "b+[q] >= 1", I),
        ("b-or-split", ["b+[p | q] >= 1"], "b+[p] >= 1", I),
        ("b-and-not-free", ["b+[p] >= 1"], "b+[p & q] >= 1", I),
        ("b-or-split-strict", ["b+[p | q] >= 1"], "b+[p] > 0", I),
        ("b-no-add", ["b+[p] + b+[q] >= 1"], "b+[p | q] >= 1", I),
        ("b-and-zero-split", ["b+[p & q] <= 0"], "b+[p] <= 0", I),
        ("b-unit-no-export", ["b+[p] >= 1"], "b+[q] > 0", I),
        ("b-half-not-unit", ["2*b+[p] >= 1"], "b+[p] >= 1", I),
        ("b-strict-gap", ["b+[p] > 0"], "b+[p] >= 1", I),
        ("b-no-strictening", ["b+[p] - b+[q] >= 0"],
         "b+[p] - b+[q] >= 1", I),
        ("b-eq-no-export", ["b+[p] = 1"], "b+[q] > 0", I),
        ("b-zero-no-crosstalk", ["b+[p] <= 0"], "b+[q] <= 0", I),
        ("b-meet-no-double", ["b+[p & q] >= 1"],
         "2*b+[p] - b+[q] >= 2", I),
        ("b-mono-not-reversed", ["b+[q] >= 1"],
         "b+[p | q] - b+[p] <= 0", I),
        ("b-strict-not-zero", ["b+[p] < 1"], "b+[p] <= 0", I),
        ("b-superadd-not-sub", [], "b+[p | q] - b+[p] - b+[q] <= 0", I),
        ("b-eq-and-free", ["b+[p] = 1"], "b+[p & q] >= 1", I),
        ("b-no-doubling", [], "2*b+[p] - b+[p | q] >= 0", I),
    ]


def faithfulness_gaps():
    """Consequences where the two readings provably differ, pinned.

    Each entry is (name, premises, conclusion, pair, ineq_valid,
    luk_valid).  The first is the glut corner of the weight pair: the
    inequality side has a countermodel with mu+(p) = mu-(p) = 1, but
    designation of the translated premise forces mu-(p) = 0.  The belief
    entries go the other way -- inequality-valid, guard-refutable --
    because the conflation companion of a belief inequality reads the
    dual capacity 1 - bel(-phi), which is 2-alternating rather than
    2-monotone, and because a mass can sit on a class that entails
    -p | -q without entailing either disjunct."""
    return [
        ("w-glut-corner", ["w+[p] >= 1"], "w-[p] <= 0", "weight",
         False, True),
        ("b3-k2", [], "b+[p | q] - b+[p] - b+[q] + b+[p & q] >= 0",
         "belief", True, False),
        ("b-meet-units", ["b+[p] >= 1", "b+[q] >= 1"], "b+[p & q] >= 1",
         "belief", True, False),
    ]


def run_curated_suite(pair="weight") -> dict:
    """Run the whole curated suite; returns counts and any disagreements."""
    suite = curated_weight_suite() if _PAIRS.get(pair) == "w" \
        else curated_belief_suite()
    disagreements = []
    verdicts = {}
    for name, prem, conc, valid in suite:
        report = equisat_harness(prem, conc, pair)
        verdicts[name] = report
        if report["ineq_valid"] != valid or not report["agree"]:
            disagreements.append(name)
    return {"pair": pair, "cases": len(suite),
            "valid_cases": sum(1 for *_x, v in suite if v),
            "disagreements": disagreements, "reports": verdicts}
