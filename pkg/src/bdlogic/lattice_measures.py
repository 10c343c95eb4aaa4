"""Finite lattices, Möbius machinery, and uncertainty measures on them.

Measures here are maps from lattice elements to rationals in [0,1].  A mass
function assigns nonnegative weights summing to at most one (exactly one when
normalized); a belief function accumulates mass downward,

    bel(x) = sum of m(y) over y <= x,

and the Möbius transform recovers m from bel.  Belief functions are exactly
the monotone maps that are k-monotone for every k:

    bel(a1 v ... v ak)  >=  sum over nonempty J of (-1)^(|J|+1) bel(meet of J)

with the dual (<=, meets and joins swapped) notion for plausibility.  All
arithmetic is exact: values are Fractions, decimal strings are read as exact
rationals ("0.9" -> 9/10), floats are rejected.

Combination rules: the classical rule conditions the product mass on
non-conflict (meet != bottom) and renormalizes; over an unbounded De Morgan
algebra there is nothing to normalize away and the product mass lands
directly on meets, so totals multiply; the bounded variant forces the mass
of bottom to zero and renormalizes; the Dubois–Prade variant reroutes
conflicting products to joins instead of discarding them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import itertools

from . import bd_core
from .bd_core import (
    BOT_CLASS,
    TOP_CLASS,
    class_join,
    class_key_sort,
    class_meet,
    class_neg,
    class_of,
    formula_of_class,
    lindenbaum_class_keys,
    parse_bd,
    to_str,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def Q(v) -> Fraction:
    """Coerce to an exact rational; floats are refused on purpose."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError("expected an exact rational, got %r" % (v,))


class TotalConflict(ArithmeticError):
    """All product mass fell on the conflict element."""


# ---------------------------------------------------------------------------
# lattices

class FiniteLattice:
    """An explicit finite lattice with optional De Morgan negation.

    `leq` is either a callable x, y -> bool or a collection of (x, y) pairs
    with x <= y; the pair form is closed under reflexivity and transitivity.
    The constructor verifies a partial order with all binary meets and
    joins, and, when a negation is supplied, that it is an involutive De
    Morgan dual with neg(top) = bottom.
    """

    def __init__(self, elements, leq, neg=None):
        self.elements = list(elements)
        n = len(self.elements)
        if n == 0:
            raise ValueError("empty lattice")
        if len(set(self.elements)) != n:
            raise ValueError("duplicate elements")
        self.index = {x: i for i, x in enumerate(self.elements)}
        if callable(leq):
            mat = [[bool(leq(x, y)) for y in self.elements] for x in self.elements]
        else:
            pairs = {(self.index[a], self.index[b]) for a, b in leq}
            mat = [[(i, j) in pairs or i == j for j in range(n)] for i in range(n)]
            # transitive closure of the pair form
            for k in range(n):
                for i in range(n):
                    if mat[i][k]:
                        row_k = mat[k]
                        row_i = mat[i]
                        for j in range(n):
                            if row_k[j]:
                                row_i[j] = True
        self._leq = mat
        for i in range(n):
            if not mat[i][i]:
                raise ValueError("order not reflexive")
            for j in range(n):
                if i != j and mat[i][j] and mat[j][i]:
                    raise ValueError("order not antisymmetric")
        for i in range(n):
            for j in range(n):
                if mat[i][j]:
                    for k in range(n):
                        if mat[j][k] and not mat[i][k]:
                            raise ValueError("order not transitive")
        self._meet = [[None] * n for _ in range(n)]
        self._join = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                lo = [k for k in range(n) if mat[k][i] and mat[k][j]]
                m = [k for k in lo if all(mat[l][k] for l in lo)]
                if len(m) != 1:
                    raise ValueError("no meet for a pair; not a lattice")
                hi = [k for k in range(n) if mat[i][k] and mat[j][k]]
                jn = [k for k in hi if all(mat[k][l] for l in hi)]
                if len(jn) != 1:
                    raise ValueError("no join for a pair; not a lattice")
                self._meet[i][j] = self._meet[j][i] = m[0]
                self._join[i][j] = self._join[j][i] = jn[0]
        bot = [i for i in range(n) if all(mat[i][j] for j in range(n))]
        top = [i for i in range(n) if all(mat[j][i] for j in range(n))]
        self.bottom = self.elements[bot[0]]
        self.top = self.elements[top[0]]
        self._neg = None
        if neg is not None:
            table = [self.index[neg(x) if callable(neg) else neg[x]] for x in self.elements]
            for i in range(n):
                if table[table[i]] != i:
                    raise ValueError("negation not involutive")
                for j in range(n):
                    if mat[i][j] and not mat[table[j]][table[i]]:
                        raise ValueError("negation not antitone")
            for i in range(n):
                for j in range(n):
                    if table[self._meet[i][j]] != self._join[table[i]][table[j]]:
                        raise ValueError("negation not De Morgan")
            if table[top[0]] != bot[0]:
                raise ValueError("neg(top) != bottom")
            self._neg = table

    def __len__(self):
        return len(self.elements)

    def leq(self, x, y) -> bool:
        return self._leq[self.index[x]][self.index[y]]

    def meet(self, x, y):
        return self.elements[self._meet[self.index[x]][self.index[y]]]

    def join(self, x, y):
        return self.elements[self._join[self.index[x]][self.index[y]]]

    def neg(self, x):
        if self._neg is None:
            raise ValueError("lattice has no negation")
        return self.elements[self._neg[self.index[x]]]

    @property
    def has_neg(self) -> bool:
        return self._neg is not None

    def lower(self, x):
        i = self.index[x]
        return [y for y in self.elements if self._leq[self.index[y]][i]]

    def strictly_lower(self, x):
        return [y for y in self.lower(x) if y != x]

    def maximal_strictly_below(self, x):
        below = self.strictly_lower(x)
        return [y for y in below if not any(y != z and self.leq(y, z) for z in below)]

    def height(self) -> int:
        # longest chain, counted by edges
        order = sorted(self.elements, key=lambda x: len(self.lower(x)))
        h = {x: 0 for x in self.elements}
        for x in order:
            for y in self.strictly_lower(x):
                h[x] = max(h[x], h[y] + 1)
        return max(h.values())


def powerset_lattice(frame) -> FiniteLattice:
    """The powerset of a finite frame ordered by inclusion, with complement
    as negation."""
    base = sorted(frame)
    subsets = []
    for r in range(len(base) + 1):
        subsets.extend(frozenset(c) for c in itertools.combinations(base, r))
    full = frozenset(base)
    return FiniteLattice(subsets, lambda x, y: x <= y, neg=lambda x: full - x)


@lru_cache(maxsize=None)
def _class_lattice(sig, with_constants):
    keys = lindenbaum_class_keys(sig, with_constants)
    return FiniteLattice(
        list(keys),
        lambda a, b: bd_core.class_entails(a, b),
        neg=class_neg,
    )


def class_lattice(signature, with_constants=False) -> FiniteLattice:
    """The Lindenbaum lattice of formula classes over the signature (the free
    De Morgan algebra, possibly with bounds), keyed by clause antichains and
    materialized up to two variables."""
    return _class_lattice(tuple(sorted(signature)), bool(with_constants))


# ---------------------------------------------------------------------------
# measures

class MassFunction(dict):
    """element -> nonnegative rational, total <= 1 (== 1 when normalized)."""

    def __init__(self, mapping=(), normalized=False):
        super().__init__()
        self.normalized = normalized
        items = mapping.items() if isinstance(mapping, dict) else mapping
        for k, v in items:
            self[k] = Q(v)

    @property
    def total(self) -> Fraction:
        return sum(self.values(), ZERO)

    def validate(self):
        for k, v in self.items():
            if v < 0:
                raise ValueError("negative mass at %r" % (k,))
        t = self.total
        if self.normalized and t != 1:
            raise ValueError("normalized mass must total 1, got %s" % t)
        if t > 1:
            raise ValueError("mass total exceeds 1: %s" % t)
        return self


class SetValuedMeasure(dict):
    """element -> rational in [0,1], tagged 'belief' or 'plausibility'."""

    def __init__(self, mapping=(), role="belief"):
        super().__init__()
        if role not in ("belief", "plausibility"):
            raise ValueError("role must be belief or plausibility")
        self.role = role
        items = mapping.items() if isinstance(mapping, dict) else mapping
        for k, v in items:
            self[k] = Q(v)

    def validate(self):
        for k, v in self.items():
            if not (0 <= v <= 1):
                raise ValueError("value out of [0,1] at %r" % (k,))
        return self


def belief_from_mass(m, P: FiniteLattice) -> SetValuedMeasure:
    """bel(x) = sum of m(y) over y <= x; inverse of the Möbius transform."""
    out = SetValuedMeasure(role="belief")
    for x in P.elements:
        out[x] = sum((Q(v) for y, v in m.items() if P.leq(y, x)), ZERO)
    return out


def mobius_transform(f, P: FiniteLattice) -> dict:
    """Invert x -> sum_{y<=x} g(y).

    Computed twice — by top-down subtraction along a linear extension and by
    the recursive Möbius function of the order — and cross-checked, then
    verified to re-sum to f.  Exact rationals throughout.
    """
    idx = P.index
    order = sorted(P.elements, key=lambda x: len(P.lower(x)))
    g = {}
    for x in order:
        g[x] = Q(f[x]) - sum((g[y] for y in P.strictly_lower(x)), ZERO)

    mu = {}

    def moebius(i, j):  # mu(y, x) for y <= x, by indices
        if (i, j) in mu:
            return mu[(i, j)]
        if i == j:
            val = 1
        else:
            val = -sum(
                moebius(i, idx[z])
                for z in P.elements
                if P._leq[i][idx[z]] and P._leq[idx[z]][j] and idx[z] != j
            )
        mu[(i, j)] = val
        return val

    for x in P.elements:
        alt = sum((moebius(idx[y], idx[x]) * Q(f[y]) for y in P.lower(x)), ZERO)
        if alt != g[x]:
            raise AssertionError("Möbius routes disagree at %r" % (x,))
    for x in P.elements:
        if sum((g[y] for y in P.lower(x)), ZERO) != Q(f[x]):
            raise AssertionError("Möbius inversion failed at %r" % (x,))
    return g


def dual_measure(f: SetValuedMeasure, P: FiniteLattice) -> SetValuedMeasure:
    """x -> 1 - f(neg x), with the role tag flipped; an involution."""
    if not P.has_neg:
        raise ValueError("dual_measure needs a De Morgan negation")
    role = "plausibility" if f.role == "belief" else "belief"
    return SetValuedMeasure({x: ONE - Q(f[P.neg(x)]) for x in P.elements}, role=role)


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    violation: tuple = None
    message: str = "ok"

    def __bool__(self):
        return self.ok


def check_measure(f, P: FiniteLattice, kmax: int = 3) -> CheckReport:
    """Verify the defining inequalities of a (general) belief or plausibility
    function by brute force: the range, monotonicity, and every k-tuple
    inequality for k <= kmax.  The first violating tuple is reported.

    Tuple enumeration is O(|L|^k); total monotonicity beyond kmax is better
    certified through nonnegativity of the Möbius transform, which is
    equivalent (see `is_belief_function`).
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    role = getattr(f, "role", "belief")
    for x in P.elements:
        v = Q(f[x])
        if not (0 <= v <= 1):
            return CheckReport(False, ("range", x, v), "value out of [0,1]")
    for x in P.elements:
        for y in P.elements:
            if P.leq(x, y) and Q(f[x]) > Q(f[y]):
                return CheckReport(
                    False, ("monotonicity", x, y, Q(f[x]), Q(f[y])),
                    "monotonicity fails",
                )
    for k in range(2, kmax + 1):
        for tup in itertools.combinations(P.elements, k):
            if role == "belief":
                lhs = _fold(P.join, tup)
                rhs = _alternating(f, P.meet, tup)
                if Q(f[lhs]) < rhs:
                    return CheckReport(
                        False, ("k-monotonicity", k, tup, Q(f[lhs]), rhs),
                        "%d-monotonicity fails" % k,
                    )
            else:
                lhs = _fold(P.meet, tup)
                rhs = _alternating(f, P.join, tup)
                if Q(f[lhs]) > rhs:
                    return CheckReport(
                        False, ("k-alternation", k, tup, Q(f[lhs]), rhs),
                        "%d-alternation fails" % k,
                    )
    return CheckReport(True)


def _fold(op, xs):
    out = xs[0]
    for x in xs[1:]:
        out = op(out, x)
    return out


def _alternating(f, op, tup):
    rhs = ZERO
    for r in range(1, len(tup) + 1):
        for sub in itertools.combinations(tup, r):
            term = Q(f[_fold(op, sub)])
            rhs += term if r % 2 == 1 else -term
    return rhs


def is_belief_function(f, P: FiniteLattice, normalized=False):
    """Exact characterization: f is a general belief function iff its values
    sit in [0,1] and its Möbius transform is nonnegative everywhere.

    Returns (True, None) or (False, witness).  The witness is a concrete
    violated instance: either a range or monotonicity pair, or a tuple
    ("k-monotonicity", k, A, a, f(a), rhs) where A lists the maximal
    elements strictly below a and rhs is the alternating sum over A — any
    monotone k-monotone f would need f(a) >= rhs, yet f(a) < rhs.
    """
    for x in P.elements:
        v = Q(f[x])
        if not (0 <= v <= 1):
            return False, ("range", x, v)
    for x in P.elements:
        for y in P.elements:
            if P.leq(x, y) and Q(f[x]) > Q(f[y]):
                return False, ("monotonicity", x, y, Q(f[x]), Q(f[y]))
    order = sorted(P.elements, key=lambda x: len(P.lower(x)))
    g = {}
    for x in order:
        g[x] = Q(f[x]) - sum((g[y] for y in P.strictly_lower(x)), ZERO)
        if g[x] < 0:
            A = tuple(P.maximal_strictly_below(x))
            rhs = _alternating(f, P.meet, A)
            return False, ("k-monotonicity", len(A), A, x, Q(f[x]), rhs)
    if normalized:
        if Q(f[P.bottom]) != 0:
            return False, ("normalization", P.bottom, Q(f[P.bottom]))
        if Q(f[P.top]) != 1:
            return False, ("normalization", P.top, Q(f[P.top]))
    return True, None


# ---------------------------------------------------------------------------
# algebra adapters for combination
#
# A combination algebra only needs meets, joins, a conflict element (bottom,
# when the algebra has one) and printable element labels; the free De Morgan
# adapter therefore stays lazy and works for three generators even though the
# class lattice (7,828,352 elements) cannot be enumerated.

class PowersetAlgebra:
    kind = "powerset"

    def __init__(self, frame):
        self.frame = tuple(sorted(frame))
        self.full = frozenset(self.frame)
        self.bottom = frozenset()
        self.top = self.full

    def meet(self, x, y):
        return x & y

    def join(self, x, y):
        return x | y

    def neg(self, x):
        return self.full - x

    def parse_element(self, text):
        text = text.strip()
        if text.startswith("{") and text.endswith("}"):
            text = text[1:-1]
        names = [t.strip() for t in text.split(",") if t.strip()]
        for nm in names:
            if nm not in self.frame:
                raise ValueError("outcome %r not in frame" % nm)
        return frozenset(names)

    def label(self, x):
        return "{%s}" % ",".join(sorted(x))

    def lattice(self) -> FiniteLattice:
        return powerset_lattice(self.frame)


class FreeDeMorganAlgebra:
    """Formula classes over a signature, keyed by clause antichains; meets,
    joins and negation computed clause-wise, no enumeration needed."""

    def __init__(self, signature, with_constants=False):
        self.signature = tuple(sorted(signature))
        self.with_constants = bool(with_constants)
        self.kind = "demorgan_bounded" if with_constants else "demorgan_free"
        self.bottom = BOT_CLASS if with_constants else None
        self.top = TOP_CLASS if with_constants else None

    def meet(self, x, y):
        return class_meet(x, y)

    def join(self, x, y):
        return class_join(x, y)

    def neg(self, x):
        return class_neg(x)

    def parse_element(self, text):
        return class_of(parse_bd(text, self.signature, self.with_constants))

    def label(self, x):
        return to_str(formula_of_class(x))

    def lattice(self) -> FiniteLattice:
        return class_lattice(self.signature, self.with_constants)


class ExplicitAlgebra:
    kind = "explicit"

    def __init__(self, lattice: FiniteLattice, labels=None):
        self.lat = lattice
        self.bottom = lattice.bottom
        self.top = lattice.top
        self._labels = labels or {}

    def meet(self, x, y):
        return self.lat.meet(x, y)

    def join(self, x, y):
        return self.lat.join(x, y)

    def neg(self, x):
        return self.lat.neg(x)

    def parse_element(self, text):
        for x in self.lat.elements:
            if self.label(x) == text:
                return x
        raise ValueError("unknown element %r" % text)

    def label(self, x):
        return self._labels.get(x, str(x))

    def lattice(self) -> FiniteLattice:
        return self.lat


def combine(m1, m2, rule="dempster", algebra="powerset", P=None) -> MassFunction:
    """Aggregate two mass functions over the algebra adapter P.

    rule='dempster':
      * algebra='powerset' / 'demorgan_bounded': product mass on meets,
        conflict (meet = bottom) discarded, remainder renormalized; raises
        TotalConflict when everything conflicts.
      * algebra='demorgan_free': no bottom exists, every product is kept on
        the meet, no normalization; the output total is the product of the
        input totals.
    rule='dubois_prade': conflicting product mass moves to the join of the
      two arguments instead of being discarded (no normalization).  On a
      bounded *free* De Morgan algebra meets only hit bottom when a factor
      is bottom, so with bottom-free inputs the rule coincides with the
      unnormalized one; without a bottom at all nothing can conflict.
    """
    if P is None:
        raise ValueError("an algebra adapter is required")
    if rule not in ("dempster", "dubois_prade"):
        raise ValueError("unknown rule %r" % rule)
    if algebra not in ("powerset", "demorgan_free", "demorgan_bounded"):
        raise ValueError("unknown algebra mode %r" % algebra)
    bottom = getattr(P, "bottom", None)
    if algebra in ("powerset", "demorgan_bounded") and bottom is None:
        raise ValueError("mode %r needs an algebra with a bottom" % algebra)

    products = []
    for x1, v1 in m1.items():
        for x2, v2 in m2.items():
            w = Q(v1) * Q(v2)
            if w == 0:
                continue
            products.append((P.meet(x1, x2), w, x1, x2))

    out = MassFunction()
    if rule == "dubois_prade":
        for y, w, x1, x2 in products:
            if bottom is not None and y == bottom:
                y = P.join(x1, x2)
            out[y] = out.get(y, ZERO) + w
        return out

    if algebra == "demorgan_free":
        for y, w, _, _ in products:
            out[y] = out.get(y, ZERO) + w
        return out

    denom = ZERO
    for y, w, _, _ in products:
        if y != bottom:
            denom += w
            out[y] = out.get(y, ZERO) + w
    if denom == 0:
        raise TotalConflict("all product mass fell on the conflict element")
    for y in out:
        out[y] /= denom
    return out


# ---------------------------------------------------------------------------
# extension of a belief function from a family of sets to the full powerset

def extend_to_powerset(f, family, base, on=None) -> SetValuedMeasure:
    """Extend a belief function on a meet/join-closed family of subsets of
    `base` to (a chunk of) the full powerset.

    The Möbius mass of f is taken on the family ordered by inclusion,
    zero-padded to all other subsets, and re-summed.  With on=None every
    subset of `base` is produced (fine for small bases); otherwise only the
    requested target sets are evaluated.  The result agrees with f on the
    family; Möbius nonnegativity is enforced since otherwise no extension
    is a belief function.
    """
    fam = list(family)
    sub = FiniteLattice(fam, lambda x, y: x <= y)
    ok, witness = is_belief_function(f, sub)
    if not ok:
        raise ValueError("input is not a belief function on its family: %r" % (witness,))
    g = mobius_transform(f, sub)
    if on is None:
        base = sorted(base)
        if len(base) > 5:
            raise ValueError("full powerset too large; pass target sets via on=")
        on = [frozenset(c) for r in range(len(base) + 1)
              for c in itertools.combinations(base, r)]
    out = SetValuedMeasure(role=getattr(f, "role", "belief"))
    for Y in on:
        out[Y] = sum((v for X, v in g.items() if X <= Y), ZERO)
    return out
