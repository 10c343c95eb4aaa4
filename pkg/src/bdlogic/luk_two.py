"""Two-dimensional Lukasiewicz logics on the twist product [0,1]^2.

A value is a pair (a1, a2) of rationals in [0,1]: a1 is the degree of support
*for* a statement, a2 the degree of support *against* it, and the two are
independent (they need not sum to 1).  Two orders live on such pairs:

    truth order        (a1,a2) <=  (b1,b2)  iff  a1 <= b1 and b2 <= a2
    information order  (a1,a2) <=i (b1,b2)  iff  a1 <= b1 and a2 <= b2

Connectives act coordinate-wise through the Lukasiewicz operations on [0,1]:

    a ->l b = min(1, 1-a+b)      a &l b = max(0, a+b-1)
    a +l b  = min(1, a+b)        a -l b = max(0, a-b)
    ~l a    = 1 - a              Dl a   = (1 if a = 1 else 0)

Two outer logics share the carrier but differ in primitives and designation.

L2 (designated value: exactly (1,0)) has primitives ->, ~, -, D:

    -(a1,a2)           = (a2, a1)                     (swap)
    ~(a1,a2)           = (1-a1, 1-a2)
    (a1,a2) -> (b1,b2) = (a1 ->l b1,  b2 -l a2)
    D(a1,a2)           = (Dl a1,  0 if a2 = 0 else 1)

NL (designated values: every pair with first coordinate 1) has primitives
& (lattice meet), ~>, ~, -:

    ~(a1,a2)           = (1-a1, a1)
    (a1,a2) ~> (b1,b2) = (a1 ->l b1,  a1 &l b2)

Everything else is an abbreviation, per logic:

    x &. y  = ~(x -> ~y)          x (+) y = ~x -> y      x (-) y = ~(x -> y)
    x & y   = (x -> y) &. x       x | y   = (x -> y) -> y         (L2)
    x | y   = -(-x & -y)          x <-> y = (x ~> y) & (y ~> x)   (NL)
    x => y  = (x ~> y) & (-y ~> -x)        x <=> y symmetrises => (NL)
    Dt x    = D x & ~-D x

eval() computes closed coordinate forms for the derived connectives and
expand() rewrites them to the primitives; the test suite checks the two
routes agree pointwise, which pins the closed forms to the abbreviations.
(In particular the second coordinate of the L2 arrow must read b2 -l a2 and
that of x (-) y must read b2 ->l a2 — any other pairing breaks the De Morgan
law -(x -> y) = -y (-) -x; likewise the first coordinates of NL's (+)/(-)
are forced to a1 +l b1 / a1 -l b1 by their definitions through ~>.)

Dt detects the single value (1,0): its image is {(1,0), (0,1)} in L2, and
both outputs are fixpoints of the conflation x |-> ~-x, which distributes
over all L2 connectives.  classify() reads a pair as classical, incomplete
or contradictory according as a1 + a2 is =, < or > 1.

falsify() is a semi-decision: it searches a rational grid and then random
samples for countervaluations, so "not_found" is evidence, not a proof.
Exact validity checking for the full logics is not attempted here (the
crisp Dt-guarded fragment is decided exactly via the linear translations).
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import bd_core
from .bd_core import BDSyntaxError, UnknownVariableError

L2 = "l2"
NL = "nl"

_Q0 = Fraction(0)
_Q1 = Fraction(1)


def _unit(x) -> Fraction:
    q = x if type(x) is Fraction else Fraction(x)
    if q < 0 or q > 1:
        raise ValueError("coordinate %s outside [0,1]" % q)
    return q


class TwoPoint:
    """A twist-product value: rational (support-for, support-against).

    Immutable; equality and hashing are coordinate-wise.  leq_truth is the
    truth order (more for, less against), leq_info the information order
    (both supports grow).
    """

    __slots__ = ("first", "second")

    def __init__(self, first, second):
        object.__setattr__(self, "first", _unit(first))
        object.__setattr__(self, "second", _unit(second))

    def __setattr__(self, *_):
        raise AttributeError("TwoPoint is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, TwoPoint)
            and self.first == other.first
            and self.second == other.second
        )

    def __hash__(self):
        return hash((self.first, self.second))

    def __iter__(self):
        yield self.first
        yield self.second

    def __repr__(self):
        return "TwoPoint(%s, %s)" % (self.first, self.second)

    def __str__(self):
        return "(%s, %s)" % (self.first, self.second)

    def leq_truth(self, other: "TwoPoint") -> bool:
        return self.first <= other.first and other.second <= self.second

    def leq_info(self, other: "TwoPoint") -> bool:
        return self.first <= other.first and self.second <= other.second


POINT_TRUE = TwoPoint(1, 0)
POINT_FALSE = TwoPoint(0, 1)


def as_twopoint(x) -> TwoPoint:
    """Coerce a TwoPoint, a pair, or a pair of rational strings."""
    if isinstance(x, TwoPoint):
        return x
    a, b = x
    return TwoPoint(a, b)


def conflate(x: TwoPoint) -> TwoPoint:
    """The conflation ~- : (a1,a2) |-> (1-a2, 1-a1) (same in both logics)."""
    return TwoPoint(1 - x.second, 1 - x.first)


# ---------------------------------------------------------------------------
# Lukasiewicz arithmetic on [0,1]

def l_imp(a: Fraction, b: Fraction) -> Fraction:
    return _Q1 if a <= b else 1 - a + b


def l_fuse(a: Fraction, b: Fraction) -> Fraction:
    s = a + b - 1
    return _Q0 if s <= 0 else s


def l_plus(a: Fraction, b: Fraction) -> Fraction:
    s = a + b
    return _Q1 if s >= 1 else s


def l_minus(a: Fraction, b: Fraction) -> Fraction:
    return _Q0 if a <= b else a - b


def l_not(a: Fraction) -> Fraction:
    return 1 - a


def l_delta(a: Fraction) -> Fraction:
    return _Q1 if a == 1 else _Q0


# ---------------------------------------------------------------------------
# outer formulas (interned, immutable, tagged with their logic)

_ATOM, _TOPC, _BOTC = "atom", "top", "bot"
_NOT, _SNOT, _DELTA, _DTOP = "not", "snot", "delta", "dtop"
_IMP, _WIMP = "imp", "wimp"
_AND, _OR, _FUSE, _PLUS, _MINUS = "and", "or", "fuse", "oplus", "ominus"
_IFF, _SIMP, _SIFF = "iff", "simp", "siff"

_L2_ONLY = frozenset({_IMP})
_NL_ONLY = frozenset({_WIMP, _SIMP, _SIFF})

_ointern: dict = {}


class OuterFormula:
    """An interned outer-logic formula; compare/hash by identity.

    Atoms carry a payload: a plain name, or a (modality, inner formula) pair
    for bracketed atoms like Pr[p & q].
    """

    __slots__ = ("logic", "kind", "payload", "args")

    def __new__(cls, logic, kind, payload=None, args=()):
        if logic not in (L2, NL):
            raise ValueError("unknown logic tag %r" % (logic,))
        if kind in _L2_ONLY and logic != L2:
            raise ValueError("%s is an L2 connective" % kind)
        if kind in _NL_ONLY and logic != NL:
            raise ValueError("%s is an NL connective" % kind)
        for a in args:
            if a.logic != logic:
                raise ValueError("mixed logic tags %s/%s" % (logic, a.logic))
        key = (logic, kind, payload, tuple(id(a) for a in args))
        hit = _ointern.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        object.__setattr__(self, "logic", logic)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "payload", payload)
        object.__setattr__(self, "args", tuple(args))
        _ointern[key] = self
        return self

    def __setattr__(self, *_):
        raise AttributeError("formulas are immutable")

    def __repr__(self):
        return "OuterFormula(%s, %s)" % (self.logic, outer_to_str(self))

    def __str__(self):
        return outer_to_str(self)


def OAtom(logic, payload) -> OuterFormula:
    return OuterFormula(logic, _ATOM, payload)


def OTop(logic) -> OuterFormula:
    return OuterFormula(logic, _TOPC)


def OBot(logic) -> OuterFormula:
    return OuterFormula(logic, _BOTC)


def ONot(f) -> OuterFormula:
    return OuterFormula(f.logic, _NOT, args=(f,))


def OSnot(f) -> OuterFormula:
    return OuterFormula(f.logic, _SNOT, args=(f,))


def ODelta(f) -> OuterFormula:
    return OuterFormula(f.logic, _DELTA, args=(f,))


def ODtop(f) -> OuterFormula:
    return OuterFormula(f.logic, _DTOP, args=(f,))


def OImp(f, g) -> OuterFormula:
    return OuterFormula(f.logic, _IMP, args=(f, g))


def OWimp(f, g) -> OuterFormula:
    return OuterFormula(f.logic, _WIMP, args=(f, g))


def OAnd(f, g) -> OuterFormula:
    return OuterFormula(f.logic, _AND, args=(f, g))


def OOr(f, g) -> OuterFormula:
    return OuterFormula(f.logic, _OR, args=(f, g))


def OFuse(f, g) -> OuterFormula:
    return OuterFormula(f.logic, _FUSE, args=(f, g))


def OPlus(f, g) -> OuterFormula:
    return OuterFormula(f.logic, _PLUS, args=(f, g))


def OMinus(f, g) -> OuterFormula:
    return OuterFormula(f.logic, _MINUS, args=(f, g))


def OIff(f, g) -> OuterFormula:
    return OuterFormula(f.logic, _IFF, args=(f, g))


def OSimp(f, g) -> OuterFormula:
    return OuterFormula(f.logic, _SIMP, args=(f, g))


def OSiff(f, g) -> OuterFormula:
    return OuterFormula(f.logic, _SIFF, args=(f, g))


def _payload_key(p):
    if isinstance(p, str):
        return (0, p, "")
    return (1, p[0], bd_core.to_str(p[1]))


def outer_atoms(f: OuterFormula) -> tuple:
    """Sorted tuple of distinct atom payloads occurring in f."""
    seen = set()

    def walk(g):
        if g.kind == _ATOM:
            seen.add(g.payload)
        for a in g.args:
            walk(a)

    walk(f)
    return tuple(sorted(seen, key=_payload_key))


# ---------------------------------------------------------------------------
# printing / parsing
#
# impterm := addterm (IMP impterm)?          IMP in -> ~> => <-> <=>  (right)
# addterm := multerm (('|' | '(+)' | '(-)') multerm)*             (left)
# multerm := prefix (('&' | '&.') prefix)*                        (left)
# prefix  := ('~' | '-' | 'D' | 'Dt') prefix | base
# base    := '(' impterm ')' | '0' | '1' | IDENT | MOD '[' inner ']'

_TIER = {
    _IMP: 1, _WIMP: 1, _SIMP: 1, _IFF: 1, _SIFF: 1,
    _OR: 2, _PLUS: 2, _MINUS: 2,
    _AND: 3, _FUSE: 3,
    _NOT: 4, _SNOT: 4, _DELTA: 4, _DTOP: 4,
    _ATOM: 5, _TOPC: 5, _BOTC: 5,
}
_INFIX = {
    _IMP: "->", _WIMP: "~>", _SIMP: "=>", _IFF: "<->", _SIFF: "<=>",
    _OR: "|", _PLUS: "(+)", _MINUS: "(-)", _AND: "&", _FUSE: "&.",
}
_PREFIX = {_NOT: "-", _SNOT: "~", _DELTA: "D ", _DTOP: "Dt "}


def payload_str(p) -> str:
    if isinstance(p, str):
        return p
    return "%s[%s]" % (p[0], bd_core.to_str(p[1]))


def outer_to_str(f: OuterFormula) -> str:
    def go(g, need):
        k = g.kind
        tier = _TIER[k]
        if k == _ATOM:
            s = payload_str(g.payload)
        elif k == _TOPC:
            s = "1"
        elif k == _BOTC:
            s = "0"
        elif k in _PREFIX:
            s = _PREFIX[k] + go(g.args[0], 4)
        elif tier == 1:
            a, b = g.args
            s = "%s %s %s" % (go(a, 2), _INFIX[k], go(b, 1))
        else:
            a, b = g.args
            s = "%s %s %s" % (go(a, tier), _INFIX[k], go(b, tier + 1))
        return "(" + s + ")" if tier < need else s

    return go(f, 1)


_MULTI = ("(+)", "(-)", "<=>", "<->", "->", "~>", "=>", "&.")


def _olex(text):
    toks, i, n = [], 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        hit = next((t for t in _MULTI if text.startswith(t, i)), None)
        if hit is not None:
            toks.append(("op", hit, i))
            i += len(hit)
            continue
        if c in "~-&|()":
            toks.append(("op", c, i))
            i += 1
            continue
        if c in "01":
            if i + 1 < n and (text[i + 1].isalnum() or text[i + 1] == "_"):
                raise BDSyntaxError("unexpected digit run", i)
            toks.append(("const", c, i))
            i += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in ("Pr", "B", "Pl") and j < n and text[j] == "[":
                k = text.find("]", j)
                if k < 0:
                    raise BDSyntaxError("unterminated modal bracket", j)
                toks.append(("modal", (word, text[j + 1:k]), i))
                i = k + 1
                continue
            toks.append(("ident", word, i))
            i = j
            continue
        raise BDSyntaxError("unexpected character %r" % c, i)
    toks.append(("end", None, n))
    return toks


def parse_outer(text: str, logic: str, signature=None,
                with_constants: bool = False) -> OuterFormula:
    """Parse the outer grammar under the given logic tag.

    `-` is the swap negation, `~` the coordinate negation; `->` is the L2
    arrow, `~>`/`=>`/`<=>` belong to NL, `<->` is available in both (it is
    only a weak equivalence in NL).  Bracketed atoms Pr[...], B[...], Pl[...]
    carry an inner formula parsed with constants allowed; the outer constants
    0/1 are gated by with_constants.  A signature, when given, restricts the
    plain atom names.
    """
    if logic not in (L2, NL):
        raise ValueError("unknown logic tag %r" % (logic,))
    toks = _olex(text)
    pos = [0]
    sig = frozenset(signature) if signature is not None else None

    def peek():
        return toks[pos[0]]

    def take():
        t = toks[pos[0]]
        pos[0] += 1
        return t

    def impterm():
        left = addterm()
        tag, val, p = peek()
        if tag == "op" and val in ("->", "~>", "=>", "<->", "<=>"):
            take()
            right = impterm()
            if val == "->":
                if logic != L2:
                    raise BDSyntaxError("'->' is the L2 arrow; NL uses '~>'", p)
                return OImp(left, right)
            if val == "~>":
                if logic != NL:
                    raise BDSyntaxError("'~>' is the NL arrow; L2 uses '->'", p)
                return OWimp(left, right)
            if val == "<->":
                return OIff(left, right)
            if logic != NL:
                raise BDSyntaxError("%r only exists in NL" % val, p)
            return OSimp(left, right) if val == "=>" else OSiff(left, right)
        return left

    def addterm():
        out = multerm()
        while True:
            tag, val, _ = peek()
            if tag == "op" and val in ("|", "(+)", "(-)"):
                take()
                rhs = multerm()
                if val == "|":
                    out = OOr(out, rhs)
                elif val == "(+)":
                    out = OPlus(out, rhs)
                else:
                    out = OMinus(out, rhs)
            else:
                return out

    def multerm():
        out = prefix()
        while True:
            tag, val, _ = peek()
            if tag == "op" and val in ("&", "&."):
                take()
                rhs = prefix()
                out = OAnd(out, rhs) if val == "&" else OFuse(out, rhs)
            else:
                return out

    def prefix():
        tag, val, _ = peek()
        if tag == "op" and val in ("~", "-"):
            take()
            return OSnot(prefix()) if val == "~" else ONot(prefix())
        if tag == "ident" and val in ("D", "Dt"):
            take()
            return ODelta(prefix()) if val == "D" else ODtop(prefix())
        return base()

    def base():
        tag, val, p = take()
        if tag == "op" and val == "(":
            out = impterm()
            t2, v2, p2 = take()
            if not (t2 == "op" and v2 == ")"):
                raise BDSyntaxError("expected ')'", p2)
            return out
        if tag == "const":
            if not with_constants:
                raise BDSyntaxError("constants 0/1 not allowed here", p)
            return OTop(logic) if val == "1" else OBot(logic)
        if tag == "ident":
            if sig is not None and val not in sig:
                raise UnknownVariableError("unknown atom %r" % val)
            return OAtom(logic, val)
        if tag == "modal":
            mod, inner_text = val
            inner = bd_core.parse_bd(inner_text, None, with_constants=True)
            return OAtom(logic, (mod, inner))
        raise BDSyntaxError("unexpected token", p)

    out = impterm()
    tag, _, p = peek()
    if tag != "end":
        raise BDSyntaxError("trailing input", p)
    return out


# ---------------------------------------------------------------------------
# evaluation

def _mk(first, second) -> TwoPoint:
    # trusted constructor for _apply: the connective arithmetic only ever
    # produces unit Fractions, so the boundary validation is skipped
    t = object.__new__(TwoPoint)
    object.__setattr__(t, "first", first)
    object.__setattr__(t, "second", second)
    return t


def _apply(logic, kind, vs) -> TwoPoint:
    if kind == _NOT:
        (a,) = vs
        return _mk(a.second, a.first)
    if kind == _SNOT:
        (a,) = vs
        if logic == L2:
            return _mk(1 - a.first, 1 - a.second)
        return _mk(1 - a.first, a.first)
    if kind == _DELTA:
        (a,) = vs
        return _mk(l_delta(a.first), _Q0 if a.second == 0 else _Q1)
    if kind == _DTOP:
        (a,) = vs
        if logic == L2:
            return POINT_TRUE if a == POINT_TRUE else POINT_FALSE
        d1 = l_delta(a.first)
        d2 = _Q0 if a.second == 0 else _Q1
        return _mk(min(d1, 1 - d2), d2)
    a, b = vs
    if kind == _AND:
        return _mk(min(a.first, b.first), max(a.second, b.second))
    if kind == _OR:
        return _mk(max(a.first, b.first), min(a.second, b.second))
    if kind == _IMP:
        return _mk(l_imp(a.first, b.first), l_minus(b.second, a.second))
    if kind == _WIMP:
        return _mk(l_imp(a.first, b.first), l_fuse(a.first, b.second))
    if kind == _FUSE:
        if logic == L2:
            return _mk(l_fuse(a.first, b.first), l_plus(a.second, b.second))
        return _mk(l_fuse(a.first, b.first), l_imp(a.first, 1 - b.first))
    if kind == _PLUS:
        if logic == L2:
            return _mk(l_plus(a.first, b.first), l_fuse(a.second, b.second))
        return _mk(l_plus(a.first, b.first), l_fuse(1 - a.first, b.second))
    if kind == _MINUS:
        if logic == L2:
            return _mk(l_minus(a.first, b.first), l_imp(b.second, a.second))
        return _mk(l_minus(a.first, b.first), l_imp(a.first, b.first))
    if kind == _IFF:
        if logic == L2:
            return _mk(1 - abs(a.first - b.first), abs(a.second - b.second))
        return _mk(1 - abs(a.first - b.first),
                        max(l_fuse(a.first, b.second), l_fuse(b.first, a.second)))
    if kind == _SIMP:
        return _mk(min(l_imp(a.first, b.first), l_imp(b.second, a.second)),
                        l_fuse(a.first, b.second))
    if kind == _SIFF:
        return _mk(min(1 - abs(a.first - b.first), 1 - abs(a.second - b.second)),
                        max(l_fuse(a.first, b.second), l_fuse(b.first, a.second)))
    raise AssertionError("unknown kind %r" % kind)


def eval(v, alpha: OuterFormula) -> TwoPoint:
    """Evaluate alpha under the valuation v (a map atom payload -> TwoPoint,
    pairs and rational strings are coerced).  Shared subterms are computed
    once per call."""
    cache: dict = {}

    def go(f):
        out = cache.get(id(f))
        if out is not None:
            return out
        k = f.kind
        if k == _ATOM:
            try:
                raw = v[f.payload]
            except KeyError:
                raise UnknownVariableError(
                    "no value for atom %s" % payload_str(f.payload)) from None
            out = as_twopoint(raw)
        elif k == _TOPC:
            out = POINT_TRUE
        elif k == _BOTC:
            out = POINT_FALSE
        else:
            out = _apply(f.logic, k, tuple(go(a) for a in f.args))
        cache[id(f)] = out
        return out

    return go(alpha)


def designated(x: TwoPoint, logic: str) -> bool:
    """L2 designates exactly (1,0); NL designates the filter first = 1."""
    if logic == L2:
        return x == POINT_TRUE
    if logic == NL:
        return x.first == 1
    raise ValueError("unknown logic tag %r" % (logic,))


# ---------------------------------------------------------------------------
# expansion to primitives and negation normal form

def expand(f: OuterFormula) -> OuterFormula:
    """Rewrite every derived connective to the primitive language
    (L2: ->, ~, -, D;  NL: &, ~>, ~, -, with D carried along)."""
    memo: dict = {}

    def go(g):
        out = memo.get(id(g))
        if out is not None:
            return out
        k = g.kind
        if k in (_ATOM, _TOPC, _BOTC):
            out = g
        else:
            args = [go(a) for a in g.args]
            out = _expand_node(g.logic, k, args)
        memo[id(g)] = out
        return out

    return go(f)


def _expand_node(logic, k, args):
    if logic == L2:
        if k in (_NOT, _SNOT, _IMP, _DELTA):
            return OuterFormula(logic, k, args=tuple(args))
        x = args[0]
        y = args[-1]
        if k == _FUSE:
            return OSnot(OImp(x, OSnot(y)))
        if k == _PLUS:
            return OImp(OSnot(x), y)
        if k == _MINUS:
            return OSnot(OImp(x, y))
        if k == _AND:
            # x & y = (x -> y) &. x
            return OSnot(OImp(OImp(x, y), OSnot(x)))
        if k == _OR:
            return OImp(OImp(x, y), y)
        if k == _IFF:
            # (x -> y) &. (y -> x)
            return OSnot(OImp(OImp(x, y), OSnot(OImp(y, x))))
        if k == _DTOP:
            d = ODelta(x)
            c = OSnot(ONot(d))
            return OSnot(OImp(OImp(d, c), OSnot(d)))
        raise AssertionError("kind %r not in the L2 language" % k)
    if k in (_NOT, _SNOT, _WIMP, _AND, _DELTA):
        return OuterFormula(logic, k, args=tuple(args))
    x = args[0]
    y = args[-1]
    if k == _FUSE:
        return OSnot(OWimp(x, OSnot(y)))
    if k == _PLUS:
        return OWimp(OSnot(x), y)
    if k == _MINUS:
        return OSnot(OWimp(x, y))
    if k == _OR:
        return ONot(OAnd(ONot(x), ONot(y)))
    if k == _IFF:
        return OAnd(OWimp(x, y), OWimp(y, x))
    if k == _SIMP:
        return OAnd(OWimp(x, y), OWimp(ONot(y), ONot(x)))
    if k == _SIFF:
        return OAnd(OAnd(OWimp(x, y), OWimp(y, x)),
                    OAnd(OWimp(ONot(x), ONot(y)), OWimp(ONot(y), ONot(x))))
    if k == _DTOP:
        d = ODelta(x)
        return OAnd(d, OSnot(ONot(d)))
    raise AssertionError("kind %r not in the NL language" % k)


def nnf(alpha: OuterFormula) -> OuterFormula:
    """Push - down to atoms (after expanding derived connectives).

    L2 uses  --x = x,  -~x = ~-x,  -(x -> y) = ~(~-x -> ~-y)  and
    -D x = ~D ~-x; all four are exact, so the result evaluates identically.
    NL uses  --x = x,  -(x & y) = -x | -y  (exact) together with the weak
    rewrites  -~x ~ x,  -(x ~> y) ~ x &. -y  and  -D x ~ ~D ~-x, which are
    only guaranteed to preserve the first coordinate.
    """
    alpha = expand(alpha)
    logic = alpha.logic

    def push(f, neg):
        k = f.kind
        if k == _ATOM:
            return ONot(f) if neg else f
        if k == _TOPC:
            return OBot(logic) if neg else f
        if k == _BOTC:
            return OTop(logic) if neg else f
        if k == _NOT:
            return push(f.args[0], not neg)
        if k == _SNOT:
            if not neg:
                return OSnot(push(f.args[0], False))
            if logic == L2:
                return OSnot(push(f.args[0], True))
            return push(f.args[0], False)
        if k == _DELTA:
            if not neg:
                return ODelta(push(f.args[0], False))
            return OSnot(ODelta(OSnot(push(f.args[0], True))))
        if k == _IMP:
            a, b = f.args
            if not neg:
                return OImp(push(a, False), push(b, False))
            return OSnot(OImp(OSnot(push(a, True)), OSnot(push(b, True))))
        if k == _WIMP:
            a, b = f.args
            if not neg:
                return OWimp(push(a, False), push(b, False))
            return OFuse(push(a, False), push(b, True))
        if k == _AND:
            a, b = f.args
            if not neg:
                return OAnd(push(a, False), push(b, False))
            return OOr(push(a, True), push(b, True))
        raise AssertionError("unreachable kind %r after expansion" % k)

    return push(alpha, False)


def is_nnf(f: OuterFormula) -> bool:
    """True when - occurs only immediately above atoms."""
    if f.kind == _NOT:
        return f.args[0].kind == _ATOM
    return all(is_nnf(a) for a in f.args)


# ---------------------------------------------------------------------------
# classification of values

def classify(v: TwoPoint) -> str:
    """classical / incomplete / contradictory according as first + second
    compares to 1.  Matches the object-language tests: Dt(p <-> ~-p) comes
    out (1,0) exactly on the classical line, and for points off the line the
    first coordinate of D(p -> ~-p) is 1 on the incomplete side, 0 on the
    contradictory side."""
    s = v.first + v.second
    if s == 1:
        return "classical"
    return "incomplete" if s < 1 else "contradictory"


# ---------------------------------------------------------------------------
# random generators (tests and the falsification search share these)

def random_valuation(rng, atoms, max_den: int = 12) -> dict:
    out = {}
    for a in atoms:
        d1 = rng.randint(1, max_den)
        d2 = rng.randint(1, max_den)
        out[a] = TwoPoint(Fraction(rng.randint(0, d1), d1),
                          Fraction(rng.randint(0, d2), d2))
    return out


def random_outer(rng, logic, atoms, depth: int = 3) -> OuterFormula:
    """Random outer formula over plain atoms, drawn with the caller's rng."""
    if depth <= 0 or rng.random() < 0.2:
        return OAtom(logic, rng.choice(list(atoms)))
    roll = rng.random()
    if roll < 0.35:
        op = rng.choice((ONot, OSnot, ODelta, ODtop))
        return op(random_outer(rng, logic, atoms, depth - 1))
    if logic == L2:
        op = rng.choice((OImp, OAnd, OOr, OFuse, OPlus, OMinus, OIff))
    else:
        op = rng.choice((OWimp, OAnd, OOr, OFuse, OPlus, OMinus, OIff,
                         OSimp, OSiff))
    a = random_outer(rng, logic, atoms, depth - 1)
    b = random_outer(rng, logic, atoms, depth - 1)
    return op(a, b)


# ---------------------------------------------------------------------------
# falsification search (semi-decision)

def _farey(limit: int):
    return sorted({Fraction(i, q) for q in range(1, limit + 1)
                   for i in range(q + 1)})


def falsify(premises, alpha: OuterFormula, logic=None, denominators: int = 6,
            samples: int = 2000, rng=None, grid_cap: int = 20000):
    """Search for a valuation designating every premise but not alpha.

    Phase one sweeps a grid of coordinate values with denominators up to
    `denominators` (shrunk automatically when the atom count would make the
    grid blow past grid_cap points); phase two draws `samples` random
    rational valuations.  Everything is exact arithmetic and any hit is
    re-checked before being returned, so a returned valuation is a genuine
    countervaluation; None only means none was found within the budget.
    """
    premises = list(premises)
    tags = {g.logic for g in premises + [alpha]}
    if len(tags) != 1:
        raise ValueError("premises and conclusion mix logic tags")
    tag = tags.pop()
    if logic is not None and logic != tag:
        raise ValueError("formulas are tagged %s, not %s" % (tag, logic))

    atom_set = set(outer_atoms(alpha))
    for g in premises:
        atom_set.update(outer_atoms(g))
    atoms = sorted(atom_set, key=_payload_key)

    def refutes(v):
        if any(not designated(eval(v, g), tag) for g in premises):
            return False
        return not designated(eval(v, alpha), tag)

    def confirmed(v):
        assert refutes(v), "internal error: countervaluation fails re-check"
        return v

    d = max(1, denominators)
    while d > 1 and (len(_farey(d)) ** 2) ** len(atoms) > grid_cap:
        d -= 1
    grid = _farey(d)
    pairs = [TwoPoint(x, y) for x in grid for y in grid]
    for seen, combo in enumerate(itertools.product(pairs, repeat=len(atoms))):
        if seen >= grid_cap:
            break
        v = dict(zip(atoms, combo))
        if refutes(v):
            return confirmed(v)

    rng = rng if rng is not None else random.Random(20250818)
    for _ in range(samples):
        v = random_valuation(rng, atoms)
        if refutes(v):
            return confirmed(v)
    return None


# ---------------------------------------------------------------------------
# Hilbert-style axiom suites and their random check

def axiom_suite(logic):
    """Named instances (over atoms a, b, c) of the axioms of the respective
    calculus.  Every instance should evaluate designated under every
    valuation; check_axioms samples that claim."""
    if logic == L2:
        raw = [
            ("w", "a -> (b -> a)"),
            ("sf", "(a -> b) -> ((b -> c) -> (a -> c))"),
            ("waj", "((a -> b) -> b) -> ((b -> a) -> a)"),
            ("co", "(~b -> ~a) -> (a -> b)"),
            ("dn-", "--a <-> a"),
            ("-~", "-~a <-> ~-a"),
            ("K~-", "(~-a -> ~-b) <-> ~-(a -> b)"),
            ("or", "(a | b) <-> ((a -> b) -> b)"),
            ("D1", "D a | ~D a"),
            ("D2", "D a -> a"),
            ("D3", "D a -> D D a"),
            ("D4", "D (a | b) -> (D a | D b)"),
            ("D5", "D (a -> b) -> (D a -> D b)"),
            ("-D", "-D a <-> ~D ~-a"),
        ]
    elif logic == NL:
        raw = [
            ("w", "a ~> (b ~> a)"),
            ("sf", "(a ~> b) ~> ((b ~> c) ~> (a ~> c))"),
            ("waj", "((a ~> b) ~> b) ~> ((b ~> a) ~> a)"),
            ("co", "(~b ~> ~a) ~> (a ~> b)"),
            ("dn-", "--a <=> a"),
            ("-~>", "-(a ~> b) <-> (a &. -b)"),
            ("or", "((a ~> b) ~> b) <-> (a | b)"),
            ("fuse", "(a &. b) <=> ~(a ~> ~b)"),
            ("meet", "(a & b) <-> ((a ~> b) &. a)"),
            ("-meet", "-(a & b) <=> (-a | -b)"),
            ("-join", "-(a | b) <=> (-a & -b)"),
            ("-~", "-~a <-> a"),
        ]
    else:
        raise ValueError("unknown logic tag %r" % (logic,))
    return [(name, parse_outer(s, logic)) for name, s in raw]


def _designated_case(rng, logic):
    """A (valuation, formula) pair with the formula designated, or None.
    Half the draws force an atomic case so the rules are always exercised."""
    atoms = ("a", "b", "c")
    v = random_valuation(rng, atoms)
    if rng.random() < 0.5:
        f = OAtom(logic, "a")
        v["a"] = POINT_TRUE if logic == L2 else TwoPoint(1, v["a"].second)
    else:
        f = random_outer(rng, logic, atoms, depth=2)
    if not designated(eval(v, f), logic):
        return None
    return v, f


def check_axioms(logic, samples: int = 1000, rng=None) -> dict:
    """Sample every axiom on random valuations, and the rules on cases whose
    premises came out designated.  Returns {name: {instances, violations}};
    for a sound calculus every violation list is empty."""
    rng = rng if rng is not None else random.Random(20250818)
    atoms = ("a", "b", "c")
    report = {}
    for name, form in axiom_suite(logic):
        bad = []
        for _ in range(samples):
            v = random_valuation(rng, atoms)
            if not designated(eval(v, form), logic):
                bad.append({payload_str(a): str(x) for a, x in v.items()})
        report[name] = {"instances": samples, "violations": bad}

    arrow = OImp if logic == L2 else OWimp
    mp_hits, mp_bad = 0, []
    for _ in range(samples):
        case = _designated_case(rng, logic)
        if case is None:
            continue
        v, f = case
        other = random_outer(rng, logic, atoms, depth=2)
        concl = OOr(f, other) if rng.random() < 0.5 else other
        prem = arrow(f, concl)
        if not designated(eval(v, prem), logic):
            continue
        mp_hits += 1
        if not designated(eval(v, concl), logic):
            mp_bad.append({payload_str(a): str(x) for a, x in v.items()})
    report["MP"] = {"instances": mp_hits, "violations": mp_bad}

    if logic == L2:
        for name, wrap in (("Nec", ODelta), ("Conf", lambda g: OSnot(ONot(g)))):
            hits, bad = 0, []
            for _ in range(samples):
                case = _designated_case(rng, logic)
                if case is None:
                    continue
                v, f = case
                hits += 1
                if not designated(eval(v, wrap(f)), logic):
                    bad.append({payload_str(a): str(x) for a, x in v.items()})
            report[name] = {"instances": hits, "violations": bad}
    return report
