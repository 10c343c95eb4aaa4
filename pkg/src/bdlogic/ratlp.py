"""Exact rational linear feasibility, strict inequalities included.

Systems are lists of constraints  c . x  REL  b  with REL one of
>=, >, =, <=, <  and rational data.  Strict relations are reduced to weak
ones through a single shared gap variable:  e > b  becomes  e >= b + delta,
and delta is maximized subject to 0 <= delta <= 1.  A rational polytope
contains points with e - b bounded away from zero iff the optimum has
delta > 0, so the reduction is sound and complete (the cap at 1 merely
keeps the auxiliary program bounded).

The engine is a two-phase dense simplex over Fractions with Bland's rule,
hence terminating and deterministic: identical systems yield identical
witnesses, and every witness is re-checked by exact substitution against
the original, pre-rewrite system before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lattice_measures import Q, ZERO, ONE

RELATIONS = (">=", ">", "=", "<=", "<")


class LinearSystem:
    """Immutable; variables fixed up front, one coefficient per variable."""

    def __init__(self, variables, constraints=()):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variables")
        rows = []
        for coeffs, rel, bound in constraints:
            coeffs = tuple(Q(c) for c in coeffs)
            if len(coeffs) != len(self.variables):
                raise ValueError("coefficient vector length mismatch")
            if rel not in RELATIONS:
                raise ValueError("unknown relation %r" % rel)
            rows.append((coeffs, rel, Q(bound)))
        self.constraints = tuple(rows)

    def evaluate(self, assignment):
        """Exact truth of every constraint under variable -> rational."""
        point = [Q(assignment[v]) for v in self.variables]
        for coeffs, rel, bound in self.constraints:
            lhs = sum((c * x for c, x in zip(coeffs, point)), ZERO)
            ok = {
                ">=": lhs >= bound,
                ">": lhs > bound,
                "=": lhs == bound,
                "<=": lhs <= bound,
                "<": lhs < bound,
            }[rel]
            if not ok:
                return False
        return True


@dataclass(frozen=True)
class Feasible:
    witness: dict

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Infeasible:
    def __bool__(self):
        return False


def solve(sys: LinearSystem, trace: bool = False, nonneg: bool = False):
    """Feasible(witness) or Infeasible().

    With nonneg=True every variable is constrained to be >= 0 implicitly
    (one simplex column per variable, no sign split); callers whose
    unknowns are masses should prefer this mode, it keeps the tableau
    small instead of adding a nonnegativity row per variable.
    """
    n_orig = len(sys.variables)
    has_strict = any(rel in (">", "<") for _, rel, _ in sys.constraints)

    # columns: x+ / x- pairs for the free variables (a single column each
    # when nonneg), then delta, then slacks
    base = n_orig if nonneg else 2 * n_orig
    cols = base + (1 if has_strict else 0)
    delta_col = base if has_strict else None
    rows = []          # (dense coefficient list, rhs) equalities
    for coeffs, rel, bound in sys.constraints:
        row = [ZERO] * cols
        for i, c in enumerate(coeffs):
            if nonneg:
                row[i] = c
            else:
                row[2 * i] = c
                row[2 * i + 1] = -c
        rhs = bound
        if rel == ">":
            row[delta_col] = -ONE
            rel = ">="
        elif rel == "<":
            row[delta_col] = ONE
            rel = "<="
        rows.append((row, rel, rhs))
    if has_strict:
        row = [ZERO] * cols
        row[delta_col] = ONE
        rows.append((row, "<=", ONE))

    # slacks turn everything into equalities with nonnegative columns
    n_slack = sum(1 for _, rel, _ in rows if rel != "=")
    width = cols + n_slack
    tableau = []
    s = 0
    for row, rel, rhs in rows:
        full = list(row) + [ZERO] * n_slack
        if rel == ">=":
            full[cols + s] = -ONE
            s += 1
        elif rel == "<=":
            full[cols + s] = ONE
            s += 1
        if rhs < 0:
            full = [-c for c in full]
            rhs = -rhs
        tableau.append((full, rhs))

    m = len(tableau)
    total = width + m  # artificials at the end
    matrix = []
    basis = []
    for i, (full, rhs) in enumerate(tableau):
        r = full + [ZERO] * m + [rhs]
        r[width + i] = ONE
        matrix.append(r)
        basis.append(width + i)

    def pivot(r, c):
        piv = matrix[r][c]
        matrix[r] = [v / piv for v in matrix[r]]
        for i in range(m):
            if i != r and matrix[i][c] != 0:
                f = matrix[i][c]
                matrix[i] = [a - f * b for a, b in zip(matrix[i], matrix[r])]
        basis[r] = c
        if trace:
            print("pivot r=%d c=%d" % (r, c))

    def run_simplex(cost):
        # minimize cost . columns with Bland's rule; artificial columns are
        # never allowed to re-enter once nonbasic (entering scan stops at
        # `width`), otherwise the delta phase could wreck feasibility
        while True:
            # reduced costs
            red = list(cost)
            for i, b in enumerate(basis):
                cb = cost[b]
                if cb != 0:
                    row = matrix[i]
                    for j in range(width):
                        if row[j] != 0:
                            red[j] -= cb * row[j]
            enter = next((j for j in range(width) if red[j] < 0), None)
            if enter is None:
                return
            best = None
            for i in range(m):
                a = matrix[i][enter]
                if a > 0:
                    ratio = matrix[i][-1] / a
                    if best is None or ratio < best[0] or \
                            (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                # unbounded in a minimization of a bounded objective can only
                # happen for the delta phase if the cap row were missing
                raise ArithmeticError("unbounded objective")
            pivot(best[1], enter)

    # phase 1: drive out the artificials
    cost1 = [ZERO] * total
    for j in range(width, total):
        cost1[j] = ONE
    run_simplex(cost1)
    value = sum((matrix[i][-1] for i in range(m) if basis[i] >= width), ZERO)
    if value != 0:
        return Infeasible()
    for i in range(m):
        if basis[i] >= width:
            c = next((j for j in range(width) if matrix[i][j] != 0), None)
            if c is not None:
                pivot(i, c)
            # else: redundant row; its artificial stays basic at zero

    if has_strict:
        cost2 = [ZERO] * total
        cost2[delta_col] = -ONE  # maximize delta
        run_simplex(cost2)

    values = [ZERO] * width
    for i, b in enumerate(basis):
        if b < width:
            values[b] = matrix[i][-1]
    if has_strict and values[delta_col] <= 0:
        return Infeasible()
    if nonneg:
        witness = {v: values[i] for i, v in enumerate(sys.variables)}
    else:
        witness = {v: values[2 * i] - values[2 * i + 1]
                   for i, v in enumerate(sys.variables)}
    if not sys.evaluate(witness):
        raise AssertionError("internal error: witness fails re-validation")
    return Feasible(witness)
