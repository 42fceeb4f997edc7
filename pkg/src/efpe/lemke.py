"""Complementary pivoting for linear complementarity problems.

Solves w = M z + b, w >= 0, z >= 0, z'w = 0 over exact rationals with the
classic covering-vector scheme: an artificial column of ones is driven in to
restore feasibility, pivots then follow the almost-complementary path (the
complement of whatever just left enters next) until the artificial variable
leaves. Ties in the ratio test are broken lexicographically, which rules out
cycling, with one exception: when the artificial variable's row ties for the
minimum ratio it is always chosen, because that pivot ends the run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import PivotBudgetError, RayTerminationError

Var = Tuple

Z0: Var = ("z0",)


def complement(var: Var) -> Var:
    if var[0] == "w":
        return ("z", var[1])
    if var[0] == "z":
        return ("w", var[1])
    raise ValueError("the artificial variable has no complement")


def var_name(var: Var) -> str:
    if var == Z0:
        return "z0"
    return "%s[%d]" % (var[0], var[1])


@dataclass
class LemkeResult:
    """Solution of an LCP together with the basis that produced it."""

    z: List[Fraction]
    w: List[Fraction]
    basis: Tuple[Var, ...]
    pivots: int
    trace: Optional[List[str]] = None


def check_lemke_preconditions(lcp) -> Tuple[bool, List[str]]:
    """Check the structural condition guaranteeing pivoting terminates.

    The quadratic form z'M(eps)z of an assembled instance reduces to
    -r1~'(R1^-T (U1 + U2) R2^-1) r2~, so M is copositive on the positive
    orthant whenever U1 + U2 <= 0 entrywise. That always holds after the
    negative payoff shift; a violation means the shift was skipped.
    """
    problems: List[str] = []
    u1, u2 = lcp.sf.U
    for (i1, i2) in sorted(lcp.sf.terminal_pairs):
        total = u1[i1][i2] + u2[i1][i2]
        if total > 0:
            problems.append(
                "payoff sum %s at sequence pair (%d, %d) is positive; "
                "apply the negative offset first" % (total, i1, i2)
            )
    return not problems, problems


def lemke_solve(
    m: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
    max_pivots: int = 2**20,
    want_trace: bool = False,
) -> LemkeResult:
    """Run the covering-vector pivoting scheme on a numeric LCP.

    Exact throughout; deterministic. Raises RayTerminationError when the
    almost-complementary path leaves on a ray (no admissible row) and
    PivotBudgetError when max_pivots is exceeded.
    """
    n = len(b)
    if any(len(row) != n for row in m) or len(m) != n:
        raise ValueError("matrix shape does not match the right-hand side")
    b = [Fraction(x) for x in b]
    trace: Optional[List[str]] = [] if want_trace else None

    if all(x >= 0 for x in b):
        zero = [Fraction(0)] * n
        return LemkeResult(
            z=zero,
            w=list(b),
            basis=tuple(("w", i) for i in range(n)),
            pivots=0,
            trace=trace,
        )

    # Basis bookkeeping: basis[r] names the variable basic in row r, binv is
    # the exact inverse of the corresponding column matrix, xb = binv b.
    basis: List[Var] = [("w", i) for i in range(n)]
    binv: List[List[Fraction]] = [
        [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)
    ]
    xb: List[Fraction] = list(b)

    def column_of(var: Var) -> List[Fraction]:
        # w = b + d z0 + M z rearranged as I w - M z - d z0 = b.
        if var == Z0:
            return [Fraction(-1)] * n
        kind, idx = var
        if kind == "w":
            return [Fraction(1 if i == idx else 0) for i in range(n)]
        return [-m[i][idx] for i in range(n)]

    def pivot(r: int, direction: List[Fraction], entering: Var) -> Var:
        p = direction[r]
        inv_r = binv[r]
        for j in range(n):
            inv_r[j] /= p
        xb[r] /= p
        for i in range(n):
            if i == r:
                continue
            factor = direction[i]
            if factor:
                row = binv[i]
                for j in range(n):
                    if inv_r[j]:
                        row[j] -= factor * inv_r[j]
                xb[i] -= factor * xb[r]
        leaving = basis[r]
        basis[r] = entering
        return leaving

    def lex_less(i: int, j: int, direction: List[Fraction]) -> bool:
        # Compare (xb | binv)_i / v_i against row j by cross-multiplication.
        vi, vj = direction[i], direction[j]
        lhs, rhs = xb[i] * vj, xb[j] * vi
        if lhs != rhs:
            return lhs < rhs
        for col in range(n):
            lhs, rhs = binv[i][col] * vj, binv[j][col] * vi
            if lhs != rhs:
                return lhs < rhs
        return False

    # Initial pivot: the covering variable enters where b is most negative
    # (largest row index among exact ties, matching the lexicographic view).
    r0 = 0
    for i in range(1, n):
        if xb[i] <= xb[r0]:
            r0 = i
    direction = column_of(Z0)
    # Entering direction is -d, so the pivot formulas need its negation per
    # row handled implicitly: pivot() divides by direction[r], which is -1,
    # and the updates are sign-correct as written.
    leaving = pivot(r0, direction, Z0)
    pivots = 1
    if trace is not None:
        trace.append("pivot 1: z0 enters, %s leaves row %d" % (var_name(leaving), r0))

    entering = complement(leaving)
    while True:
        if pivots >= max_pivots:
            raise PivotBudgetError(
                "no solution after %d pivots; raise the budget" % pivots
            )
        col = column_of(entering)
        direction = [
            sum(binv[i][j] * col[j] for j in range(n) if col[j]) for i in range(n)
        ]
        candidates = [i for i in range(n) if direction[i] > 0]
        if not candidates:
            raise RayTerminationError(
                "unbounded ray while bringing in %s; the matrix lacks the "
                "structure pivoting relies on" % var_name(entering)
            )
        best = candidates[0]
        for i in candidates[1:]:
            if xb[i] * direction[best] < xb[best] * direction[i]:
                best = i
        ties = [
            i
            for i in candidates
            if xb[i] * direction[best] == xb[best] * direction[i]
        ]
        z0_row = next((i for i in ties if basis[i] == Z0), None)
        if z0_row is not None:
            r = z0_row
        else:
            r = ties[0]
            for i in ties[1:]:
                if lex_less(i, r, direction):
                    r = i
        leaving = pivot(r, direction, entering)
        pivots += 1
        if trace is not None:
            trace.append(
                "pivot %d: %s enters, %s leaves row %d"
                % (pivots, var_name(entering), var_name(leaving), r)
            )
        if leaving == Z0:
            break
        entering = complement(leaving)

    z = [Fraction(0)] * n
    w = [Fraction(0)] * n
    for var, value in zip(basis, xb):
        if var[0] == "z":
            z[var[1]] = value
        else:
            w[var[1]] = value
    return LemkeResult(z=z, w=w, basis=tuple(basis), pivots=pivots, trace=trace)
