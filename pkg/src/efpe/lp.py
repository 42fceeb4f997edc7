"""Zero-sum games: exact linear programming on the perturbed sequence form.

When the two payoff entries sum to zero at every leaf, the perturbed game
is solved by one LP instead of pivoting on the full complementarity system:
maximize f2'v2 subject to F2~' v2 <= U1~' r1~, F1~ r1~ = f1, r1~ >= 0, where
the tilde matrices fold the tremble floors in. Player 2's plan comes out of
the dual. The optimal basis found at a numeric eps is then certified
symbolically: if every basic value and every reduced cost keeps its sign on
all of (0, eps], the same basis describes the whole perturbed family and its
limit at eps -> 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

from .errors import SolverError
from .games import Decision, Game, Terminal
from .poly import ONE, Poly, integer_rational_sign
from .polymatrix import PolyMatrix, polymatrix_solve_raw, solve_linear_system
from .seqform import SequenceForm


def is_zero_sum(game: Game) -> Tuple[bool, Optional[str]]:
    """Whether the two payoffs sum to zero at every leaf.

    Returns (True, None) or (False, witness) where the witness names the
    first offending leaf by its action path from the root.
    """

    def walk(node, path: Tuple[str, ...]) -> Optional[str]:
        if isinstance(node, Terminal):
            total = node.payoffs[0] + node.payoffs[1]
            if total != 0:
                where = "/".join(path) if path else "the root"
                return "payoffs (%s, %s) at leaf %s sum to %s" % (
                    node.payoffs[0],
                    node.payoffs[1],
                    where,
                    total,
                )
            return None
        assert isinstance(node, Decision)
        for action, child in zip(node.actions, node.children):
            found = walk(child, path + (action,))
            if found:
                return found
        return None

    witness = walk(game.root, ())
    return witness is None, witness


# ---------------------------------------------------------------------------
# Exact two-phase simplex, Bland's rule throughout.


@dataclass
class SimplexResult:
    x: List[Fraction]
    basis: List[int]
    objective: Fraction


def _do_pivot(
    tableau: List[List[Fraction]],
    z_row: List[Fraction],
    basis: List[int],
    row: int,
    col: int,
) -> None:
    width = len(z_row)
    prow = tableau[row]
    p = prow[col]
    for j in range(width):
        prow[j] /= p
    for r, other in enumerate(tableau):
        if r == row or not other[col]:
            continue
        f = other[col]
        for j in range(width):
            if prow[j]:
                other[j] -= f * prow[j]
    f = z_row[col]
    if f:
        for j in range(width):
            if prow[j]:
                z_row[j] -= f * prow[j]
    basis[row] = col


def _cost_row(
    tableau: List[List[Fraction]], basis: List[int], costs: List[Fraction]
) -> List[Fraction]:
    width = len(tableau[0])
    z = [
        (costs[j] if j < len(costs) else Fraction(0)) for j in range(width - 1)
    ] + [Fraction(0)]
    for r, bv in enumerate(basis):
        cb = costs[bv] if bv < len(costs) else Fraction(0)
        if cb:
            row = tableau[r]
            for j in range(width):
                if row[j]:
                    z[j] -= cb * row[j]
    return z


def _pivot_until_optimal(
    tableau: List[List[Fraction]],
    z_row: List[Fraction],
    basis: List[int],
    eligible: int,
) -> None:
    """Bland's rule: lowest eligible column with a negative reduced cost
    enters; among minimum-ratio rows the lowest basic variable leaves."""
    nrows = len(tableau)
    while True:
        enter = next((j for j in range(eligible) if z_row[j] < 0), None)
        if enter is None:
            return
        leave = None
        for r in range(nrows):
            a = tableau[r][enter]
            if a <= 0:
                continue
            if leave is None:
                leave = r
                continue
            lhs = tableau[r][-1] * tableau[leave][enter]
            rhs = tableau[leave][-1] * a
            if lhs < rhs or (lhs == rhs and basis[r] < basis[leave]):
                leave = r
        if leave is None:
            raise SolverError("linear program is unbounded")
        _do_pivot(tableau, z_row, basis, leave, enter)


def simplex_min(
    a: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
    c: Sequence[Fraction],
) -> SimplexResult:
    """Minimize c'x subject to Ax = b, x >= 0, exactly.

    Two phases with artificial variables; Bland's rule guarantees
    termination. Raises SolverError when infeasible or unbounded.
    """
    nrows = len(a)
    ncols = len(c)
    tableau: List[List[Fraction]] = []
    for i in range(nrows):
        row = [Fraction(x) for x in a[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        row.extend(Fraction(1 if k == i else 0) for k in range(nrows))
        row.append(rhs)
        tableau.append(row)
    basis = [ncols + i for i in range(nrows)]

    phase1 = [Fraction(0)] * ncols + [Fraction(1)] * nrows
    z_row = _cost_row(tableau, basis, phase1)
    _pivot_until_optimal(tableau, z_row, basis, ncols + nrows)
    if z_row[-1] != 0:
        raise SolverError("linear program is infeasible")
    for r in range(nrows):
        if basis[r] < ncols:
            continue
        col = next((j for j in range(ncols) if tableau[r][j]), None)
        if col is None:
            raise SolverError("redundant constraint row %d" % r)
        _do_pivot(tableau, z_row, basis, r, col)

    costs = [Fraction(x) for x in c]
    z_row = _cost_row(tableau, basis, costs)
    _pivot_until_optimal(tableau, z_row, basis, ncols)

    x = [Fraction(0)] * ncols
    for r, bv in enumerate(basis):
        x[bv] = tableau[r][-1]
    objective = sum((costs[bv] * x[bv] for bv in basis), Fraction(0))
    return SimplexResult(x=x, basis=list(basis), objective=objective)


# ---------------------------------------------------------------------------
# The perturbed zero-sum LP and its symbolic certificate.


@dataclass
class ZeroSumLp:
    """Integer-scaled LP data, symbolic in eps.

    Columns are laid out as (r1~, v2 plus, v2 minus, slack), one slack per
    player-2 sequence. Rows are that player's incentive constraints followed
    by player 1's flow constraints; the incentive rows carry the integer
    scale L, which leaves primal solutions untouched and divides the duals.
    """

    sf: SequenceForm
    rinv1: PolyMatrix
    rinv2: PolyMatrix
    a_sym: PolyMatrix
    b_int: List[int]
    c_int: List[int]
    scale: int
    n1: int
    n2: int
    k1: int
    k2: int

    @property
    def ncols(self) -> int:
        return self.n1 + 2 * self.k2 + self.n2


def build_zero_sum_lp(
    sf: SequenceForm, rinv1: PolyMatrix, rinv2: PolyMatrix
) -> ZeroSumLp:
    n1, n2 = sf.n_sequences(1), sf.n_sequences(2)
    k1, k2 = sf.n_infosets(1) + 1, sf.n_infosets(2) + 1
    u1t = rinv1.transpose() @ PolyMatrix.from_scalars(sf.U[0]) @ rinv2
    f1t = PolyMatrix.from_scalars(sf.F[0]) @ rinv1
    f2t = PolyMatrix.from_scalars(sf.F[1]) @ rinv2

    dens = [1]
    for row in u1t.rows:
        for p in row:
            dens.extend(x.denominator for x in p.coeffs)
    scale = lcm(*dens)
    u1s = u1t.scale(scale)
    assert u1s.is_integral()

    rows: List[List[Poly]] = []
    zero = Poly()
    for j in range(n2):
        row: List[Poly] = [-u1s.entry(i, j) for i in range(n1)]
        for h in range(k2):
            row.append(f2t.entry(h, j) * scale)
        for h in range(k2):
            row.append(-(f2t.entry(h, j) * scale))
        row.extend(
            Poly.const(scale if t == j else 0) for t in range(n2)
        )
        rows.append(row)
    for t in range(k1):
        row = [f1t.entry(t, i) for i in range(n1)]
        row.extend(zero for _ in range(2 * k2 + n2))
        rows.append(row)
    a_sym = PolyMatrix(rows)
    assert a_sym.is_integral()

    b_int = [0] * n2 + sf.f_vector(1)
    c_int = [0] * n1 + [-x for x in sf.f_vector(2)] + sf.f_vector(2) + [0] * n2
    return ZeroSumLp(
        sf=sf,
        rinv1=rinv1,
        rinv2=rinv2,
        a_sym=a_sym,
        b_int=b_int,
        c_int=c_int,
        scale=scale,
        n1=n1,
        n2=n2,
        k1=k1,
        k2=k2,
    )


@dataclass
class ZeroSumSolution:
    """Numeric perturbed solution at one eps (residual plans and values)."""

    eps: Fraction
    basis: List[int]
    r1_tilde: List[Fraction]
    r2_tilde: List[Fraction]
    v1: List[Fraction]
    value: Fraction


def solve_zero_sum_at(zslp: ZeroSumLp, eps: Fraction) -> ZeroSumSolution:
    """Solve the perturbed LP at a fixed eps and recover both plans.

    Player 2's residual plan is read off the duals: the multiplier of the
    j-th incentive row, negated and rescaled by L, is r2~(j).
    """
    a_num = zslp.a_sym.eval(eps)
    b = [Fraction(x) for x in zslp.b_int]
    c = [Fraction(x) for x in zslp.c_int]
    res = simplex_min(a_num, b, c)
    n1, n2, k1 = zslp.n1, zslp.n2, zslp.k1
    bt = [[a_num[i][j] for i in range(len(a_num))] for j in res.basis]
    cb = [c[j] for j in res.basis]
    y, _ = solve_linear_system(bt, cb)
    r2_tilde = [-zslp.scale * y[j] for j in range(n2)]
    v1 = [-y[n2 + t] for t in range(k1)]
    return ZeroSumSolution(
        eps=eps,
        basis=res.basis,
        r1_tilde=res.x[:n1],
        r2_tilde=r2_tilde,
        v1=v1,
        value=v1[0],
    )


@dataclass
class ZeroSumCertificate:
    """Symbolic description of one optimal basis as a function of eps.

    Valid on (0, eps] when ok is set: every basic value and every reduced
    cost provably keeps a non-negative sign there. Numerator lists include
    zero polynomials for nonbasic components; dividing by den gives the
    exact rational function of any component.
    """

    ok: bool
    eps: Fraction
    basis: List[int]
    den: Poly
    r1_nums: List[Poly]
    r2_nums: List[Poly]
    v1_nums: List[Poly]
    threshold: Fraction
    messages: List[str] = field(default_factory=list)


def certify_zero_sum(
    zslp: ZeroSumLp, basis: Sequence[int], eps: Fraction
) -> ZeroSumCertificate:
    """Prove an optimal basis stays optimal on all of (0, eps].

    Solves B(eps) x = b and B(eps)' y = c_B symbolically, then applies the
    constant-sign lemma to the determinant, each basic value, and each
    nonbasic reduced cost. The thresholds only certify open intervals, but
    the numeric solve at eps itself closes the right endpoint.
    """
    a = zslp.a_sym
    nrows = a.nrows
    b_mat = PolyMatrix(
        [[a.entry(i, j) for j in basis] for i in range(nrows)]
    )
    xnums, den = polymatrix_solve_raw(b_mat, zslp.b_int)
    ynums, den2 = polymatrix_solve_raw(
        b_mat.transpose(), [zslp.c_int[j] for j in basis]
    )
    assert den2 == den

    messages: List[str] = []
    threshold = Fraction(1)

    sign, thr = integer_rational_sign(den, ONE)
    threshold = min(threshold, thr)
    if sign == 0 or thr < eps:
        messages.append("basis determinant sign not locked below eps")

    for t, num in enumerate(xnums):
        sign, thr = integer_rational_sign(num, den)
        if sign < 0 or (sign > 0 and thr < eps):
            messages.append(
                "basic value %d (column %d) not certified non-negative"
                % (t, basis[t])
            )
        if sign:
            threshold = min(threshold, thr)

    basic = set(basis)
    for j in range(zslp.ncols):
        if j in basic:
            continue
        col = a.column(j)
        acc = Poly.const(zslp.c_int[j]) * den
        for i in range(nrows):
            if col[i]:
                acc = acc - col[i] * ynums[i]
        sign, thr = integer_rational_sign(acc, den)
        if sign < 0 or (sign > 0 and thr < eps):
            messages.append("reduced cost of column %d not certified" % j)
        if sign:
            threshold = min(threshold, thr)

    n1, n2, k1 = zslp.n1, zslp.n2, zslp.k1
    r1_nums = [Poly() for _ in range(n1)]
    for t, j in enumerate(basis):
        if j < n1:
            r1_nums[j] = xnums[t]
    r2_nums = [ynums[j] * Fraction(-zslp.scale) for j in range(n2)]
    v1_nums = [-ynums[n2 + t] for t in range(k1)]
    return ZeroSumCertificate(
        ok=not messages,
        eps=eps,
        basis=list(basis),
        den=den,
        r1_nums=r1_nums,
        r2_nums=r2_nums,
        v1_nums=v1_nums,
        threshold=threshold,
        messages=messages,
    )
