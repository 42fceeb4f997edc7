"""Matrices over exact polynomials in eps, with exact linear algebra.

Provides multiplication, evaluation, fraction-free determinants, and an
exact solver for square polynomial systems based on evaluation at integer
points followed by interpolation. The solver returns Cramer-style numerators
together with the determinant so callers can reason about signs and limits
of the solution components as rational functions of eps.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import SingularMatrixError
from .poly import ONE, ZERO, Poly, Scalar, poly_divexact, reduce_fraction

Entry = Union[Poly, int, Fraction]


def _as_poly(x: Entry) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


class PolyMatrix:
    """Rectangular grid of Poly entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[Entry]]):
        rs = tuple(tuple(_as_poly(e) for e in row) for row in rows)
        if rs:
            width = len(rs[0])
            if any(len(r) != width for r in rs):
                raise ValueError("ragged rows")
        self.rows: Tuple[Tuple[Poly, ...], ...] = rs

    @staticmethod
    def identity(n: int) -> "PolyMatrix":
        return PolyMatrix(
            [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "PolyMatrix":
        return PolyMatrix([[ZERO] * ncols for _ in range(nrows)])

    @staticmethod
    def from_scalars(rows: Iterable[Iterable[Scalar]]) -> "PolyMatrix":
        return PolyMatrix([[Poly.const(e) for e in row] for row in rows])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def entry(self, i: int, j: int) -> Poly:
        return self.rows[i][j]

    def column(self, j: int) -> Tuple[Poly, ...]:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(list(zip(*self.rows))) if self.rows else self

    def is_integral(self) -> bool:
        return all(p.is_integral() for row in self.rows for p in row)

    def max_degree(self) -> int:
        """Largest entry degree; -1 for an all-zero matrix."""
        return max((p.degree() for row in self.rows for p in row), default=-1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix([[-p for p in row] for row in self.rows])

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("dimension mismatch")
        return PolyMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ]
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + (-other)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        return polymatrix_mul(self, other)

    def scale(self, c: Scalar) -> "PolyMatrix":
        return PolyMatrix([[p * c for p in row] for row in self.rows])

    def eval(self, x: Scalar) -> List[List[Fraction]]:
        return [[p(x) for p in row] for row in self.rows]

    def __repr__(self) -> str:
        return "PolyMatrix(%dx%d)" % (self.nrows, self.ncols)


def polymatrix_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.ncols != b.nrows:
        raise ValueError("dimension mismatch: %dx%d @ %dx%d"
                         % (a.nrows, a.ncols, b.nrows, b.ncols))
    bt = b.transpose().rows
    out = []
    for row in a.rows:
        out_row = []
        for col in bt:
            acc = ZERO
            for pa, pb in zip(row, col):
                if pa and pb:
                    acc = acc + pa * pb
            out_row.append(acc)
        out.append(out_row)
    return PolyMatrix(out)


def pm_mat_vec(a: PolyMatrix, v: Sequence[Poly]) -> List[Poly]:
    if a.ncols != len(v):
        raise ValueError("dimension mismatch")
    out = []
    for row in a.rows:
        acc = ZERO
        for pa, pv in zip(row, v):
            if pa and pv:
                acc = acc + pa * pv
        out.append(acc)
    return out


def polymatrix_eval(a: PolyMatrix, x: Scalar) -> List[List[Fraction]]:
    return a.eval(x)


def polymatrix_det(a: PolyMatrix) -> Poly:
    """Determinant by fraction-free (Bareiss) elimination over the ring.

    Intermediate entries stay polynomial; with integral inputs every
    intermediate coefficient is an integer.
    """
    n = a.nrows
    if n != a.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return ONE
    m = [list(row) for row in a.rows]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return ZERO
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            for j in range(k + 1, n):
                m[i][j] = poly_divexact(pk * m[i][j] - mik * m[k][j], prev)
            m[i][k] = ZERO
        prev = pk
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


# ---------------------------------------------------------------------------
# Numeric linear solves (used per evaluation point).

def _eval_int(p: Poly, t: int) -> int:
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * t + c.numerator
    return acc


def _solve_int(a: List[List[int]], b: List[int]) -> Tuple[List[Fraction], int]:
    """Solve an integer system with Bareiss elimination; returns (x, det)."""
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            raise SingularMatrixError("singular integer system")
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pk = m[k][k]
        mk = m[k]
        for i in range(k + 1, n):
            mi = m[i]
            mik = mi[k]
            for j in range(k + 1, n + 1):
                mi[j] = (pk * mi[j] - mik * mk[j]) // prev
            mi[k] = 0
        prev = pk
    if m[n - 1][n - 1] == 0:
        raise SingularMatrixError("singular integer system")
    det = sign * m[n - 1][n - 1]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(m[i][n])
        for j in range(i + 1, n):
            if m[i][j]:
                s -= m[i][j] * x[j]
        x[i] = s / m[i][i]
    return x, det


def solve_linear_system(
    a: List[List[Fraction]], b: List[Fraction]
) -> Tuple[List[Fraction], Fraction]:
    """Solve a rational square system by Gaussian elimination.

    Returns the solution and the determinant; raises SingularMatrixError.
    """
    n = len(a)
    m = [[Fraction(e) for e in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            raise SingularMatrixError("singular system")
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        pk = m[k][k]
        det *= pk
        mk = m[k]
        for i in range(k + 1, n):
            mi = m[i]
            if mi[k]:
                f = mi[k] / pk
                for j in range(k, n + 1):
                    mi[j] -= f * mk[j]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = m[i][n]
        for j in range(i + 1, n):
            if m[i][j]:
                s -= m[i][j] * x[j]
        x[i] = s / m[i][i]
    return x, det


# ---------------------------------------------------------------------------
# Exact symbolic solve via evaluation and interpolation.

def _int_points():
    t = 1
    while True:
        yield t
        yield -t
        t += 1


def _newton_interp(xs: Sequence[int], ys: Sequence[Fraction]) -> Poly:
    """Interpolating polynomial through (xs[i], ys[i]) by divided differences."""
    k = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, k):
        for i in range(k - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # Horner over the Newton basis, accumulating plain coefficients.
    poly = Poly.const(coef[-1])
    for i in range(k - 2, -1, -1):
        poly = poly * Poly((-xs[i], 1)) + coef[i]
    return poly


def polymatrix_solve_raw(
    b_matrix: PolyMatrix, rhs: Sequence[Entry]
) -> Tuple[List[Poly], Poly]:
    """Solve B(eps) x = rhs exactly; returns (numerators, det B(eps)).

    The i-th solution component equals numerators[i] / det as a rational
    function. Works by evaluating at integer points, solving each numeric
    system, and interpolating det and the Cramer numerators; the result is
    verified at a held-out point. Degrees are bounded by the sum over
    columns of the largest entry degree (plus the rhs degree), which bounds
    both det and every numerator.
    """
    n = b_matrix.nrows
    if n != b_matrix.ncols:
        raise ValueError("matrix must be square")
    rhs_p = [_as_poly(e) for e in rhs]
    if len(rhs_p) != n:
        raise ValueError("rhs length mismatch")
    if n == 0:
        return [], ONE

    colmax = []
    for j in range(n):
        mx = max(row[j].degree() for row in b_matrix.rows)
        if mx < 0:
            raise SingularMatrixError("zero column makes the matrix singular")
        colmax.append(mx)
    bound = sum(colmax) + max(max((p.degree() for p in rhs_p), default=-1), 0)

    integral = b_matrix.is_integral() and all(p.is_integral() for p in rhs_p)
    xs: List[int] = []
    det_vals: List[Fraction] = []
    num_vals: List[List[Fraction]] = [[] for _ in range(n)]
    singular_hits = 0
    points = _int_points()
    while len(xs) <= bound:
        t = next(points)
        try:
            if integral:
                at = [[_eval_int(p, t) for p in row] for row in b_matrix.rows]
                bt = [_eval_int(p, t) for p in rhs_p]
                x, det = _solve_int(at, bt)
            else:
                at = [[p(t) for p in row] for row in b_matrix.rows]
                bt = [p(t) for p in rhs_p]
                x, det = solve_linear_system(at, bt)
        except SingularMatrixError:
            singular_hits += 1
            # det has degree <= bound, so more than `bound` roots means det == 0
            if singular_hits > bound:
                raise SingularMatrixError("identically singular matrix")
            continue
        xs.append(t)
        det_vals.append(Fraction(det))
        for i in range(n):
            num_vals[i].append(x[i] * det)

    det_poly = _newton_interp(xs, det_vals)
    nums = [_newton_interp(xs, num_vals[i]) for i in range(n)]

    if det_poly.degree() > bound:
        raise AssertionError("interpolated determinant exceeds degree bound")
    if integral:
        if not det_poly.is_integral() or any(not p.is_integral() for p in nums):
            raise AssertionError("integral inputs produced non-integral output")

    # Independent check at a held-out evaluation point.
    while True:
        t = next(points)
        dt = det_poly(t)
        if not dt:
            continue
        for i in range(n):
            lhs = sum(
                (b_matrix.rows[i][j](t) * nums[j](t) for j in range(n)),
                Fraction(0),
            )
            if lhs != rhs_p[i](t) * dt:
                raise AssertionError("interpolation verification failed")
        break
    return nums, det_poly


def polymatrix_solve(
    b_matrix: PolyMatrix, rhs: Sequence[Entry]
) -> List[Tuple[Poly, Poly]]:
    """Solve B(eps) x = rhs; each component is a reduced (num, den) pair.

    Reduction cancels shared powers of eps and integer content only; the
    constant terms after reduction are exactly what the sign lemmas need.
    """
    nums, det_poly = polymatrix_solve_raw(b_matrix, rhs)
    return [reduce_fraction(nm, det_poly) for nm in nums]
