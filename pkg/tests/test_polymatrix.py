"""Matrices of polynomials: products, determinants, and Cramer-style solves."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efpe.errors import SingularMatrixError
from efpe.poly import ONE, ZERO, Poly
from efpe.polymatrix import (
    PolyMatrix,
    pm_mat_vec,
    polymatrix_det,
    polymatrix_eval,
    polymatrix_mul,
    polymatrix_solve,
    polymatrix_solve_raw,
    solve_linear_system,
)

entries = st.lists(
    st.integers(min_value=-6, max_value=6), max_size=3
).map(Poly)


def square(n):
    return st.lists(
        st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n
    ).map(PolyMatrix)


def _random_int_matrix(rng, n, degree=2, bound=5):
    return PolyMatrix(
        [
            [
                Poly([rng.randint(-bound, bound) for _ in range(degree + 1)])
                for _ in range(n)
            ]
            for _ in range(n)
        ]
    )


class TestPolyMatrixBasics:
    def test_identity(self):
        ident = PolyMatrix.identity(3)
        assert ident.entry(0, 0) == ONE
        assert ident.entry(0, 1) == ZERO
        assert ident.nrows == ident.ncols == 3

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            PolyMatrix([[1, 2], [3]])

    def test_transpose(self):
        a = PolyMatrix([[1, 2], [3, 4], [5, 6]])
        assert a.transpose() == PolyMatrix([[1, 3, 5], [2, 4, 6]])
        assert a.transpose().transpose() == a

    def test_add_sub_neg(self):
        a = PolyMatrix([[1, Poly((0, 1))], [0, 2]])
        b = PolyMatrix([[1, 1], [1, 1]])
        assert (a + b) - b == a
        assert -a + a == PolyMatrix.zeros(2, 2)

    def test_column(self):
        a = PolyMatrix([[1, 2], [3, 4]])
        assert a.column(1) == (Poly((2,)), Poly((4,)))

    def test_max_degree(self):
        a = PolyMatrix([[1, Poly((0, 0, 5))], [0, 2]])
        assert a.max_degree() == 2
        assert PolyMatrix.zeros(2, 2).max_degree() == -1

    def test_is_integral(self):
        assert PolyMatrix([[1, 2], [3, 4]]).is_integral()
        assert not PolyMatrix([[Fraction(1, 2)]]).is_integral()

    @given(square(2), square(2), st.fractions(min_value=-3, max_value=3, max_denominator=4))
    @settings(max_examples=100)
    def test_matmul_commutes_with_evaluation(self, a, b, x):
        prod = a @ b
        av, bv = a.eval(x), b.eval(x)
        expect = [
            [sum(av[i][k] * bv[k][j] for k in range(2)) for j in range(2)]
            for i in range(2)
        ]
        assert prod.eval(x) == expect

    def test_mul_shape_mismatch(self):
        with pytest.raises(ValueError):
            polymatrix_mul(PolyMatrix.zeros(2, 3), PolyMatrix.zeros(2, 3))

    def test_mat_vec(self):
        a = PolyMatrix([[1, Poly((0, 1))], [2, 0]])
        out = pm_mat_vec(a, [Poly((1,)), Poly((3,))])
        assert out == [Poly((1, 3)), Poly((2,))]


class TestDeterminant:
    def test_triangular(self):
        a = PolyMatrix(
            [
                [Poly((1,)), 0, 0],
                [Poly((0, -1)), Poly((2, 1)), 0],
                [5, 7, Poly((0, 0, 3))],
            ]
        )
        assert polymatrix_det(a) == Poly((1,)) * Poly((2, 1)) * Poly((0, 0, 3))

    def test_singular(self):
        a = PolyMatrix([[1, 2], [2, 4]])
        assert polymatrix_det(a).is_zero

    def test_empty(self):
        assert polymatrix_det(PolyMatrix.zeros(0, 0)) == ONE

    @given(square(3), square(3))
    @settings(max_examples=40, deadline=None)
    def test_det_is_multiplicative(self, a, b):
        assert polymatrix_det(a @ b) == polymatrix_det(a) * polymatrix_det(b)

    @given(square(3), st.fractions(min_value=-3, max_value=3, max_denominator=4))
    @settings(max_examples=60, deadline=None)
    def test_det_commutes_with_evaluation(self, a, x):
        symbolic = polymatrix_det(a)(x)
        rows = a.eval(x)
        try:
            _, numeric_det = solve_linear_system(rows, [0] * 3)
        except SingularMatrixError:
            assert symbolic == 0
            return
        assert symbolic == numeric_det


class TestSolveLinearSystem:
    def test_known_system(self):
        a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
        x, det = solve_linear_system(a, [Fraction(5), Fraction(10)])
        assert det == 5
        assert x == [Fraction(1), Fraction(3)]

    def test_singular_raises(self):
        with pytest.raises(SingularMatrixError):
            solve_linear_system([[1, 2], [2, 4]], [1, 1])

    def test_fractional_entries(self):
        a = [[Fraction(1, 2), Fraction(0)], [Fraction(0), Fraction(1, 3)]]
        x, det = solve_linear_system(a, [1, 1])
        assert x == [Fraction(2), Fraction(3)]
        assert det == Fraction(1, 6)


class TestPolymatrixSolve:
    def test_raw_solution_satisfies_cramer_identity(self):
        rng = random.Random(5)
        for trial in range(25):
            n = rng.randint(1, 4)
            a = _random_int_matrix(rng, n)
            rhs = [Poly([rng.randint(-4, 4) for _ in range(2)]) for _ in range(n)]
            try:
                nums, det = polymatrix_solve_raw(a, rhs)
            except SingularMatrixError:
                assert polymatrix_det(a).is_zero
                continue
            assert not det.is_zero
            assert det == polymatrix_det(a)
            for i in range(n):
                lhs = ZERO
                for j in range(n):
                    lhs = lhs + a.entry(i, j) * nums[j]
                assert lhs == rhs[i] * det

    def test_integer_rhs_accepted(self):
        a = PolyMatrix([[2, 0], [0, 3]])
        nums, det = polymatrix_solve_raw(a, [1, 1])
        assert det == Poly((6,))
        assert nums == [Poly((3,)), Poly((2,))]

    def test_identically_singular_raises(self):
        a = PolyMatrix([[Poly((0, 1)), Poly((0, 1))], [1, 1]])
        with pytest.raises(SingularMatrixError):
            polymatrix_solve_raw(a, [1, 0])

    def test_singular_only_at_sample_points_is_fine(self):
        a = PolyMatrix([[Poly((-1, 1)), 0], [0, Poly((1, 1))]])
        nums, det = polymatrix_solve_raw(a, [1, 1])
        assert det == Poly((-1, 0, 1))
        assert nums[0] == Poly((1, 1))
        assert nums[1] == Poly((-1, 1))

    def test_reduced_solve(self):
        a = PolyMatrix([[2, 0], [0, Poly((0, 2))]])
        pairs = polymatrix_solve(a, [Poly((4,)), Poly((0, 4))])
        for num, den in pairs:
            assert den.lowest_coeff() > 0
        x0, x1 = pairs
        assert x0[0](0) / x0[1](0) == 2
        assert x1[0](0) / x1[1](0) == 2

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            polymatrix_solve_raw(PolyMatrix.zeros(2, 3), [1, 1])

    @given(square(3))
    @settings(max_examples=40, deadline=None)
    def test_raw_matches_pointwise_solves(self, a):
        rhs = [ONE, ZERO, ONE]
        try:
            nums, det = polymatrix_solve_raw(a, rhs)
        except SingularMatrixError:
            assert polymatrix_det(a).is_zero
            return
        x = Fraction(7, 3)
        if det(x) == 0:
            return
        numeric, _ = solve_linear_system(a.eval(x), [1, 0, 1])
        for i in range(3):
            assert nums[i](x) / det(x) == numeric[i]

    def test_eval_helper(self):
        a = PolyMatrix([[Poly((1, 1)), 0], [0, 2]])
        assert polymatrix_eval(a, Fraction(1, 2)) == [
            [Fraction(3, 2), Fraction(0)],
            [Fraction(0), Fraction(2)],
        ]
