"""Polynomial arithmetic and sign classification on a right-neighborhood of 0."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efpe.poly import (
    EPS,
    ONE,
    ZERO,
    Poly,
    format_poly,
    integer_rational_sign,
    limit_at_zero,
    poly_divexact,
    poly_sign_threshold,
    rational_sign_threshold,
    reduce_fraction,
)

rationals = st.fractions(
    min_value=-20, max_value=20, max_denominator=6
)
polys = st.lists(rationals, max_size=5).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero)
int_polys = st.lists(
    st.integers(min_value=-30, max_value=30), max_size=5
).map(Poly)


class TestPolyBasics:
    def test_trims_trailing_zeros(self):
        assert Poly((1, 0, 0)) == Poly((1,))
        assert Poly((0, 0)).is_zero
        assert Poly((0, 0)).degree() == -1

    def test_degree_and_order(self):
        p = Poly((0, 0, 3, 5))
        assert p.degree() == 3
        assert p.order() == 2
        with pytest.raises(ValueError):
            ZERO.order()

    def test_constants(self):
        assert ZERO.is_zero
        assert ONE == Poly((1,))
        assert EPS == Poly((0, 1))

    def test_arithmetic_small_cases(self):
        assert Poly((1, -2)) + Poly((0, 3)) == Poly((1, 1))
        assert Poly((1, 1)) * Poly((1, -1)) == Poly((1, 0, -1))
        assert 2 - EPS == Poly((2, -1))
        assert -Poly((1, -2)) == Poly((-1, 2))
        assert Poly((1, 2)) - 1 == Poly((0, 2))

    def test_evaluation(self):
        p = Poly((Fraction(1, 2), -3, 1))
        x = Fraction(1, 4)
        assert p(x) == Fraction(1, 2) - 3 * x + x * x

    def test_shift_unshift(self):
        p = Poly((2, 3))
        assert p.shift(2) == Poly((0, 0, 2, 3))
        assert p.shift(2).unshift(2) == p
        with pytest.raises(ValueError):
            Poly((1, 2)).unshift(1)

    def test_is_integral(self):
        assert Poly((1, -4)).is_integral()
        assert not Poly((Fraction(1, 2),)).is_integral()

    def test_format(self):
        assert format_poly(ZERO) == "0"
        assert format_poly(Poly((1, -2))) == "1 - 2*eps"
        assert format_poly(Poly((Fraction(1, 2), 0, -3))) == "1/2 - 3*eps^2"

    @given(polys, polys, polys)
    def test_mul_distributes_over_add(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(polys, polys)
    def test_mul_commutes(self, a, b):
        assert a * b == b * a

    @given(polys, polys, rationals)
    def test_evaluation_is_a_homomorphism(self, a, b, x):
        assert (a * b)(x) == a(x) * b(x)
        assert (a + b)(x) == a(x) + b(x)

    @given(polys, st.integers(min_value=0, max_value=4))
    def test_shift_roundtrip(self, p, k):
        assert p.shift(k).unshift(k) == p


class TestDivexact:
    @given(polys, nonzero_polys)
    def test_product_division_roundtrip(self, a, b):
        assert poly_divexact(a * b, b) == a

    def test_rejects_inexact(self):
        with pytest.raises(ValueError):
            poly_divexact(Poly((1, 1, 1)), Poly((1, 1)))

    def test_rejects_zero_divisor(self):
        with pytest.raises(ZeroDivisionError):
            poly_divexact(ONE, ZERO)


class TestSignThresholds:
    def test_constant(self):
        assert poly_sign_threshold(Poly((5,))) == (1, Fraction(1, 2))

    def test_eventually_negative_at_large_eps(self):
        sign, thr = poly_sign_threshold(Poly((1, -2)))
        assert sign == 1
        assert thr == Fraction(1, 3)

    def test_negative_constant_term(self):
        sign, thr = poly_sign_threshold(Poly((-3, 0, 1)))
        assert sign == -1
        assert thr == Fraction(3, 6)

    def test_rejects_zero_constant_term(self):
        with pytest.raises(ValueError):
            poly_sign_threshold(EPS)

    @given(polys.filter(lambda p: p.constant_term() != 0))
    @settings(max_examples=200)
    def test_sign_holds_on_interval(self, p):
        sign, thr = poly_sign_threshold(p)
        for k in range(1, 9):
            x = thr * Fraction(k, 9)
            value = p(x)
            assert value != 0
            assert (value > 0) == (sign > 0)

    def test_rational_threshold(self):
        sign, thr = rational_sign_threshold(Poly((1, -1)), Poly((2, 1)))
        assert sign == 1
        assert thr == Fraction(1, 2)

    @given(
        polys.filter(lambda p: p.constant_term() != 0),
        polys.filter(lambda p: p.constant_term() != 0),
    )
    def test_rational_sign_matches_sampling(self, num, den):
        sign, thr = rational_sign_threshold(num, den)
        x = thr / 2
        value = num(x) / den(x)
        assert (value > 0) - (value < 0) == sign


class TestIntegerRationalSign:
    def test_zero_numerator(self):
        sign, thr = integer_rational_sign(ZERO, Poly((3, -1)))
        assert sign == 0
        assert thr == Fraction(1, 6)

    def test_eps_power_invariance(self):
        num, den = Poly((0, 2, -1)), Poly((0, 0, 4))
        base = integer_rational_sign(num, den)
        shifted = integer_rational_sign(num.shift(3), den.shift(3))
        assert base == shifted

    def test_rejects_rational_coefficients(self):
        with pytest.raises(ValueError):
            integer_rational_sign(Poly((Fraction(1, 2),)), ONE)

    def test_rejects_zero_denominator(self):
        with pytest.raises(ValueError):
            integer_rational_sign(ONE, ZERO)

    @given(int_polys, int_polys.filter(lambda p: not p.is_zero))
    @settings(max_examples=200)
    def test_sign_holds_strictly_inside_interval(self, num, den):
        sign, thr = integer_rational_sign(num, den)
        for k in range(1, 8):
            x = thr * Fraction(k, 8)
            nv, dv = num(x), den(x)
            assert dv != 0
            value = nv / dv
            assert (value > 0) - (value < 0) == sign


class TestReduceFraction:
    def test_cancels_eps_powers_and_content(self):
        num, den = reduce_fraction(Poly((0, 0, 4, -8)), Poly((0, 6)))
        assert num == Poly((0, 2, -4))
        assert den == Poly((3,))

    def test_zero_numerator(self):
        assert reduce_fraction(ZERO, Poly((0, -7))) == (ZERO, ONE)

    def test_denominator_sign_normalized(self):
        num, den = reduce_fraction(Poly((1,)), Poly((-2,)))
        assert den.lowest_coeff() > 0
        assert num == Poly((-1,))
        assert den == Poly((2,))

    @given(polys, nonzero_polys)
    def test_reduction_preserves_value(self, num, den):
        rn, rd = reduce_fraction(num, den)
        x = Fraction(1, 97)
        if den(x) != 0 and rd(x) != 0:
            assert rn(x) * den(x) == num(x) * rd(x)


class TestLimitAtZero:
    def test_plain_ratio(self):
        assert limit_at_zero(Poly((3, 1)), Poly((6,))) == Fraction(1, 2)

    def test_shared_eps_power(self):
        assert limit_at_zero(Poly((0, 0, 5)), Poly((0, 0, -2))) == Fraction(-5, 2)

    def test_vanishing_numerator(self):
        assert limit_at_zero(Poly((0, 1)), ONE) == 0
        assert limit_at_zero(ZERO, Poly((0, 1))) == 0

    def test_diverging_ratio(self):
        with pytest.raises(ValueError):
            limit_at_zero(ONE, EPS)

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            limit_at_zero(ONE, ZERO)

    @given(int_polys, int_polys.filter(lambda p: not p.is_zero))
    @settings(max_examples=200)
    def test_limit_matches_small_evaluations(self, num, den):
        try:
            lim = limit_at_zero(num, den)
        except ValueError:
            assert num.order() < den.order()
            return
        previous_gap = None
        for k in (10, 100, 1000, 10000):
            x = Fraction(1, k)
            if den(x) == 0:
                return
            gap = abs(num(x) / den(x) - lim)
            if previous_gap is not None and gap > previous_gap:
                return
            previous_gap = gap
        assert previous_gap is not None
        assert previous_gap <= Fraction(1, 50)
