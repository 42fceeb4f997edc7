"""Exact univariate polynomials in the perturbation variable eps.

Coefficients are arbitrary-precision rationals stored densely, lowest degree
first. Besides arithmetic, this module provides the sign-threshold helpers
that certify the sign of a polynomial or rational function on an interval
(0, eps*] from its coefficients alone.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Tuple, Union

Scalar = Union[int, Fraction]


class Poly:
    """Dense polynomial a0 + a1*eps + ... + an*eps^n over the rationals.

    Trailing zero coefficients are stripped, so the zero polynomial has an
    empty coefficient tuple and every nonzero polynomial has a nonzero
    leading coefficient.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)

    @staticmethod
    def const(c: Scalar) -> "Poly":
        return Poly((c,))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def order(self) -> int:
        """Index of the lowest nonzero coefficient.

        Raises ValueError on the zero polynomial, which has no order.
        """
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("zero polynomial has no order")

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def constant_term(self) -> Fraction:
        return self.coeff(0)

    def lowest_coeff(self) -> Fraction:
        return self.coeffs[self.order()]

    def max_abs_coeff(self) -> Fraction:
        """mu = max_i |a_i|; 0 for the zero polynomial."""
        return max((abs(c) for c in self.coeffs), default=Fraction(0))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def shift(self, k: int) -> "Poly":
        """Multiply by eps^k (k >= 0)."""
        if self.is_zero:
            return self
        return Poly((Fraction(0),) * k + self.coeffs)

    def unshift(self, k: int) -> "Poly":
        """Divide by eps^k; requires the k lowest coefficients to vanish."""
        if self.is_zero:
            return self
        if any(self.coeffs[i] for i in range(min(k, len(self.coeffs)))):
            raise ValueError("not divisible by eps^%d" % k)
        return Poly(self.coeffs[k:])

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __add__(self, other: Union["Poly", Scalar]) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other: Union["Poly", Scalar]) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Poly":
        return Poly.const(other) - self

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return Poly(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __call__(self, x: Scalar) -> Fraction:
        """Evaluate by Horner's rule."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return "Poly(%s)" % (format_poly(self),)


ZERO = Poly()
ONE = Poly((1,))
EPS = Poly((0, 1))


def format_poly(p: Poly, var: str = "eps") -> str:
    """Human-readable form such as '1 - 2*eps + eps^2'."""
    if p.is_zero:
        return "0"
    parts = []
    for i, c in enumerate(p.coeffs):
        if not c:
            continue
        mag = abs(c)
        if i == 0:
            term = str(mag)
        else:
            power = var if i == 1 else "%s^%d" % (var, i)
            term = power if mag == 1 else "%s*%s" % (mag, power)
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts)


def poly_divexact(a: Poly, b: Poly) -> Poly:
    """Exact polynomial division; raises if b does not divide a."""
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if a.is_zero:
        return ZERO
    rem = list(a.coeffs)
    div = b.coeffs
    dd = len(div) - 1
    lead = div[-1]
    qdeg = len(rem) - 1 - dd
    if qdeg < 0:
        raise ValueError("inexact polynomial division")
    q = [Fraction(0)] * (qdeg + 1)
    for k in range(qdeg, -1, -1):
        c = rem[k + dd] / lead
        q[k] = c
        if c:
            for j in range(dd + 1):
                rem[k + j] -= c * div[j]
    if any(rem):
        raise ValueError("inexact polynomial division")
    return Poly(q)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def poly_sign_threshold(p: Poly) -> Tuple[int, Fraction]:
    """Sign of p on [0, eps*] from its constant term.

    For p with nonzero constant term a0, p keeps the sign of a0 on the whole
    interval [0, eps*] where eps* = |a0| / (mu + |a0|) and mu = max_i |a_i|.
    """
    a0 = p.constant_term()
    if not a0:
        raise ValueError("constant term must be nonzero")
    mu = p.max_abs_coeff()
    return _sign(a0), abs(a0) / (mu + abs(a0))


def rational_sign_threshold(num: Poly, den: Poly) -> Tuple[int, Fraction]:
    """Sign of num/den on (0, eps*] when both constant terms are nonzero.

    The threshold is the smaller of the two per-polynomial thresholds, each
    computed with its own mu.
    """
    sn, tn = poly_sign_threshold(num)
    sd, td = poly_sign_threshold(den)
    return sn * sd, min(tn, td)


def integer_rational_sign(num: Poly, den: Poly) -> Tuple[int, Fraction]:
    """Constant sign of num/den on (0, eps*] for integer coefficients.

    Factors the leading powers of eps out of both polynomials; the sign on
    the interval is then that of the ratio of the resulting constant terms
    (or identically zero for a zero numerator). Because the coefficients are
    integers, eps* = 1/(2*mu) with mu = max over both coefficient lists is
    always small enough. The classification is invariant under multiplying
    numerator and denominator by a common power of eps.
    """
    if den.is_zero:
        raise ValueError("denominator is identically zero")
    if not (num.is_integral() and den.is_integral()):
        raise ValueError("integer coefficients required")
    mu_b = den.max_abs_coeff()
    if num.is_zero:
        return 0, 1 / (2 * mu_b)
    mu = max(num.max_abs_coeff(), mu_b)
    sign = _sign(num.lowest_coeff()) * _sign(den.lowest_coeff())
    return sign, 1 / (2 * mu)


def reduce_fraction(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    """Canonicalize num/den without full polynomial gcd.

    Cancels the shared power of eps, divides out the common integer content
    when both polynomials are integral, and normalizes the sign so the
    denominator's lowest nonzero coefficient is positive. A zero numerator
    reduces to 0/1.
    """
    if den.is_zero:
        raise ZeroDivisionError("zero denominator")
    if num.is_zero:
        return ZERO, ONE
    k = min(num.order(), den.order())
    if k:
        num, den = num.unshift(k), den.unshift(k)
    if num.is_integral() and den.is_integral():
        g = 0
        for c in num.coeffs:
            g = gcd(g, c.numerator)
        for c in den.coeffs:
            g = gcd(g, c.numerator)
        if g > 1:
            num, den = num * Fraction(1, g), den * Fraction(1, g)
    if den.lowest_coeff() < 0:
        num, den = -num, -den
    return num, den


def limit_at_zero(num: Poly, den: Poly) -> Fraction:
    """Limit of num/den as eps -> 0+, assuming it is finite.

    Raises ValueError when the denominator vanishes to a higher order than
    the numerator (the ratio diverges).
    """
    if den.is_zero:
        raise ZeroDivisionError("zero denominator")
    if num.is_zero:
        return Fraction(0)
    on, od = num.order(), den.order()
    if on > od:
        return Fraction(0)
    if on < od:
        raise ValueError("ratio diverges as eps -> 0")
    return num.lowest_coeff() / den.lowest_coeff()
