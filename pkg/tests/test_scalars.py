"""Exact field arithmetic: rationals, polynomials in q, rational functions."""

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from blockq.errors import DivisionByZero, ModeMismatch, ParseError, PoleAtQ0
from blockq.scalars import (Poly, RatFunc, add, div, eq, format_q, format_scalar,
                            inv, is_zero, mul, parse_q, parse_scalar,
                            specialize_q, sub)

fractions_st = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 12))
polys_st = st.lists(fractions_st, max_size=4).map(Poly)
nonzero_polys_st = polys_st.filter(lambda p: not p.is_zero)
ratfuncs_st = st.tuples(polys_st, nonzero_polys_st).map(lambda t: RatFunc(*t))


def rf(text: str) -> RatFunc:
    return parse_scalar(text)


class TestRationalOps:
    def test_add_halves(self):
        assert add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)

    def test_inverse_of_zero(self):
        with pytest.raises(DivisionByZero):
            inv(Fraction(0))

    def test_mode_mismatch(self):
        with pytest.raises(ModeMismatch):
            add(Fraction(1), RatFunc.const(1))
        with pytest.raises(ModeMismatch):
            mul(RatFunc.q(), Fraction(2))


class TestPoly:
    def test_trailing_zeros_stripped(self):
        assert Poly([1, 2, 0, 0]).coeffs == (Fraction(1), Fraction(2))
        assert Poly([0, 0]).is_zero

    def test_product_difference_of_squares(self):
        q = Poly.q()
        one = Poly.const(1)
        assert (q + one) * (q - one) == Poly([-1, 0, 1])

    def test_divmod_roundtrip(self):
        a = Poly([3, Fraction(1, 2), 0, 2])
        b = Poly([1, 1])
        quot, rem = a.divmod(b)
        assert quot * b + rem == a
        assert rem.degree < b.degree

    def test_str_form(self):
        assert str(Poly([4, Fraction(-1, 2), 3])) == "3*q^2 - 1/2*q + 4"
        assert str(Poly()) == "0"


class TestRatFunc:
    def test_mul_difference_of_squares(self):
        assert mul(rf("q+1"), rf("q-1")) == rf("q^2 - 1")

    def test_inv_swaps(self):
        x = rf("(q - 2)/(q + 3)")
        assert inv(x) == rf("(q + 3)/(q - 2)")

    def test_canonical_monic_denominator(self):
        x = RatFunc(Poly([2]), Poly([0, 2]))  # 2 / 2q
        assert x.den.leading == 1
        assert x == rf("1/q")

    def test_zero_denominator(self):
        with pytest.raises(DivisionByZero):
            RatFunc(Poly.const(1), Poly())


class TestSpecialize:
    def test_square_minus_one(self):
        assert specialize_q(rf("q^2 - 1"), Fraction(3)) == 8

    def test_pole(self):
        with pytest.raises(PoleAtQ0):
            specialize_q(rf("1/(q - 2)"), Fraction(2))

    def test_bracket_coefficient_substitution(self):
        # n*(i+q) - m*(j+q) at (m,i,n,j) = (1,0,0,1) is -1-q
        x = rf("-1 - q")
        assert specialize_q(x, Fraction(1)) == -2

    @given(a=ratfuncs_st, b=ratfuncs_st,
           q0=st.sampled_from([Fraction(0), Fraction(1), Fraction(2), Fraction(-3),
                               Fraction(1, 2)]))
    @settings(max_examples=60, deadline=None)
    def test_ring_homomorphism(self, a, b, q0):
        assume(a.den(q0) != 0 and b.den(q0) != 0)
        assert specialize_q(a + b, q0) == specialize_q(a, q0) + specialize_q(b, q0)
        assert specialize_q(a * b, q0) == specialize_q(a, q0) * specialize_q(b, q0)


class TestFieldAxioms:
    @given(a=ratfuncs_st, b=ratfuncs_st, c=ratfuncs_st)
    @settings(max_examples=40, deadline=None)
    def test_rational_function_field(self, a, b, c):
        assert eq(add(add(a, b), c), add(a, add(b, c)))
        assert eq(mul(mul(a, b), c), mul(a, mul(b, c)))
        assert eq(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))
        assert eq(add(a, b), add(b, a))
        if not is_zero(a):
            assert eq(mul(a, inv(a)), RatFunc.const(1))

    @given(a=fractions_st, b=fractions_st, c=fractions_st)
    @settings(max_examples=40, deadline=None)
    def test_fixed_mode_field(self, a, b, c):
        assert eq(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))
        assert eq(sub(a, b), add(a, -b))
        if not is_zero(b):
            assert eq(mul(div(a, b), b), a)

    @given(p1=nonzero_polys_st, p2=polys_st, p3=nonzero_polys_st)
    @settings(max_examples=40, deadline=None)
    def test_canonical_form_unique(self, p1, p2, p3):
        # common factors cancel to the same normal form
        assert RatFunc(p1 * p2, p1 * p3) == RatFunc(p2, p3)


class TestSerialization:
    @given(x=ratfuncs_st)
    @settings(max_examples=60, deadline=None)
    def test_roundtrip_generic(self, x):
        assert parse_scalar(format_scalar(x)) == x

    @given(a=fractions_st)
    @settings(max_examples=30, deadline=None)
    def test_roundtrip_fixed(self, a):
        assert parse_scalar(format_scalar(a), Fraction(5)) == a

    def test_fixed_mode_rejects_q(self):
        with pytest.raises(ModeMismatch):
            parse_scalar("q + 1", Fraction(2))

    def test_parse_error_location(self):
        with pytest.raises(ParseError):
            parse_scalar("3 *")


class TestQFlag:
    def test_generic(self):
        assert parse_q("generic") is None
        assert format_q(None) == "generic"

    def test_rational(self):
        assert parse_q("7/3") == Fraction(7, 3)
        assert parse_q("-2") == Fraction(-2)
        assert format_q(Fraction(1, 2)) == "1/2"

    def test_decimals_rejected(self):
        with pytest.raises(ParseError):
            parse_q("0.5")
