from fractions import Fraction

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import X, mpoly_to_sympy, mpolys, sympy_to_mpoly, upolys
from gradsos.errors import ParseError
from gradsos.polyq import (
    MPoly,
    UPoly,
    format_coeff,
    format_poly,
    format_upoly,
    height,
    parse_poly,
    parse_upoly,
    to_rational,
)

QUARTIC = "2*x1^4 + 2*x1*x2 + x2^2 + 10"


def test_difference_of_squares():
    x1, x2 = MPoly.variables(2)
    assert (x1 + x2) * (x1 - x2) == x1 ** 2 - x2 ** 2


def test_additive_inverse():
    p = parse_poly(QUARTIC, 2)
    assert (p + (-p)).is_zero()


def test_evaluation():
    x1, x2 = MPoly.variables(2)
    assert ((x1 + x2) ** 2).eval([1, 2]) == 9


def test_partials_of_quartic():
    f = parse_poly(QUARTIC, 2)
    assert f.partial_derivative(1) == parse_poly("8*x1^3 + 2*x2", 2)
    assert f.partial_derivative(2) == parse_poly("2*x1 + 2*x2", 2)
    assert MPoly.const(7, 2).partial_derivative(1).is_zero()


def test_height_conventions():
    assert height(mpq(3)) == 3
    assert height(mpq(0)) == 1
    assert height(mpq(5, 8)) == 7
    assert height(UPoly()) == 1
    assert height(parse_upoly("x1^2 - 5/8")) == 7


def test_parse_examples():
    f = parse_poly(QUARTIC, 2)
    assert f.terms == {(4, 0): 2, (1, 1): 2, (0, 2): 1, (0, 0): 10}
    assert parse_poly("0", 3).is_zero()
    m = parse_poly("-1/4*x1", 1)
    assert m.terms == {(1,): mpq(-1, 4)}


@pytest.mark.parametrize("text", ["x1^", "x3", "1/0", "x1 ++ x2", "2*", "x1 x2", "(x1)"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_poly(text, 2)


def test_parse_error_offset():
    with pytest.raises(ParseError) as exc:
        parse_poly("x1 + x7", 2)
    assert exc.value.offset == 5


def test_to_rational_rejects_floats():
    assert to_rational(Fraction(3, 6)) == mpq(1, 2)
    with pytest.raises(TypeError):
        to_rational(0.5)


def test_format_coeff():
    assert format_coeff(mpq(-3, 4)) == "-3/4"
    assert format_coeff(mpq(5)) == "5"


@given(mpolys(nvars=3))
def test_format_parse_round_trip(p):
    assert parse_poly(format_poly(p), 3) == p


@given(upolys())
def test_upoly_format_round_trip(p):
    assert parse_upoly(format_upoly(p)) == p


@settings(max_examples=60)
@given(mpolys(), mpolys())
def test_arithmetic_matches_sympy(p, q):
    ps, qs = mpoly_to_sympy(p), mpoly_to_sympy(q)
    assert sympy_to_mpoly(ps * qs, 2) == p * q
    assert sympy_to_mpoly(ps - qs, 2) == p - q


@settings(max_examples=60)
@given(mpolys(nvars=2, max_degree=4))
def test_derivative_matches_sympy(p):
    for i in (1, 2):
        assert p.partial_derivative(i) == sympy_to_mpoly(sp.diff(mpoly_to_sympy(p), X[i - 1]), 2)


@given(mpolys(), mpolys(), mpolys())
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(upolys(), upolys(), st.integers(-5, 5))
def test_upoly_evaluation_is_a_ring_map(p, q, t):
    assert (p * q)(t) == p(t) * q(t)
    assert (p + q)(t) == p(t) + q(t)


@given(mpolys(nvars=2, max_degree=3), upolys(max_degree=3), upolys(max_degree=3))
def test_substitution_is_composition(p, a, b):
    # p(a(t), b(t)) evaluated at t = 2 equals p(a(2), b(2))
    sub = p.substitute([a.to_mpoly(1, 0), b.to_mpoly(1, 0)], 1)
    assert sub.eval([2]) == p.eval([a(2), b(2)])
