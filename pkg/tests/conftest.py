"""Shared helpers: conversions to and from sympy, used as an independent oracle."""

import sympy as sp
from gmpy2 import mpq

from gradsos.polyq import MPoly, UPoly

X = sp.symbols("x1:6")
T = sp.Symbol("t")


def mpoly_to_sympy(p: MPoly):
    out = sp.Integer(0)
    for m, c in p.terms.items():
        term = sp.Rational(int(c.numerator), int(c.denominator))
        for v, e in zip(X, m):
            term *= v ** e
        out += term
    return sp.expand(out)


def sympy_to_mpoly(expr, n: int) -> MPoly:
    poly = sp.Poly(sp.expand(expr), *X[:n])
    return MPoly(n, {m: mpq(int(c.p), int(c.q)) for m, c in poly.terms()})


def upoly_to_sympy(p: UPoly, var=T):
    return sum(sp.Rational(int(c.numerator), int(c.denominator)) * var ** i for i, c in enumerate(p.coeffs))


def sympy_to_upoly(expr, var=T) -> UPoly:
    cs = sp.Poly(sp.expand(expr), var).all_coeffs()[::-1]
    return UPoly([mpq(int(c.p), int(c.q)) for c in cs])


# ---------------------------------------------------------------------------
# hypothesis strategies

from hypothesis import strategies as st  # noqa: E402

small_rationals = st.builds(
    lambda a, b: mpq(a, b), st.integers(-20, 20), st.integers(1, 6)
)


@st.composite
def upolys(draw, max_degree=6, min_degree=0):
    deg = draw(st.integers(min_degree, max_degree))
    cs = draw(st.lists(small_rationals, min_size=deg, max_size=deg))
    lead = small_rationals.filter(bool) if min_degree > 0 else small_rationals
    return UPoly(cs + [draw(lead)])


@st.composite
def mpolys(draw, nvars=2, max_degree=3, max_terms=6):
    mons = st.tuples(*[st.integers(0, max_degree)] * nvars).filter(lambda m: sum(m) <= max_degree)
    terms = draw(st.dictionaries(mons, small_rationals, max_size=max_terms))
    return MPoly(nvars, terms)


# ---------------------------------------------------------------------------
# acceptance summary

import pytest  # noqa: E402

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
