import itertools

import pytest
import sympy as sp
from hypothesis import given, settings

from conftest import X, mpoly_to_sympy, mpolys, sympy_to_mpoly
from gradsos.errors import HypothesisViolated, NotInShapePosition
from gradsos.grobner import (
    ChangeOfVariables,
    ShapeBasis,
    apply_change_of_variables,
    buchberger,
    buchberger_lex,
    find_separating_j,
    fglm,
    gradient_ideal,
    is_radical_shape,
    is_zero_dimensional,
    normal_form,
    quotient_dimension,
    standard_monomials,
    to_shape_basis,
)
from gradsos.polyq import MPoly, UPoly, parse_poly, parse_upoly

QUARTIC = parse_poly("2*x1^4 + 2*x1*x2 + x2^2 + 10", 2)
ROBINSON = parse_poly(
    "x1^6 + x2^6 - x1^4*x2^2 + 3*x1^2*x2^2 - x1^2*x2^4 - x1^4 - x2^4 - x1^2 - x2^2 + 1", 2)
SCHEIDERER = parse_poly("x1^4 + x1*x2^3 + x2^4 + 3*x1^2*x2 + 4*x1*x2^2 + 2*x1^2 - x1 - x2 + 1", 2)


def mp(text, n=2):
    return parse_poly(text, n)


def test_gradient_ideal_examples():
    assert gradient_ideal(QUARTIC) == [mp("8*x1^3 + 2*x2"), mp("2*x1 + 2*x2")]
    assert gradient_ideal(mp("x1^2 + x2^2")) == [mp("2*x1"), mp("2*x2")]


def test_gradient_of_robinson_frozen():
    # sympy.diff of the Robinson polynomial
    assert gradient_ideal(ROBINSON) == [
        mp("6*x1^5 - 4*x1^3*x2^2 - 4*x1^3 - 2*x1*x2^4 + 6*x1*x2^2 - 2*x1"),
        mp("-2*x1^4*x2 - 4*x1^2*x2^3 + 6*x1^2*x2 + 6*x2^5 - 4*x2^3 - 2*x2"),
    ]


def test_gradient_of_constant():
    with pytest.raises(HypothesisViolated):
        gradient_ideal(MPoly.const(5, 2))


@pytest.mark.parametrize("method", ["fglm", "direct"])
def test_lex_basis_of_quartic(method):
    gb = buchberger_lex(gradient_ideal(QUARTIC), method=method)
    assert gb == [mp("x1^3 - 1/4*x1"), mp("x2 + x1")]


def test_basis_of_variables():
    assert buchberger([mp("x1"), mp("x2")]) == [mp("x1"), mp("x2")]


def test_scheiderer_lex_basis_frozen():
    # sympy.groebner(..., x2, x1, order="lex"), made monic
    w = parse_upoly("16*x1^9 - 16*x1^7 + 17*x1^6 - 16*x1^5 - x1^4 + 17*x1^3 - x1^2 + 1")
    v = parse_upoly("76980992*x1^8 - 19878640*x1^7 - 60739584*x1^6 + 96859632*x1^5"
                    " - 99354399*x1^4 + 36120048*x1^3 + 60739584*x1^2 - 6131999*x1 + 2494767")
    v = v * (-1 / parse_upoly("13746641").lc)
    gb = buchberger_lex(gradient_ideal(SCHEIDERER))
    sb = to_shape_basis(gb)
    assert sb.w == w.monic()
    assert sb.v == [v]


def test_fglm_agrees_with_direct_on_robinson():
    gens = gradient_ideal(ROBINSON)
    assert buchberger_lex(gens, method="fglm") == buchberger_lex(gens, method="direct")


def test_zero_dimensionality():
    gb = buchberger_lex(gradient_ideal(QUARTIC))
    assert is_zero_dimensional(gb)
    assert quotient_dimension(gb) == 3
    assert standard_monomials(gb) == [(0, 0), (1, 0), (2, 0)]
    assert not is_zero_dimensional(buchberger([mp("x1^2")]))


def test_radicality():
    assert is_radical_shape(to_shape_basis(buchberger_lex(gradient_ideal(QUARTIC))))
    assert not is_radical_shape(ShapeBasis(parse_upoly("x1^2"), [UPoly()], 2))


def test_shape_basis_of_quartic():
    sb = to_shape_basis(buchberger_lex(gradient_ideal(QUARTIC)))
    assert sb.w == parse_upoly("x1^3 - 1/4*x1")
    assert sb.v == [parse_upoly("-x1")]
    assert sb.delta == 3


def test_not_in_shape_position():
    with pytest.raises(NotInShapePosition):
        to_shape_basis([mp("x1"), mp("x2^2")])


def test_identity_change_of_variables():
    T = ChangeOfVariables(0, 3)
    f = mp("x1*x2 + x3^2", 3)
    assert apply_change_of_variables(f, T) == f


def test_change_of_variables_by_hand():
    T = ChangeOfVariables(1, 2)
    assert apply_change_of_variables(mp("x1*x2"), T) == mp("x1*x2 - x2^2")
    f = mp("x1^3 + 2*x1*x2 - x2")
    assert apply_change_of_variables(apply_change_of_variables(f, T), T, inverse=True) == f


def test_forward_backward_are_inverse():
    T = ChangeOfVariables(3, 3)
    p = [1, -2, 5]
    assert T.backward(T.forward(p)) == p


def test_separating_j_for_grid_of_critical_points():
    f = mp("x1^4 - 2*x1^2 + 1 + x2^4 - 2*x2^2 + 1")
    gb = buchberger_lex(gradient_ideal(f))
    # sympy.groebner: [x2^3 - x2, x1^3 - x1]
    assert gb == [mp("x1^3 - x1"), mp("x2^3 - x2")]
    with pytest.raises(NotInShapePosition):
        to_shape_basis(gb)
    delta = quotient_dimension(gb)
    T, gb_y, sb = find_separating_j(f, delta)
    assert 1 <= T.j <= (2 - 1) * delta * (delta - 1) // 2
    assert sb.delta == 9 and is_radical_shape(sb)
    g = apply_change_of_variables(f, T)
    grad_g = gradient_ideal(g)
    # V_grad(g) = T V_grad(f): every critical point {-1,0,1}^2 maps to a zero of grad g
    for p in itertools.product((-1, 0, 1), repeat=2):
        y = T.forward(p)
        assert all(d.eval(y) == 0 for d in grad_g)
        assert sb.w(y[0]) == 0 and sb.v[0](y[0]) == y[1]


@settings(max_examples=25, deadline=None)
@given(mpolys(nvars=2, max_degree=3, max_terms=5), mpolys(nvars=2, max_degree=3, max_terms=5))
def test_basis_matches_sympy(p, q):
    gens = [g for g in (p, q) if not g.is_zero()]
    if not gens:
        return
    gb = buchberger(gens, "grevlex")
    ref = sp.groebner([mpoly_to_sympy(g) for g in gens], X[1], X[0], order="grevlex")
    assert sorted(map(str, gb)) == sorted(str(sympy_to_mpoly(e, 2).monic("grevlex")) for e in ref.exprs)
    for g in gens:
        assert normal_form(g, gb, "grevlex").is_zero()


@settings(max_examples=20, deadline=None)
@given(mpolys(nvars=2, max_degree=4, max_terms=6))
def test_random_gradient_systems_reduce_to_zero(f):
    if f.degree < 2:
        return
    gens = [g for g in gradient_ideal(f) if not g.is_zero()]
    gb = buchberger_lex(gens, method="direct")
    if gb == [MPoly.const(1, 2)]:
        return
    for g in gens:
        assert normal_form(g, gb).is_zero()
    if is_zero_dimensional(gb):
        assert fglm(buchberger(gens, "grevlex")) == gb
