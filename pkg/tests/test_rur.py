import random

import mpmath
import pytest
from gmpy2 import mpq

from gradsos.grobner import ShapeBasis, gradient_ideal
from gradsos.polyq import MPoly, UPoly, parse_poly, parse_upoly
from gradsos.rur import (
    RationalParam,
    gradient_shape,
    param_of_gradient_variety,
    param_to_shape,
    shape_to_param,
    shape_to_param_under,
)
from gradsos.univar import gcd

P = parse_upoly
SCHEIDERER = parse_poly("x1^4 + x1*x2^3 + x2^4 + 3*x1^2*x2 + 4*x1*x2^2 + 2*x1^2 - x1 - x2 + 1", 2)
REF_W = P("4*x1^9 + x1^6 - 16*x1^5 - 4*x1^3 - 4*x1^2 - 1")
REF_K1 = P("15*x1^7 - 32*x1^6 - 9*x1^4 - 36*x1^3 - 6*x1 - 4")
REF_K2 = P("-3*x1^6 + 64*x1^5 + 24*x1^3 + 28*x1^2 + 9")


def random_shape_basis(rng: random.Random, max_deg=12, max_n=4) -> ShapeBasis:
    n = rng.randint(1, max_n)
    while True:
        deg = rng.randint(1, max_deg)
        w = UPoly([mpq(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(deg)] + [1])
        if gcd(w, w.derivative()).degree == 0:
            break
    v = [UPoly([mpq(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(rng.randint(0, deg))])
         for _ in range(n - 1)]
    return ShapeBasis(w, v, n)


def test_kappa_of_small_example():
    w, v2 = P("x1^3 - 1/4*x1"), P("-x1")
    rp = shape_to_param(ShapeBasis(w, [v2], 2))
    assert rp.kappa[1] == (v2 * P("3*x1^2 - 1/4")) % w
    assert rp.kappa[0] == (P("x1") * w.derivative()) % w
    rp.check()
    assert param_to_shape(rp) == ShapeBasis(w, [v2], 2)


def test_univariate_case():
    rp = shape_to_param(ShapeBasis(P("x1^2 - 2"), [], 1))
    assert rp.kappa == [(P("x1") * P("2*x1")) % P("x1^2 - 2")]
    sb = param_to_shape(RationalParam(P("x1"), [UPoly()], 0))
    assert sb.w == P("x1") and sb.v == []


def test_round_trip_on_random_shape_bases():
    rng = random.Random(5)
    for _ in range(60):
        sb = random_shape_basis(rng)
        rp = shape_to_param(sb)
        rp.check()
        assert param_to_shape(rp) == sb
        wp = sb.w.derivative()
        for vi, ki in zip(sb.v, rp.kappa[1:]):
            assert (wp * vi - ki) % sb.w == UPoly()
        assert shape_to_param(param_to_shape(rp)) == rp


def test_check_rejects_bad_params():
    with pytest.raises(ValueError):
        RationalParam(P("x1^2"), [UPoly()], 0).check()
    with pytest.raises(ValueError):
        RationalParam(P("x1^2 - 2"), [P("x1")], 0).check()


def test_sum_of_squares_has_one_critical_point():
    rp = param_of_gradient_variety(parse_poly("x1^2 + x2^2", 2))
    assert rp.w == P("x1")
    assert rp.kappa == [UPoly(), UPoly()]


def test_parametrization_of_quartic_hits_critical_points():
    f = parse_poly("2*x1^4 + 2*x1*x2 + x2^2 + 10", 2)
    rp = param_of_gradient_variety(f)
    assert rp.delta == 3
    wp = rp.w.derivative()
    # substitute x_i = kappa_i / w' into each partial, clear denominators, reduce mod w
    for d in gradient_ideal(f):
        num = UPoly()
        for m, c in d.terms.items():
            term = UPoly([c])
            for k, e in zip(rp.kappa, m):
                term = term * k ** e
            num = num + term * wp ** (d.degree - sum(m))
        assert num % rp.w == UPoly()


def test_reference_parametrization_uses_second_coordinate():
    # kappa_2 of the reference values is t w' mod w, so its parameter is x2
    wp = REF_W.derivative()
    assert (P("x1") * wp - REF_K2) % REF_W == UPoly()
    assert (P("x1") * wp - REF_K1) % REF_W != UPoly()


def test_scheiderer_parametrization_matches_reference_after_swap():
    x1, x2 = MPoly.variables(2)
    swapped = SCHEIDERER.substitute([x2, x1])
    rp = param_of_gradient_variety(swapped)
    assert rp.w * 4 == REF_W
    assert rp.kappa[0] * 4 == REF_K2
    assert rp.kappa[1] * 4 == REF_K1


def _mpf(c):
    return mpmath.mpf(int(c.numerator)) / int(c.denominator)


def _ev(p: UPoly, t):
    return mpmath.polyval([_mpf(c) for c in reversed(p.coeffs)], t)


def test_scheiderer_shape_reproduces_critical_points():
    rp = param_of_gradient_variety(SCHEIDERER)
    sb = param_to_shape(rp)
    grads = gradient_ideal(SCHEIDERER)
    tol = mpmath.mpf(10) ** -25
    with mpmath.workdps(50):
        roots = mpmath.polyroots([_mpf(c) for c in reversed(rp.w.coeffs)], maxsteps=200, extraprec=200)
        assert len(roots) == 9
        for t in roots:
            x2 = _ev(sb.v[0], t)
            assert abs(x2 - _ev(rp.kappa[1], t) / _ev(rp.w.derivative(), t)) < tol
            for g in grads:
                val = sum(_mpf(c) * t ** m[0] * x2 ** m[1] for m, c in g.terms.items())
                assert abs(val) < tol


def test_parametrization_under_change_of_variables():
    f = parse_poly("x1^4 - 2*x1^2 + x2^4 - 2*x2^2 + 2", 2)
    gs = gradient_shape(f)
    assert gs.cov is not None
    rp = shape_to_param_under(gs.shape, gs.cov)
    rp.check()
    wp = rp.w.derivative()
    grads = gradient_ideal(f)
    for d in grads:
        num = UPoly()
        for m, c in d.terms.items():
            term = UPoly([c])
            for k, e in zip(rp.kappa, m):
                term = term * k ** e
            num = num + term * wp ** (d.degree - sum(m))
        assert num % rp.w == UPoly()
