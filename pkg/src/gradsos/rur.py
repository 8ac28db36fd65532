"""Rational parametrizations of finite varieties and their shape-basis form.

A :class:`RationalParam` describes ``V = {(k1(t)/w'(t), ..., kn(t)/w'(t)) :
w(t) = 0}`` where ``t`` is the value of the separating linear form
``lambda = x1 + j x2 + ... + j^(n-1) xn`` (``j = 0`` meaning ``lambda = x1``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .errors import HypothesisViolated, NotInShapePosition
from .grobner import (
    ChangeOfVariables,
    ShapeBasis,
    buchberger_lex,
    find_separating_j,
    gradient_ideal,
    is_radical_shape,
    is_zero_dimensional,
    quotient_dimension,
    to_shape_basis,
)
from .polyq import MPoly, UPoly
from .univar import ext_gcd, gcd


def _lambda_row(j: int, n: int) -> List[int]:
    if j == 0:
        return [1] + [0] * (n - 1)
    return [j ** k for k in range(n)]


@dataclass
class RationalParam:
    w: UPoly
    kappa: List[UPoly]
    lambda_j: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def nvars(self) -> int:
        return len(self.kappa)

    @property
    def delta(self) -> int:
        return self.w.degree

    def check(self) -> None:
        """Raise ValueError unless every invariant holds exactly."""
        w = self.w
        if w.degree < 1 or w.lc != 1:
            raise ValueError("w must be monic and non-constant")
        wp = w.derivative()
        if gcd(w, wp).degree != 0:
            raise ValueError("w is not squarefree")
        for k in self.kappa:
            if k.degree >= w.degree:
                raise ValueError("deg kappa_i >= deg w")
        lam = UPoly()
        for c, k in zip(_lambda_row(self.lambda_j, self.nvars), self.kappa):
            lam = lam + k * c
        if (lam - UPoly.x() * wp) % w:
            raise ValueError("lambda(kappa) != t w' mod w")


def shape_to_param(sb: ShapeBasis) -> RationalParam:
    """kappa_1 = t w' mod w and kappa_i = v_i w' mod w."""
    w = sb.w.monic()
    wp = w.derivative()
    kappa = [(UPoly.x() * wp) % w] + [(vi * wp) % w for vi in sb.v]
    return RationalParam(w, kappa, 0)


def param_to_shape(rp: RationalParam) -> ShapeBasis:
    """v_i = b kappa_i mod w where a w + b w' = 1."""
    if rp.lambda_j != 0:
        raise ValueError("param_to_shape needs lambda = x1")
    w = rp.w.monic()
    g, _, b = ext_gcd(w, w.derivative())
    if g.degree != 0:
        raise HypothesisViolated("w is not squarefree: no Bezout identity with w'")
    v = [(b * k) % w for k in rp.kappa[1:]]
    return ShapeBasis(w, v, rp.nvars)


def shape_to_param_under(sb: ShapeBasis, T: Optional[ChangeOfVariables]) -> RationalParam:
    """Parametrization in x-coordinates of a shape basis computed in y = T x.

    The y-frame basis reads y1 = t, y_i = v_i(t); then x_i = v_i(t) for i >= 2
    and x1 = t - sum_i j^(i-1) v_i(t).
    """
    if T is None or T.j == 0:
        return shape_to_param(sb)
    w = sb.w.monic()
    wp = w.derivative()
    x1 = UPoly.x()
    for c, vi in zip(T.first_row()[1:], sb.v):
        x1 = x1 - vi * c
    kappa = [(x1 * wp) % w] + [(vi * wp) % w for vi in sb.v]
    return RationalParam(w, kappa, T.j)


@dataclass
class GradientShape:
    """Everything the pipelines need about V_grad(f)."""

    shape: ShapeBasis
    cov: Optional[ChangeOfVariables]
    delta: int


def gradient_shape(f: MPoly, require_radical: bool = True) -> GradientShape:
    """Shape basis of grad(f), after a separating change of variables if needed.

    With ``cov`` set, ``shape`` is the basis of the gradient ideal of
    f(T^-1 y), expressed in the y variables.  With ``require_radical=False``
    a shape basis with non-squarefree w is returned instead of raising; the
    caller must then check :func:`is_radical_shape` itself.
    """
    gb = buchberger_lex(gradient_ideal(f))
    if len(gb) == 1 and gb[0].is_constant():
        raise HypothesisViolated("the gradient ideal is <1>: f has no critical points")
    if not is_zero_dimensional(gb):
        raise HypothesisViolated("the gradient ideal is not zero-dimensional")
    dim = quotient_dimension(gb)
    cov = None
    try:
        sb = to_shape_basis(gb)
    except NotInShapePosition:
        if f.nvars == 1:
            raise
        cov, _, sb = find_separating_j(f, dim)
    gs = GradientShape(sb, cov, dim)
    if require_radical:
        check_radical(gs)
    return gs


def check_radical(gs: GradientShape) -> None:
    if not is_radical_shape(gs.shape) or gs.shape.delta != gs.delta:
        raise HypothesisViolated("the gradient ideal is not radical (w is not squarefree)")


def param_of_gradient_variety(f: MPoly) -> RationalParam:
    """A rational parametrization of the complex critical points of f."""
    gs = gradient_shape(f)
    rp = shape_to_param_under(gs.shape, gs.cov)
    d = f.degree
    rp.meta = {"bezout_bound": (d - 1) ** f.nvars, "route": "groebner"}
    return rp
