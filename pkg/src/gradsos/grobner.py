"""Gradient ideals, Groebner bases and the shape-position machinery.

Lex order throughout is x1 < x2 < ... < xn, so the last basis element to be
eliminated down to is univariate in x1.  For zero-dimensional inputs the lex
basis is obtained by Buchberger in grevlex followed by FGLM conversion; the
direct lex Buchberger run stays available (``method="direct"``) and the two
routes are cross-checked in the test suite.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from gmpy2 import mpq

from .errors import HypothesisViolated, NotInShapePosition
from .polyq import MPoly, Monomial, Rational, UPoly
from .univar import gcd

_BITS = 24
_MASK = (1 << _BITS) - 1


class _Order:
    """Monomial order as an integer key: larger key means larger monomial."""

    def __init__(self, name: str, nvars: int):
        if name not in ("lex", "grevlex"):
            raise ValueError(f"unsupported order {name!r}")
        self.name = name
        self.nvars = nvars

    def key(self, m: Monomial) -> int:
        k = 0
        if self.name == "lex":
            for e in reversed(m):  # xn is the most significant variable
                k = (k << _BITS) | e
            return k
        k = sum(m)
        for e in m:  # ties: smaller exponent of x1 wins, then x2, ...
            k = (k << _BITS) | (_MASK - e)
        return k


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass
class _Elt:
    """Monic basis element: leading monomial plus the remaining terms."""

    lm: Monomial
    tail: List[Tuple[Monomial, Rational]]

    def as_dict(self) -> Dict[Monomial, Rational]:
        d = dict(self.tail)
        d[self.lm] = mpq(1)
        return d


def _make_elt(terms: Dict[Monomial, Rational], order: _Order) -> _Elt:
    lm = max(terms, key=order.key)
    inv = 1 / terms[lm]
    tail = [(m, c * inv) for m, c in terms.items() if m != lm]
    return _Elt(lm, tail)


def _reduce(terms: Dict[Monomial, Rational], basis: Sequence[_Elt], order: _Order) -> Dict[Monomial, Rational]:
    """Full normal form of a term dict modulo monic elements."""
    f = dict(terms)
    key = order.key
    heap = [(-key(m), m) for m in f]
    heapq.heapify(heap)
    rem: Dict[Monomial, Rational] = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, None)
        if c is None:
            continue
        for g in basis:
            if _divides(g.lm, m):
                break
        else:
            rem[m] = c
            continue
        q = _mono_div(m, g.lm)
        for mm, cc in g.tail:
            t = _mono_mul(mm, q)
            v = f.get(t)
            if v is None:
                f[t] = -c * cc
                heapq.heappush(heap, (-key(t), t))
            else:
                v -= c * cc
                if v:
                    f[t] = v
                else:
                    del f[t]
    return rem


def _spoly(a: _Elt, b: _Elt) -> Dict[Monomial, Rational]:
    l = _lcm(a.lm, b.lm)
    qa, qb = _mono_div(l, a.lm), _mono_div(l, b.lm)
    out: Dict[Monomial, Rational] = {}
    for m, c in a.tail:
        t = _mono_mul(m, qa)
        out[t] = out.get(t, 0) + c
    for m, c in b.tail:
        t = _mono_mul(m, qb)
        out[t] = out.get(t, 0) - c
    return {m: c for m, c in out.items() if c}


def _buchberger(polys: List[Dict[Monomial, Rational]], order: _Order) -> List[_Elt]:
    """Reduced Groebner basis (Buchberger, normal selection, both criteria)."""
    basis: List[_Elt] = []
    pending: set = set()
    heap: list = []

    def add(terms):
        g = _make_elt(terms, order)
        k = len(basis)
        basis.append(g)
        for i in range(k):
            l = _lcm(basis[i].lm, g.lm)
            pending.add((i, k))
            heapq.heappush(heap, (order.key(l), i, k))

    for p in polys:
        r = _reduce(p, basis, order)
        if r:
            add(r)
    while heap:
        _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        a, b = basis[i], basis[j]
        if all(x == 0 or y == 0 for x, y in zip(a.lm, b.lm)):
            continue  # coprime leading monomials
        l = _lcm(a.lm, b.lm)
        chain = False
        for k, g in enumerate(basis):
            if k in (i, j) or not _divides(g.lm, l):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                chain = True
                break
        if chain:
            continue
        r = _reduce(_spoly(a, b), basis, order)
        if r:
            add(r)
    return _interreduce(basis, order)


def _interreduce(basis: List[_Elt], order: _Order) -> List[_Elt]:
    keep: List[_Elt] = []
    for idx, g in enumerate(basis):
        redundant = False
        for jdx, h in enumerate(basis):
            if jdx == idx or not _divides(h.lm, g.lm):
                continue
            if h.lm != g.lm or jdx < idx:
                redundant = True
                break
        if not redundant:
            keep.append(g)
    out = []
    for idx, g in enumerate(keep):
        others = keep[:idx] + keep[idx + 1:]
        tail = _reduce(dict(g.tail), others, order)
        out.append(_Elt(g.lm, list(tail.items())))
    out.sort(key=lambda e: order.key(e.lm))
    return out


def _to_dicts(gens: Sequence[MPoly]) -> Tuple[int, List[Dict[Monomial, Rational]]]:
    if not gens:
        raise ValueError("empty generator list")
    n = gens[0].nvars
    for g in gens:
        if g.nvars != n:
            raise ValueError("generators live in different rings")
    return n, [dict(g.terms) for g in gens if not g.is_zero()]


def _to_mpolys(basis: Sequence[_Elt], nvars: int, order: _Order) -> List[MPoly]:
    return [MPoly._raw(nvars, e.as_dict()) for e in basis]


# ---------------------------------------------------------------------------
# public API


def gradient_ideal(f: MPoly) -> List[MPoly]:
    """The n partial derivatives of f, in variable order."""
    if f.is_constant():
        raise HypothesisViolated("constant polynomial: the gradient ideal is trivial")
    return [f.partial_derivative(i) for i in range(1, f.nvars + 1)]


def buchberger(gens: Sequence[MPoly], order: str = "lex") -> List[MPoly]:
    """Reduced Groebner basis, sorted by increasing leading monomial."""
    n, polys = _to_dicts(gens)
    o = _Order(order, n)
    return _to_mpolys(_buchberger(polys, o), n, o)


def normal_form(p: MPoly, gb: Sequence[MPoly], order: str = "lex") -> MPoly:
    """Remainder of p on full reduction by a Groebner basis."""
    o = _Order(order, p.nvars)
    basis = [_make_elt(dict(g.terms), o) for g in gb if not g.is_zero()]
    return MPoly._raw(p.nvars, _reduce(dict(p.terms), basis, o))


def leading_monomials(gb: Sequence[MPoly], order: str = "lex") -> List[Monomial]:
    o = _Order(order, gb[0].nvars) if gb else None
    return [max(g.terms, key=o.key) for g in gb]


def is_zero_dimensional(gb: Sequence[MPoly], order: str = "lex") -> bool:
    """Every variable has a pure power among the leading monomials."""
    if not gb:
        return False
    n = gb[0].nvars
    seen = set()
    for m in leading_monomials(gb, order):
        support = [i for i, e in enumerate(m) if e]
        if not support:
            return True  # the unit ideal has no points, trivially finite
        if len(support) == 1:
            seen.add(support[0])
    return len(seen) == n


def standard_monomials(gb: Sequence[MPoly], order: str = "lex") -> List[Monomial]:
    """Monomials outside the leading-term ideal (zero-dimensional gb only)."""
    if not is_zero_dimensional(gb, order):
        raise HypothesisViolated("ideal is not zero-dimensional")
    n = gb[0].nvars
    lms = leading_monomials(gb, order)
    if any(sum(m) == 0 for m in lms):
        return []
    o = _Order(order, n)
    seen = {(0,) * n}
    stack = [(0,) * n]
    while stack:
        m = stack.pop()
        for i in range(n):
            t = m[:i] + (m[i] + 1,) + m[i + 1:]
            if t not in seen and not any(_divides(l, t) for l in lms):
                seen.add(t)
                stack.append(t)
    return sorted(seen, key=o.key)


def quotient_dimension(gb: Sequence[MPoly], order: str = "lex") -> int:
    """dim_Q Q[x]/I, i.e. the number of complex points counted with multiplicity."""
    return len(standard_monomials(gb, order))


def fglm(gb: Sequence[MPoly], order: str = "grevlex") -> List[MPoly]:
    """Convert a zero-dimensional reduced basis to the reduced lex basis."""
    n = gb[0].nvars
    src = _Order(order, n)
    lex = _Order("lex", n)
    basis = [_make_elt(dict(g.terms), src) for g in gb]
    stair = standard_monomials(gb, order)
    if not stair:
        return [MPoly.const(1, n)]
    index = {m: k for k, m in enumerate(stair)}
    dim = len(stair)

    def nf_vec(terms) -> List[Rational]:
        vec = [mpq(0)] * dim
        for m, c in _reduce(terms, basis, src).items():
            vec[index[m]] = c
        return vec

    unit = [(0,) * i + (1,) + (0,) * (n - i - 1) for i in range(n)]
    # mult[i][s] = NF(x_i * stair[s])
    mult = [[nf_vec({_mono_mul(u, s): mpq(1)}) for s in stair] for u in unit]

    def times(i: int, vec: List[Rational]) -> List[Rational]:
        out = [mpq(0)] * dim
        for s, c in enumerate(vec):
            if c:
                row = mult[i][s]
                for t in range(dim):
                    if row[t]:
                        out[t] += c * row[t]
        return out

    lex_stair: List[Monomial] = []
    echelon: List[Tuple[int, List[Rational], Dict[int, Rational]]] = []
    leads: List[Monomial] = []
    result: List[Dict[Monomial, Rational]] = []
    start = (0,) * n
    heap = [(lex.key(start), start, nf_vec({start: mpq(1)}))]
    visited = set()
    while heap:
        _, m, vec = heapq.heappop(heap)
        if m in visited or any(_divides(l, m) for l in leads):
            continue
        visited.add(m)
        r = list(vec)
        combo: Dict[int, Rational] = {}
        for piv, row, rc in echelon:
            c = r[piv]
            if not c:
                continue
            c = c / row[piv]
            for t in range(dim):
                if row[t]:
                    r[t] -= c * row[t]
            for k, v in rc.items():
                combo[k] = combo.get(k, 0) - c * v
        piv = next((t for t in range(dim) if r[t]), None)
        if piv is None:
            # vec = -sum combo_k vec_k, so m + sum combo_k b_k lies in the ideal
            poly = {m: mpq(1)}
            for k, v in combo.items():
                if v:
                    poly[lex_stair[k]] = v
            result.append(poly)
            leads.append(m)
            continue
        combo[len(lex_stair)] = mpq(1)
        echelon.append((piv, r, combo))
        lex_stair.append(m)
        for i in range(n):
            t = _mono_mul(m, unit[i])
            heapq.heappush(heap, (lex.key(t), t, times(i, vec)))
    result.sort(key=lambda d: lex.key(max(d, key=lex.key)))
    return [MPoly._raw(n, d) for d in result]


def buchberger_lex(gens: Sequence[MPoly], method: str = "auto") -> List[MPoly]:
    """Reduced lex Groebner basis (x1 < ... < xn), increasing leading monomials.

    ``method="auto"`` goes through grevlex + FGLM when the ideal is
    zero-dimensional and falls back to direct lex Buchberger otherwise.
    """
    if method == "direct":
        return buchberger(gens, "lex")
    if method not in ("auto", "fglm"):
        raise ValueError(f"unknown method {method!r}")
    n, polys = _to_dicts(gens)
    if not polys:
        return []
    grev = buchberger(gens, "grevlex")
    if is_zero_dimensional(grev, "grevlex"):
        return fglm(grev, "grevlex")
    if method == "fglm":
        raise HypothesisViolated("FGLM needs a zero-dimensional ideal")
    return buchberger(gens, "lex")


# ---------------------------------------------------------------------------
# shape position


@dataclass
class ShapeBasis:
    """Lex basis [w, x2 - v2, ..., xn - vn] with w, v_i univariate in x1."""

    w: UPoly
    v: List[UPoly] = field(default_factory=list)
    nvars: int = 1

    def __post_init__(self):
        if len(self.v) != self.nvars - 1:
            raise ValueError("need one v_i per variable x2..xn")
        if self.w.degree < 1:
            raise ValueError("w must be non-constant")

    @property
    def delta(self) -> int:
        return self.w.degree

    def to_gb(self) -> List[MPoly]:
        n = self.nvars
        out = [self.w.monic().to_mpoly(n, 0)]
        for i, vi in enumerate(self.v, start=2):
            out.append(MPoly.var(i, n) - vi.to_mpoly(n, 0))
        return out


def to_shape_basis(gb: Sequence[MPoly]) -> ShapeBasis:
    """Read off [w, x2 - v2, ..., xn - vn] from a reduced lex basis."""
    if not gb:
        raise NotInShapePosition("empty basis")
    n = gb[0].nvars
    if len(gb) != n:
        raise NotInShapePosition(f"basis has {len(gb)} elements, expected {n}")
    first = gb[0]
    if first.is_constant():
        raise NotInShapePosition("unit ideal")
    if first.variables_used() != {1}:
        raise NotInShapePosition("first element is not univariate in x1")
    w = first.to_upoly(1).monic()
    v = []
    for i, g in enumerate(gb[1:], start=2):
        xi = MPoly.var(i, n)
        rest = g - xi
        if rest.variables_used() - {1} or g.terms.get(next(iter(xi.terms))) != 1:
            raise NotInShapePosition(f"element {i} is not of the form x{i} - v{i}(x1)")
        vi = (-rest).to_upoly(1) if not rest.is_zero() else UPoly()
        if vi.degree >= w.degree:
            raise NotInShapePosition(f"deg v{i} >= deg w")
        v.append(vi)
    return ShapeBasis(w, v, n)


def is_radical_shape(sb: ShapeBasis) -> bool:
    """A shape-position ideal is radical iff w is squarefree."""
    return gcd(sb.w, sb.w.derivative()).degree == 0


@dataclass(frozen=True)
class ChangeOfVariables:
    """y = T x with y1 = x1 + j x2 + ... + j^(n-1) xn and y_i = x_i for i >= 2."""

    j: int
    n: int

    def first_row(self) -> List[int]:
        return [self.j ** k for k in range(self.n)]

    def forward(self, point: Sequence) -> List:
        """T x for a point x."""
        y = list(point)
        y[0] = sum(c * xi for c, xi in zip(self.first_row(), point))
        return y

    def backward(self, point: Sequence) -> List:
        """T^-1 y for a point y."""
        x = list(point)
        row = self.first_row()
        x[0] = point[0] - sum(c * yi for c, yi in zip(row[1:], point[1:]))
        return x


def apply_change_of_variables(f: MPoly, T: ChangeOfVariables, inverse: bool = False) -> MPoly:
    """g(y) = f(T^-1 y); with ``inverse=True`` returns f(T y) instead."""
    n = f.nvars
    if T.n != n:
        raise ValueError("change of variables has the wrong dimension")
    ys = MPoly.variables(n)
    row = T.first_row()
    sign = 1 if inverse else -1
    x1 = ys[0]
    for c, y in zip(row[1:], ys[1:]):
        x1 = x1 + y * (sign * c)
    return f.substitute([x1] + ys[1:], n)


def find_separating_j(f: MPoly, delta: int) -> Tuple[ChangeOfVariables, List[MPoly], ShapeBasis]:
    """Smallest j in 1..(n-1)delta(delta-1)/2 putting grad(f(T^-1 y)) in shape position.

    Returns the change of variables together with the transformed lex basis
    and its shape form.
    """
    n = f.nvars
    bound = (n - 1) * delta * (delta - 1) // 2
    for j in range(1, bound + 1):
        T = ChangeOfVariables(j, n)
        g = apply_change_of_variables(f, T)
        gb = buchberger_lex(gradient_ideal(g))
        try:
            return T, gb, to_shape_basis(gb)
        except NotInShapePosition:
            continue
    raise HypothesisViolated(
        f"no separating linear form with j <= {bound}; the gradient ideal is not radical"
    )
