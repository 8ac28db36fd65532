"""Division of g in Q[x1][x2..xn] by the linear family x_i - a_i/a0.

For i = n down to 2 the current remainder is divided by ``x_i - a_i/a0`` as
a polynomial in x_i (synthetic division / Horner), the quotient becomes
``phi_i`` and the remainder is the current polynomial evaluated at
``x_i = a_i/a0``.  Coefficients live in Q(x1) but only ever have powers of
``a0`` as denominators, so a fraction is stored as ``(numerator, e)``
meaning ``numerator / a0^e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from gmpy2 import mpq

from .polyq import MPoly, Monomial, UPoly


@dataclass(frozen=True)
class A0Frac:
    """num / a0^e."""

    num: UPoly
    e: int


class FracPoly:
    """Polynomial in x2..xn with coefficients num(x1)/a0(x1)^e.

    ``terms`` maps full exponent tuples (x1 exponent always 0) to A0Frac.
    """

    __slots__ = ("nvars", "a0", "terms")

    def __init__(self, nvars: int, a0: UPoly, terms: Dict[Monomial, A0Frac]):
        self.nvars = nvars
        self.a0 = a0
        self.terms = {m: t for m, t in terms.items() if not t.num.is_zero()}

    @classmethod
    def from_cleared(cls, num: MPoly, e: int, a0: UPoly) -> "FracPoly":
        """Inverse of :meth:`cleared`: num / a0^e."""
        return cls(num.nvars, a0, {m: A0Frac(c, e) for m, c in _split(num).items()})

    def is_zero(self) -> bool:
        return not self.terms

    def max_exponent(self) -> int:
        return max((t.e for t in self.terms.values()), default=0)

    def cleared(self, k: int | None = None) -> Tuple[MPoly, int]:
        """(N, k) with self = N / a0^k and N a polynomial in x1..xn."""
        if k is None:
            k = self.max_exponent()
        if k < self.max_exponent():
            raise ValueError("exponent too small to clear all denominators")
        n = self.nvars
        out = MPoly._raw(n, {})
        for m, t in self.terms.items():
            num = t.num * self.a0 ** (k - t.e)
            out = out + num.to_mpoly(n, 0) * MPoly._raw(n, {m: mpq(1)})
        return out, k

    def to_mpoly(self) -> MPoly:
        """Exact conversion when no denominators are left."""
        if self.max_exponent():
            raise ValueError("coefficients still carry a0 denominators")
        return self.cleared(0)[0]

    def __repr__(self) -> str:
        return f"FracPoly({self.nvars}, a0={self.a0}, {len(self.terms)} terms)"


def reduce_frac(num: UPoly, e: int, a0: UPoly) -> A0Frac:
    """Cancel powers of a0 dividing num (exact trial division)."""
    if a0.degree <= 0:
        if e and a0.degree == 0:
            num = num * (1 / a0.lc ** e)
        return A0Frac(num, 0)
    if num.is_zero():
        return A0Frac(num, 0)
    while e > 0:
        q, r = divmod(num, a0)
        if not r.is_zero():
            break
        num, e = q, e - 1
    return A0Frac(num, e)


def _split(g: MPoly) -> Dict[Monomial, UPoly]:
    """Collect g as a polynomial in x2..xn with coefficients in Q[x1]."""
    buckets: Dict[Monomial, Dict[int, object]] = {}
    for m, c in g.terms.items():
        rest = (0,) + m[1:]
        buckets.setdefault(rest, {})[m[0]] = c
    out = {}
    for rest, cs in buckets.items():
        deg = max(cs)
        out[rest] = UPoly([cs.get(i, 0) for i in range(deg + 1)])
    return out


def eliminate(g: MPoly, a0: UPoly, a: Sequence[UPoly]) -> Tuple[List[FracPoly], A0Frac]:
    """Return (phi_2..phi_n, r) with g = sum phi_i (x_i - a_i/a0) + r exactly.

    ``r`` is a fraction in x1 only.  The loop order is fixed (i = n down to 2).
    """
    n = g.nvars
    if a0.is_zero():
        raise ZeroDivisionError("a0 must be nonzero")
    if len(a) != n - 1:
        raise ValueError(f"need {n - 1} polynomials a_2..a_n, got {len(a)}")
    cur = _split(g)
    e_cur = 0
    phis: List[FracPoly] = [None] * (n - 1)  # type: ignore[list-item]
    a0_pows = [UPoly([1])]
    for i in range(n, 1, -1):
        k = i - 1
        ai = a[i - 2]
        # group by the exponent of x_i
        cols: Dict[Monomial, Dict[int, UPoly]] = {}
        for m, c in cur.items():
            rest = m[:k] + (0,) + m[k + 1:]
            cols.setdefault(rest, {})[m[k]] = c
        deg = max((max(c) for c in cols.values()), default=0)
        if deg == 0:
            phis[i - 2] = FracPoly(n, a0, {})
            continue
        while len(a0_pows) <= deg:
            a0_pows.append(a0_pows[-1] * a0)
        phi_terms: Dict[Monomial, A0Frac] = {}
        nxt: Dict[Monomial, UPoly] = {}
        for rest, col in cols.items():
            zero = UPoly()
            # acc = a0^(deg-1-j) * Q_j with Q_{deg-1} = C_deg
            acc = col.get(deg, zero)
            for j in range(deg - 1, -1, -1):
                if not acc.is_zero():
                    mono = rest[:k] + (j,) + rest[k + 1:]
                    phi_terms[mono] = A0Frac(acc, e_cur + deg - 1 - j)
                cj = col.get(j, zero)
                acc = a0_pows[deg - j] * cj + ai * acc if not cj.is_zero() else ai * acc
            if not acc.is_zero():
                nxt[rest] = acc
        phis[i - 2] = FracPoly(n, a0, phi_terms)
        cur = nxt
        e_cur += deg
    zero_mono = (0,) * n
    for m in cur:
        if m != zero_mono:
            raise AssertionError("remainder still depends on x2..xn")
    r = reduce_frac(cur.get(zero_mono, UPoly()), e_cur, a0)
    phis = [
        FracPoly(n, a0, {m: reduce_frac(t.num, t.e, a0) for m, t in p.terms.items()})
        for p in phis
    ]
    return phis, r
