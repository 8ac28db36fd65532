"""Univariate toolbox over Q.

Euclidean division, extended gcd, squarefree decomposition and exact real
root counting.  Root counting uses Sturm sequences built from primitive
pseudo-remainders; above ``STURM_MAX_DEGREE`` it switches to Descartes'
rule of signs with bisection (Vincent-Collins-Akritas), which stays exact
but avoids the coefficient blow-up of long Sturm chains.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import gmpy2
from gmpy2 import mpq, mpz

from .polyq import Rational, UPoly, to_rational

STURM_MAX_DEGREE = 24

# primes used for the modular coprimality shortcut
_PRIMES = (2305843009213693951, 4611686018427387847, 9223372036854775783,
           2305843009213693921, 4611686018427387817)


# ---------------------------------------------------------------------------
# division and gcd


def euclid_div(a: UPoly, b: UPoly) -> Tuple[UPoly, UPoly]:
    """Quotient and remainder with a = q*b + r, deg r < deg b."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.degree
    if a.degree < db:
        return UPoly(), a
    r = list(a.coeffs)
    inv = 1 / b.lc
    bc = b.coeffs
    q = [mpq(0)] * (a.degree - db + 1)
    for k in range(a.degree - db, -1, -1):
        c = r[k + db]
        if c == 0:
            continue
        c = c * inv
        q[k] = c
        for i in range(db):
            if bc[i]:
                r[k + i] -= c * bc[i]
        r[k + db] = mpq(0)
    return UPoly._raw(q), UPoly._raw(r[:db])


def ext_gcd(a: UPoly, b: UPoly) -> Tuple[UPoly, UPoly, UPoly]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b), g monic."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    r0, r1 = a, b
    s0, s1 = UPoly([1]), UPoly()
    t0, t1 = UPoly(), UPoly([1])
    while not r1.is_zero():
        q, r = euclid_div(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def _int_poly(p: UPoly) -> List[int]:
    return p.primitive_int()[1]


def _prem(a: List[int], b: List[int]) -> List[int]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over Z."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    delta = len(a) - len(b) + 1
    for _ in range(delta):
        if len(r) - 1 < db:
            r = [c * lb for c in r]
            continue
        c = r[-1]
        r = [x * lb for x in r[:-1]]
        off = len(r) - db
        for i in range(db):
            r[off + i] -= c * b[i]
        while r and r[-1] == 0:
            r.pop()
    return r


def _primitive(c: List[int]) -> List[int]:
    g = mpz(0)
    for x in c:
        g = gmpy2.gcd(g, x)
        if g == 1:
            return c
    if g == 0:
        return c
    return [x // g for x in c]


def _gcd_mod_p_degree(a: Sequence[int], b: Sequence[int], p: int) -> int:
    a = [x % p for x in a]
    b = [x % p for x in b]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            off = len(a) - len(b)
            for i in range(len(b)):
                a[off + i] = (a[off + i] - c * b[i]) % p
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return len(a) - 1


def _coprime_by_modular_test(a: List[int], b: List[int]) -> bool:
    """True only if gcd(a, b) = 1 over Q is proven by some prime."""
    for p in _PRIMES[:3]:
        if a[-1] % p == 0:
            continue
        if _gcd_mod_p_degree(a, b, p) == 0:
            return True
    return False


def gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd over Q (zero if both are zero)."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.degree == 0 or b.degree == 0:
        return UPoly([1])
    ia, ib = _int_poly(a), _int_poly(b)
    if len(ia) < len(ib):
        ia, ib = ib, ia
    if _coprime_by_modular_test(ia, ib):
        return UPoly([1])
    while ib:
        r = _prem(ia, ib)
        ia, ib = ib, _primitive(r)
    return UPoly(ia).monic()


def squarefree_part(h: UPoly) -> UPoly:
    """Monic product of the distinct irreducible factors of h."""
    if h.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    g = gcd(h, h.derivative())
    if g.degree <= 0:
        return h.monic()
    return euclid_div(h, g)[0].monic()


def squarefree_decomposition(h: UPoly) -> List[Tuple[UPoly, int]]:
    """Yun's algorithm: h = lc(h) * prod f_i^e_i, f_i monic squarefree coprime."""
    if h.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    if h.degree == 0:
        return []
    f = h.monic()
    fp = f.derivative()
    a0 = gcd(f, fp)
    if a0.degree == 0:
        return [(f, 1)]
    b = euclid_div(f, a0)[0]
    c = euclid_div(fp, a0)[0]
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = euclid_div(b, a)[0]
        c = euclid_div(d, a)[0]
        d = c - b.derivative()
        i += 1
    return out


# ---------------------------------------------------------------------------
# real roots


def sturm_sequence(p: UPoly) -> List[List[int]]:
    """Signed remainder sequence of (p, p') with contents stripped, as int lists."""
    s0 = _int_poly(p)
    s1 = _int_poly(p.derivative())
    seq = [s0, s1]
    while len(seq[-1]) > 1:
        a, b = seq[-2], seq[-1]
        r = _prem(a, b)
        if not r:
            break
        # prem multiplies by lc(b)^k; keep the sign of the true remainder
        k = len(a) - len(b) + 1
        lc_sign = -1 if (b[-1] < 0 and k % 2 == 1) else 1
        r = _primitive(r)
        if lc_sign > 0:
            r = [-x for x in r]
        seq.append(r)
    return seq


def _eval_homog(c: Sequence[int], num: int, den: int) -> int:
    """den^deg * c(num/den), computed in integers."""
    acc = mpz(0)
    dpow = mpz(1)
    for coef in reversed(c):
        acc = acc * num + coef * dpow
        dpow *= den
    return acc


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _variations(signs: Sequence[int]) -> int:
    s = [x for x in signs if x != 0]
    return sum(1 for u, v in zip(s, s[1:]) if u != v)


def _var_at(seq, x: Optional[Rational], at_minus_inf: bool = False) -> int:
    if x is None:
        if at_minus_inf:
            signs = [_sign(c[-1]) * (-1 if (len(c) - 1) % 2 else 1) for c in seq]
        else:
            signs = [_sign(c[-1]) for c in seq]
    else:
        signs = [_sign(_eval_homog(c, x.numerator, x.denominator)) for c in seq]
    return _variations(signs)


def _sturm_count(p: UPoly, lo: Optional[Rational], hi: Optional[Rational]) -> int:
    seq = sturm_sequence(p)
    # V(a) - V(b) counts roots in (a, b]; zeros are dropped, which keeps the
    # count exact when a or b is a root of some chain element
    va = _var_at(seq, lo, at_minus_inf=True)
    vb = _var_at(seq, hi)
    n = va - vb
    if lo is not None and p(lo) == 0:
        n += 1
    return n


def cauchy_bound(p: UPoly) -> Rational:
    """1 + max |a_i / lc|: every complex root has modulus below this."""
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=mpq(0))


def _taylor_shift1(c: List[int]) -> List[int]:
    """Coefficients of c(x + 1)."""
    a = list(c)
    n = len(a) - 1
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            a[j] += a[j + 1]
    return a


def _descartes_01(c: List[int]) -> int:
    """Sign variations of (x+1)^n c(1/(x+1)): bounds the roots in (0, 1)."""
    return _variations([_sign(x) for x in _taylor_shift1(c[::-1])])


def _roots_in_open_unit(c: List[int]) -> int:
    """Number of roots in (0, 1) of a squarefree integer polynomial."""
    total = 0
    stack = [c]
    while stack:
        q = stack.pop()
        while q and q[0] == 0:  # root at 0 belongs to a neighbouring interval
            q = q[1:]
        if len(q) <= 1:
            continue
        v = _descartes_01(q)
        if v == 0:
            continue
        if v == 1:
            total += 1
            continue
        n = len(q) - 1
        left = [x << (n - i) for i, x in enumerate(q)]  # 2^n q(x/2)
        right = _taylor_shift1(left)  # 2^n q((x+1)/2)
        if right[0] == 0:  # q(1/2) = 0
            total += 1
        stack.append(_primitive(left))
        stack.append(_primitive(right))
    return total


def _taylor_shift(c: List[int], a: int) -> List[int]:
    """Coefficients of c(x + a) for an integer a."""
    out = list(c)
    n = len(out) - 1
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            out[j] += a * out[j + 1]
    return out


def _descartes_count(p: UPoly, lo: Optional[Rational], hi: Optional[Rational]) -> int:
    if lo is None or hi is None:
        b = cauchy_bound(p)
        bound = mpz(2)
        while bound < b:
            bound *= 2
        lo = mpq(-bound) if lo is None else lo
        hi = mpq(bound) if hi is None else hi
    if lo > hi:
        return 0
    if lo == hi:
        return int(p(lo) == 0)
    # roots of p in (lo, hi) <-> roots of p(lo + (hi - lo) t) in (0, 1), all in Z
    c = _int_poly(p)
    n = len(c) - 1
    den = gmpy2.lcm(lo.denominator, hi.denominator)
    a, b = lo * den, hi * den
    a, width = int(a), int(b - a)
    scaled = [x * den ** (n - i) for i, x in enumerate(c)]  # den^n p(y / den)
    shifted = _taylor_shift(scaled, a)
    q = _primitive([x * width ** i for i, x in enumerate(shifted)])
    count = _roots_in_open_unit(q)
    return count + int(p(lo) == 0) + int(p(hi) == 0)


def count_real_roots(h: UPoly, lo=None, hi=None, method: str = "auto") -> int:
    """Number of distinct real roots of h in [lo, hi] (default: all of R).

    ``method`` is ``"sturm"``, ``"descartes"`` or ``"auto"``.
    """
    if h.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    lo = None if lo is None else to_rational(lo)
    hi = None if hi is None else to_rational(hi)
    if lo is not None and hi is not None and lo > hi:
        return 0
    if h.degree == 0:
        return 0
    p = squarefree_part(h)
    if method == "auto":
        method = "sturm" if p.degree <= STURM_MAX_DEGREE else "descartes"
    if method == "sturm":
        return _sturm_count(p, lo, hi)
    if method == "descartes":
        return _descartes_count(p, lo, hi)
    raise ValueError(f"unknown method {method!r}")


def is_nonnegative_on_R(h: UPoly) -> bool:
    """Exact test of h(t) >= 0 for every real t."""
    if h.is_zero():
        return True
    if h.lc < 0 or h.degree % 2:
        return False
    if h.degree == 0:
        return True
    for f, e in squarefree_decomposition(h):
        if e % 2 and count_real_roots(f) > 0:
            return False
    return True


def is_strictly_positive_on_R(h: UPoly) -> bool:
    """h(t) > 0 for every real t."""
    if h.is_zero() or h.lc < 0 or h.degree % 2:
        return False
    return h.degree == 0 or count_real_roots(h) == 0
