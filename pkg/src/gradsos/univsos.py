"""Weighted rational sums of squares for non-negative univariate polynomials.

Scheme (perturbation and compensation):

1. split off squares: h = g^2 * r with r > 0 on R (r collects the factors
   of odd multiplicity, all free of real roots);
2. pick eps = 2^-k so that r_eps = r - eps * sum_{i<=m} x^(2i) is still
   strictly positive, checked exactly;
3. approximate the complex roots of r_eps, take one from each conjugate
   pair, expand prod (x - z) = A + iB and round A, B to multiples of 2^-p,
   so r_eps ~ lc * (A^2 + B^2);
4. absorb the exact error u = r - lc (A^2 + B^2) with
   c x^(2i+1) = |c|/2 (x^i + sgn(c) x^(i+1))^2 - |c|/2 (x^(2i) + x^(2i+2));
   this succeeds when every leftover even coefficient is non-negative.
   Otherwise p is doubled.

Floating point only ever produces candidate rationals; the returned
decomposition is checked by exact expansion.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import gmpy2
import mpmath
from gmpy2 import mpc, mpfr, mpq, mpz

from .errors import NotNonnegative, PrecisionExhausted
from .polyq import Rational, UPoly, height
from .univar import count_real_roots, is_nonnegative_on_R, squarefree_decomposition

ALGORITHM = "perturb-compensate"


@dataclass
class WeightedSOS:
    """sum c_j q_j^2 with every c_j > 0.

    When ``target`` is given the constructor checks the identity exactly.
    """

    terms: List[Tuple[Rational, UPoly]] = field(default_factory=list)
    target: Optional[UPoly] = field(default=None, repr=False, compare=False)
    algorithm: str = field(default=ALGORITHM, compare=False)

    def __post_init__(self):
        self.terms = [(mpq(c), q) for c, q in self.terms]
        if self.target is not None:
            if not self.weights_positive():
                raise ValueError("weights must be positive")
            if self.expand() != self.target:
                raise ValueError("sum c_j q_j^2 does not reproduce the target")

    def weights_positive(self) -> bool:
        return all(c > 0 for c, _ in self.terms)

    def expand(self) -> UPoly:
        total = UPoly()
        for c, q in self.terms:
            total = total + (q * q) * c
        return total

    @property
    def num_squares(self) -> int:
        return len(self.terms)

    def max_height(self) -> int:
        """Largest coefficient height among the weights and the q_j."""
        best = 1
        for c, q in self.terms:
            best = max(best, height(UPoly([c])), height(q))
        return best


def verify_weighted_sos(h: UPoly, s: WeightedSOS) -> bool:
    """Exact check of sum c_j q_j^2 == h with positive weights."""
    return s.weights_positive() and s.expand() == h


# ---------------------------------------------------------------------------
# complex roots


def _horner_ratio(coeffs, acoeffs, z, n):
    """Newton ratio data for a monic coefficient list (low to high), overflow safe.

    Returns ``(num, den, val, mag)`` with p(z)/p'(z) = num/den.  ``val`` is
    the value that Horner's rule computed (p(z), or the reversal at 1/z when
    |z| > 1) and ``mag`` the same sum with absolute values, which bounds the
    rounding error of ``val``.  ``acoeffs`` holds the |coeffs|.
    """
    az = abs(z)
    if az <= 1:
        p = coeffs[n]
        dp = 0 * z
        mag = acoeffs[n]
        for i in range(n - 1, -1, -1):
            dp = dp * z + p
            p = p * z + coeffs[i]
            mag = mag * az + acoeffs[i]
        return p, dp, p, mag
    # evaluate the reversal at y = 1/z: p(z) = z^n q(y)
    y = 1 / z
    ay = 1 / az
    q = coeffs[0]
    dq = 0 * z
    mag = acoeffs[0]
    for i in range(1, n + 1):
        dq = dq * y + q
        q = q * y + coeffs[i]
        mag = mag * ay + acoeffs[i]
    # p/p' = z q / (n q - y q')
    return z * q, n * q - y * dq, q, mag


def _aberth(coeffs, roots, tol, max_iter, unit, stall=6, noise=1e-3):
    """Aberth-Ehrlich iteration in place; returns True on convergence.

    A root is frozen once its relative correction drops below ``tol``, or
    once its residual is within the rounding error of Horner's rule at unit
    roundoff ``unit``: past that point a correction is noise.  Inside a
    cluster of near-multiple roots the second test is what bounds the work,
    since the iteration there is only linear.  The run also stops once the
    largest correction, already below ``noise``, has not halved for
    ``stall`` sweeps.
    """
    n = len(roots)
    acoeffs = [abs(c) for c in coeffs]
    slack = 4 * n * unit
    active = list(range(n))
    best = None
    flat = 0
    for _ in range(max_iter):
        worst = 0
        still = []
        for k in active:
            zk = roots[k]
            num, den, val, mag = _horner_ratio(coeffs, acoeffs, zk, n)
            if num == 0 or abs(val) <= slack * mag:
                continue
            ratio = num / den if den != 0 else num * 0 + 1
            s = 0 * zk
            for j in range(n):
                if j != k:
                    d = zk - roots[j]
                    if d != 0:
                        s += 1 / d
            corr = ratio / (1 - ratio * s)
            roots[k] = zk - corr
            rel = abs(corr) / max(abs(zk), 1)
            if rel >= tol:
                still.append(k)
            if rel > worst:
                worst = rel
        active = still
        if not active:
            return True
        if best is not None and worst < noise and worst >= best / 2:
            flat += 1
            if flat >= stall:
                return False
        else:
            flat = 0
        if best is None or worst < best:
            best = worst
    return False


def _initial_roots_float(monic: Sequence[Rational]) -> Optional[List[complex]]:
    n = len(monic) - 1
    try:
        cf = [complex(float(c)) for c in monic]
    except OverflowError:
        return None
    if any(cmath.isinf(c) or cmath.isnan(c) for c in cf):
        return None
    # Fujiwara-type radius for the starting circle
    rad = 2 * max(abs(cf[n - i]) ** (1.0 / i) for i in range(1, n + 1))
    rad = max(rad, 1e-3)
    roots = [rad * cmath.exp(2j * cmath.pi * (k + 0.25) / n) for k in range(n)]
    # float rounding stalls well before 1e-13 on ill-conditioned inputs; the
    # result is only a seed for the multiprecision pass
    try:
        _aberth(cf, roots, 1e-10, 300, 2.0 ** -53)
    except (OverflowError, ZeroDivisionError):
        return None
    if any(cmath.isinf(z) or cmath.isnan(z) for z in roots):
        return None
    return roots


def _mpmath_roots(monic: Sequence[Rational], prec: int) -> List[complex]:
    with mpmath.workprec(prec):
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(monic)]
        rts = mpmath.polyroots(cs, maxsteps=400, extraprec=2 * prec)
        return [complex(r) for r in rts]


def approximate_roots(p: UPoly, prec: int, start: Optional[List] = None) -> List:
    """All complex roots of p as gmpy2 mpc values at ``prec`` bits."""
    monic = [c / p.lc for c in p.coeffs]
    if start is None:
        start = _initial_roots_float(monic)
        if start is None:
            start = _mpmath_roots(monic, 64)
    with gmpy2.context(gmpy2.get_context(), precision=prec + 32):
        cs = [mpfr(c) for c in monic]
        roots = [mpc(z) for z in start]
        tol = mpfr(2) ** (-(prec + 8))
        noise = mpfr(2) ** (-(prec // 2))
        # Inside a cluster of near-multiple roots the iteration is only
        # linear until the cluster separates, so the sweep budget grows with
        # the target precision.  Converged roots are frozen, which keeps those
        # late sweeps cheap.  Failure is not fatal: the caller checks the
        # result exactly and retries at higher precision.
        _aberth(cs, roots, tol, 200 + prec // 2, mpfr(2) ** -(prec + 32), noise=noise)
    return roots


# ---------------------------------------------------------------------------
# decomposition


def _round_dyadic(x, prec: int) -> Rational:
    return mpq(mpz(gmpy2.rint(x * (mpz(1) << prec))), mpz(1) << prec)


def _sum_even_powers(m: int) -> UPoly:
    cs = [mpq(0)] * (2 * m + 1)
    for i in range(m + 1):
        cs[2 * i] = mpq(1)
    return UPoly._raw(cs)


def _choose_eps(r: UPoly, max_k: int) -> Tuple[int, Tuple[Rational, UPoly]]:
    """A large eps = 2^-k (k in 0..max_k) keeping r_eps strictly positive.

    k runs through 0, 1, 2, 4, 8, ... until r_eps > 0, then a short
    bisection moves k back towards the smallest working value.
    """
    base = _sum_even_powers(r.degree // 2)

    def attempt(k):
        eps = mpq(1, mpz(1) << k)
        r_eps = r - base * eps
        if r_eps.lc > 0 and count_real_roots(r_eps) == 0:
            return eps, r_eps
        return None

    prev, k = -1, 0
    while True:
        found = attempt(k)
        if found:
            break
        if k >= max_k:
            raise PrecisionExhausted(f"no perturbation eps = 2^-k with k <= {max_k}")
        prev, k = k, min(max(1, 2 * k), max_k)
    lo, hi = prev, k  # lo fails (or is -1), hi works
    # a few bisection steps are enough: only the order of magnitude matters
    while hi - lo > max(1, hi // 8):
        mid = (lo + hi) // 2
        trial = attempt(mid)
        if trial:
            hi, found = mid, trial
        else:
            lo = mid
    return hi, found


def _compensate(u: UPoly, m: int) -> Optional[List[Tuple[Rational, UPoly]]]:
    """Write u as a weighted SOS of binomials, or None if some even slot goes negative."""
    if u.degree > 2 * m:
        return None
    even = [u[2 * i] for i in range(m + 1)]
    out = []
    for i in range(m):
        c = u[2 * i + 1]
        if not c:
            continue
        a = abs(c) / 2
        sgn = 1 if c > 0 else -1
        q = UPoly.monomial(i) + UPoly.monomial(i + 1, sgn)
        out.append((a, q))
        even[i] -= a
        even[i + 1] -= a
    if any(e < 0 for e in even):
        return None
    out.extend((e, UPoly.monomial(i)) for i, e in enumerate(even) if e > 0)
    return out


def _positive_sos(r: UPoly, start_prec: int, max_doublings: int,
                  max_k: int) -> List[Tuple[Rational, UPoly]]:
    """Weighted SOS of a polynomial that is strictly positive on R."""
    m = r.degree // 2
    k, (eps, r_eps) = _choose_eps(r, max_k)
    lc = r_eps.lc
    roots = None
    # rounding errors must land well below eps = 2^-k
    base_prec = max(start_prec, k + 32)
    for attempt in range(max_doublings + 1):
        prec = base_prec << attempt
        roots = approximate_roots(r_eps, prec, roots)
        upper = [z for z in roots if z.imag > 0]
        if len(upper) != m:
            continue
        with gmpy2.context(gmpy2.get_context(), precision=prec + 32):
            poly = [mpc(1)]
            for z in upper:
                nxt = [mpc(0)] * (len(poly) + 1)
                for i, c in enumerate(poly):
                    nxt[i + 1] += c
                    nxt[i] -= c * z
                poly = nxt
            a = [_round_dyadic(c.real, prec) for c in poly]
            b = [_round_dyadic(c.imag, prec) for c in poly]
        a[m] = mpq(1)
        b[m] = mpq(0)
        A, B = UPoly(a), UPoly(b)
        u = r - (A * A + B * B) * lc
        extra = _compensate(u, m)
        if extra is None:
            continue
        terms = [(lc, A)]
        if not B.is_zero():
            terms.append((lc, B))
        return terms + extra
    raise PrecisionExhausted(
        f"compensation failed up to {base_prec << max_doublings} bits (eps = {eps})"
    )


def weighted_sos(h: UPoly, start_prec: int = 64, max_doublings: int = 12,
                 max_k: int = 1 << 14) -> WeightedSOS:
    """Exact weighted SOS decomposition of a polynomial that is >= 0 on R."""
    if h.is_zero():
        return WeightedSOS([], target=h)
    if not is_nonnegative_on_R(h):
        raise NotNonnegative("polynomial takes negative values on R")
    if h.degree == 0:
        return WeightedSOS([(h.lc, UPoly([1]))], target=h)
    g = UPoly([1])
    r = UPoly([h.lc])
    for f, e in squarefree_decomposition(h):
        if e // 2:
            g = g * f ** (e // 2)
        if e % 2:
            r = r * f
    if r.degree == 0:
        terms = [(r.lc, g)]
    else:
        terms = [(c, g * q) for c, q in _positive_sos(r, start_prec, max_doublings, max_k)]
    return WeightedSOS(terms, target=h)
