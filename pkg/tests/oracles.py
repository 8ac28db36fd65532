"""Brute-force oracles that share no code with the package."""

import mpmath

from gradsos.polyq import UPoly


def _mp(p: UPoly):
    return [mpmath.mpf(int(c.numerator)) / int(c.denominator) for c in p.coeffs]


def _ev(cs, t):
    acc = mpmath.mpf(0)
    for c in reversed(cs):
        acc = acc * t + c
    return acc


def _bound(cs):
    lc = abs(cs[-1])
    return 1 + max(abs(c) / lc for c in cs[:-1])


def brute_nonnegative(p: UPoly, grid: int = 4000, tol=mpmath.mpf(10) ** -60) -> bool:
    """min p over R >= 0, via grid scanning of p' and bisection of its sign changes."""
    if p.is_zero():
        return True
    if p.degree % 2 or p.lc < 0:
        return False
    if p.degree == 0:
        return True
    with mpmath.workdps(120):
        cs = _mp(p)
        ds = [i * c for i, c in enumerate(cs)][1:]
        b = _bound(cs) + 1
        step = 2 * b / grid
        ts = [-b + k * step for k in range(grid + 1)]
        vals = [_ev(ds, t) for t in ts]
        best = min(_ev(cs, -b), _ev(cs, b))
        for k in range(grid):
            lo, hi, flo = ts[k], ts[k + 1], vals[k]
            if vals[k] == 0:
                best = min(best, _ev(cs, lo))
            if flo < 0 < vals[k + 1]:
                for _ in range(300):
                    mid = (lo + hi) / 2
                    fm = _ev(ds, mid)
                    if fm < 0:
                        lo = mid
                    else:
                        hi = mid
                best = min(best, _ev(cs, (lo + hi) / 2))
        return best >= -tol


def grid_sign_changes(p: UPoly, lo, hi, grid: int = 2000) -> int:
    """Sign changes of p on a uniform grid; a lower bound for the number of roots in [lo, hi]."""
    with mpmath.workdps(60):
        cs = _mp(p)
        step = (mpmath.mpf(hi) - lo) / grid
        signs = []
        for k in range(grid + 1):
            v = _ev(cs, lo + k * step)
            if v != 0:
                signs.append(v > 0)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)
