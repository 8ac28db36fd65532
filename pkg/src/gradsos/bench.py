"""Random benchmark instances and the metrics table.

Instances follow

* d = 4: a^4 + b_1^2 + ... + b_n^2 + c + 10^6,
* d = 6: a^6 + b^2 + c + 10^6,

with a dense linear, b_i dense quadratic (b dense cubic for d = 6) and c
dense cubic in n variables.  "Dense" means every monomial of total degree at
most the stated degree, constant included.  Coefficient ranges:

=========  ==============  ==========  ==============
recipe     a               b           c
=========  ==============  ==========  ==============
t1         {-1, 1}         {-3..3}     {-1, 0, 1}
t2, d=6    {-2, -1, 1, 2}  {-3..3}     {-1, 0, 1}
=========  ==============  ==========  ==============

The PRNG is :class:`random.Random` (Mersenne Twister) seeded with
``seed * 1000003 + index``; each coefficient is ``rng.choice(range_tuple)``
with monomials visited in ascending grlex order, so instance ``i`` depends
only on (seed, i) and not on how many instances are requested.
"""

from __future__ import annotations

import random
import signal
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

from .certify import bitsize_metrics, certify, verify
from .errors import GradSOSError
from .polyq import MPoly, format_poly, iter_monomials

A_T1 = (-1, 1)
A_T2 = (-2, -1, 1, 2)
B_RANGE = tuple(range(-3, 4))
C_RANGE = (-1, 0, 1)
SHIFT = 10 ** 6

COLUMNS = ("idx", "n", "d", "mode", "status", "verified", "delta", "d_h", "tau_h", "tau_sos", "squares")
TIMING_COLUMNS = ("t_h", "t_sos")


def _dense(rng: random.Random, n: int, deg: int, values: Sequence[int]) -> MPoly:
    return MPoly(n, {m: rng.choice(values) for m in iter_monomials(n, deg)})


def instance_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed * 1000003 + index)


def generate_instance(n: int, d: int, recipe: str, rng: random.Random) -> MPoly:
    """One random instance; see the module docstring for the recipe."""
    if n < 1:
        raise ValueError("n must be positive")
    if d == 4:
        if recipe not in ("t1", "t2"):
            raise ValueError(f"unknown recipe {recipe!r}")
        a = _dense(rng, n, 1, A_T1 if recipe == "t1" else A_T2)
        bs = [_dense(rng, n, 2, B_RANGE) for _ in range(n)]
        c = _dense(rng, n, 3, C_RANGE)
        f = a ** 4 + c + SHIFT
        for b in bs:
            f = f + b * b
        return f
    if d == 6:
        a = _dense(rng, n, 1, A_T2)
        b = _dense(rng, n, 3, B_RANGE)
        c = _dense(rng, n, 3, C_RANGE)
        return a ** 6 + b * b + c + SHIFT
    raise ValueError("d must be 4 or 6")


def generate(n: int, d: int, recipe: str, count: int, seed: int) -> List[MPoly]:
    return [generate_instance(n, d, recipe, instance_rng(seed, i)) for i in range(count)]


@dataclass
class Row:
    idx: int
    n: int
    d: int
    mode: str
    status: str
    verified: bool = False
    delta: Optional[int] = None
    d_h: Optional[int] = None
    tau_h: Optional[int] = None
    tau_sos: Optional[int] = None
    squares: Optional[int] = None
    t_h: Optional[float] = None
    t_sos: Optional[float] = None

    def cells(self, timings: bool) -> List[str]:
        cols = COLUMNS + (TIMING_COLUMNS if timings else ())
        out = []
        for c in cols:
            v = getattr(self, c)
            if v is None:
                out.append("-")
            elif isinstance(v, bool):
                out.append("yes" if v else "no")
            elif isinstance(v, float):
                out.append(f"{v:.3f}")
            else:
                out.append(str(v))
        return out


class _Timeout(Exception):
    pass


def _alarm(signum, frame):
    raise _Timeout()


def run_instance(args) -> Row:
    """Certify and verify one instance; never raises for pipeline failures."""
    idx, f, mode, timeout = args
    n, d = f.nvars, f.degree
    old = None
    if timeout:
        old = signal.signal(signal.SIGALRM, _alarm)
        signal.setitimer(signal.ITIMER_REAL, timeout)
    try:
        cert = certify(f, mode)
        ok = verify(f, cert).ok
        m = bitsize_metrics(cert)
        return Row(idx, n, d, mode, "ok" if ok else "verify-failed", ok, m.delta, m.d_h,
                   m.tau_h, m.tau_sos, m.num_squares, m.t_h, m.t_sos)
    except _Timeout:
        return Row(idx, n, d, mode, "timeout")
    except GradSOSError as exc:
        return Row(idx, n, d, mode, type(exc).__name__)
    finally:
        if timeout:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old)


def run_bench(polys: Sequence[MPoly], mode: str, jobs: int = 1,
              timeout: Optional[float] = None) -> List[Row]:
    """Rows in instance order, whatever the number of workers."""
    work = [(i, f, mode, timeout) for i, f in enumerate(polys)]
    if jobs <= 1:
        return [run_instance(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_instance, work))


def _mean(values: Iterable) -> str:
    vals = [v for v in values if v is not None]
    return f"{statistics.fmean(vals):.1f}" if vals else "-"


def _max(values: Iterable) -> str:
    vals = [v for v in values if v is not None]
    return str(max(vals)) if vals else "-"


def format_table(rows: Sequence[Row], timings: bool = False) -> str:
    """Tab-separated per-instance rows followed by aggregate rows."""
    cols = COLUMNS + (TIMING_COLUMNS if timings else ())
    lines = ["\t".join(cols)]
    lines += ["\t".join(r.cells(timings)) for r in rows]
    ok = sum(r.verified for r in rows)
    lines.append("")
    lines.append("\t".join(("aggregate", "count", "verified", "max_delta", "max_d_h",
                            "mean_tau_h", "mean_tau_sos") + (("mean_t_h", "mean_t_sos") if timings else ())))
    agg = ["all", str(len(rows)), str(ok), _max(r.delta for r in rows), _max(r.d_h for r in rows),
           _mean(r.tau_h for r in rows), _mean(r.tau_sos for r in rows)]
    if timings:
        agg += [_fmt_time(r.t_h for r in rows), _fmt_time(r.t_sos for r in rows)]
    lines.append("\t".join(agg))
    return "\n".join(lines) + "\n"


def _fmt_time(values: Iterable) -> str:
    vals = [v for v in values if v is not None]
    return f"{statistics.fmean(vals):.3f}" if vals else "-"


def instance_listing(polys: Sequence[MPoly]) -> str:
    return "".join(f"{i}\t{format_poly(f)}\n" for i, f in enumerate(polys))

