"""Command-line front end: ``gradsos certify | verify | bench``."""

from __future__ import annotations

import argparse
import re
import sys
from typing import List, Optional

from . import bench
from .certify import bitsize_metrics, certify, dumps, loads, verify
from .errors import (
    HypothesisViolated,
    NotInShapePosition,
    NotNonnegative,
    NotNonnegativeOnCriticalCurve,
    ParseError,
    PrecisionExhausted,
)
from .polyq import MPoly, parse_poly

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3
EXIT_NEGATIVE = 4
EXIT_PRECISION = 5

_HEADER = re.compile(r"\s*nvars\s*=\s*(\d+)\s*$")


def read_input(path: str) -> MPoly:
    """Input file: ``nvars = k`` on the first line, the polynomial below."""
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("input is not UTF-8", exc.start) from None
    first, _, rest = text.partition("\n")
    m = _HEADER.match(first)
    if not m or int(m.group(1)) < 1:
        raise ParseError("first line must read 'nvars = k' with k >= 1", 0)
    body = " ".join(rest.split())
    if not body:
        raise ParseError("missing polynomial after the nvars line", len(first.encode()) + 1)
    try:
        return parse_poly(body, int(m.group(1)))
    except ParseError as exc:
        # offsets refer to the whitespace-normalised body; report them as such
        raise ParseError(f"in polynomial: {exc}", None) from None


def _metrics_table(cert) -> str:
    m = bitsize_metrics(cert)
    head = ("delta", "d_h", "tau_h", "tau_sos", "t_h", "t_sos")
    vals = (m.delta, m.d_h, m.tau_h, m.tau_sos, f"{m.t_h:.3f}", f"{m.t_sos:.3f}")
    return "\t".join(head) + "\n" + "\t".join(map(str, vals)) + "\n"


def cmd_certify(args) -> int:
    f = read_input(args.input)
    cert = certify(f, args.mode)
    text = dumps(cert)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    out = sys.stdout if args.out else sys.stderr
    out.write(_metrics_table(cert))
    return EXIT_OK


def cmd_verify(args) -> int:
    f = read_input(args.input)
    with open(args.cert, "rb") as fh:
        data = fh.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("certificate is not UTF-8", exc.start) from None
    cert = loads(text)
    report = verify(f, cert)
    sys.stdout.write("\n".join(report.lines()) + "\n")
    sys.stdout.write("result=" + ("ok" if report.ok else "failed") + "\n")
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_bench(args) -> int:
    if args.n < 2:
        raise SystemExit("bench: --n must be at least 2")
    if args.count < 1:
        raise SystemExit("bench: --count must be at least 1")
    if args.jobs < 1:
        raise SystemExit("bench: --jobs must be at least 1")
    polys = bench.generate(args.n, args.d, args.recipe, args.count, args.seed)
    if args.list:
        sys.stdout.write(bench.instance_listing(polys))
        return EXIT_OK
    rows = bench.run_bench(polys, args.mode, jobs=args.jobs, timeout=args.timeout)
    sys.stdout.write(bench.format_table(rows, timings=args.timings))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gradsos",
        description="Exact SOS certificates of non-negativity modulo gradient ideals.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", help="compute a certificate for the polynomial in INPUT")
    c.add_argument("input")
    c.add_argument("--mode", choices=("poly", "frac"), default="poly")
    c.add_argument("--out", help="certificate file (default: stdout)")
    c.set_defaults(func=cmd_certify)

    v = sub.add_parser("verify", help="check CERT against the polynomial in INPUT")
    v.add_argument("input")
    v.add_argument("cert")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="certify seeded random instances and print metrics")
    b.add_argument("--n", type=int, default=2)
    b.add_argument("--d", type=int, choices=(4, 6), default=4)
    b.add_argument("--recipe", choices=("t1", "t2"), default="t1",
                   help="coefficient ranges for d=4 (ignored for d=6)")
    b.add_argument("--count", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--mode", choices=("poly", "frac"), default="poly")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--timeout", type=float, default=None, help="seconds per instance")
    b.add_argument("--timings", action="store_true",
                   help="add wall-clock columns (makes the output non-reproducible)")
    b.add_argument("--list", action="store_true", help="print the instances instead of running them")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (HypothesisViolated, NotInShapePosition) as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (NotNonnegativeOnCriticalCurve, NotNonnegative) as exc:
        print(f"not non-negative: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
