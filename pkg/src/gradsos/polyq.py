"""Exact rational scalars, sparse multivariate and dense univariate polynomials.

The scalar type is :class:`gmpy2.mpq`, which keeps every value in lowest
terms with a positive denominator.  Nothing in this module touches floats.

Polynomial text uses the grammar::

    expression ::= term (('+'|'-') term)*
    term       ::= coeff ('*' factor)* | factor ('*' factor)*
    factor     ::= 'x' INDEX ('^' EXP)?
    coeff      ::= INT ('/' POSINT)?

with variables ``x1 .. xn`` and insignificant whitespace.  A leading sign on
the first term is accepted.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

import gmpy2
from gmpy2 import mpq, mpz

from .errors import ParseError

Rational = type(mpq(0))
Monomial = Tuple[int, ...]

_ZERO = mpq(0)
_ONE = mpq(1)


def to_rational(value) -> Rational:
    """Coerce ints, Fractions, mpq and rational strings to ``mpq``."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact coefficients")
    return mpq(value)


# ---------------------------------------------------------------------------
# bitsize / height


def int_bitsize(b) -> int:
    """floor(log2 |b|) + 1, with the convention bitsize(0) = 1."""
    b = abs(int(b))
    return 1 if b == 0 else b.bit_length()


def rational_height(c) -> int:
    """bitsize(a) + bitsize(b) for c = a/b in lowest terms (integers use b = 1)."""
    c = to_rational(c)
    return int_bitsize(c.numerator) + int_bitsize(c.denominator)


def height(p) -> int:
    """Maximal height over the nonzero coefficients; 1 for the zero polynomial."""
    if isinstance(p, (MPoly, UPoly)):
        coeffs = [c for c in p.coefficients() if c != 0]
    else:
        coeffs = [to_rational(p)] if p != 0 else []
    if not coeffs:
        return 1
    return max(rational_height(c) for c in coeffs)


# ---------------------------------------------------------------------------
# monomial orders


def grlex_key(m: Monomial):
    return (sum(m), m)


def lex_key(m: Monomial):
    """Lex with x1 < x2 < ... < xn: the last variable is the most significant."""
    return m[::-1]


def grevlex_key(m: Monomial):
    # larger key = larger monomial; ties on degree go to the smaller power of
    # the last variable
    return (sum(m), tuple(-e for e in m))


ORDERS = {"lex": lex_key, "grevlex": grevlex_key, "grlex": grlex_key}


# ---------------------------------------------------------------------------
# univariate


class UPoly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of t**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Rational, ...] = tuple(cs)

    @classmethod
    def _raw(cls, cs: List[Rational]) -> "UPoly":
        # trusted constructor: cs already holds mpq values
        while cs and cs[-1] == 0:
            cs.pop()
        obj = object.__new__(cls)
        obj.coeffs = tuple(cs)
        return obj

    @classmethod
    def monomial(cls, deg: int, c=1) -> "UPoly":
        return cls([0] * deg + [c])

    @classmethod
    def x(cls) -> "UPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "UPoly":
        return cls([c])

    # -- basic queries
    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Rational:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def coefficients(self) -> Tuple[Rational, ...]:
        return self.coeffs

    def __getitem__(self, i: int) -> Rational:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def __len__(self) -> int:
        return len(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Rational, Fraction)):
            return self.coeffs == UPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("UPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"UPoly({format_upoly(self)!r})"

    def __str__(self) -> str:
        return format_upoly(self)

    # -- arithmetic
    def _coerce(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            return other
        return UPoly([other])

    def __add__(self, other) -> "UPoly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly._raw([-c for c in self.coeffs])

    def __sub__(self, other) -> "UPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            c = to_rational(other)
            if c == 0:
                return UPoly()
            return UPoly._raw([x * c for x in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly()
        if len(a) == 1:
            return other * a[0]
        if len(b) == 1:
            return self * b[0]
        ia, da = _int_form(a)
        ib, db = _int_form(b)
        prod = _int_convolve(ia, ib)
        den = da * db
        return UPoly._raw([mpq(c, den) for c in prod])

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UPoly":
        if e < 0:
            raise ValueError("negative exponent")
        result = UPoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other) -> Tuple["UPoly", "UPoly"]:
        from .univar import euclid_div

        return euclid_div(self, self._coerce(other))

    def __mod__(self, other) -> "UPoly":
        return divmod(self, other)[1]

    def __floordiv__(self, other) -> "UPoly":
        return divmod(self, other)[0]

    def monic(self) -> "UPoly":
        if not self.coeffs:
            return self
        return self * (1 / self.lc)

    def derivative(self) -> "UPoly":
        return UPoly._raw([c * i for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, t):
        """Horner evaluation; exact for rationals, also accepts UPoly/MPoly."""
        if isinstance(t, (UPoly, MPoly)):
            acc = t * 0
            for c in reversed(self.coeffs):
                acc = acc * t + c
            return acc
        if isinstance(t, (int, Fraction)):
            t = to_rational(t)
        acc = 0 * t
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def compose(self, inner: "UPoly") -> "UPoly":
        return self(inner)

    def scale_var(self, s) -> "UPoly":
        """p(s*t)."""
        s = to_rational(s)
        out, pw = [], _ONE
        for c in self.coeffs:
            out.append(c * pw)
            pw *= s
        return UPoly._raw(out)

    def reflect(self) -> "UPoly":
        """p(-t)."""
        return UPoly._raw([-c if i & 1 else c for i, c in enumerate(self.coeffs)])

    def to_mpoly(self, nvars: int, var: int = 0) -> "MPoly":
        terms = {}
        for i, c in enumerate(self.coeffs):
            if c != 0:
                m = [0] * nvars
                m[var] = i
                terms[tuple(m)] = c
        return MPoly._raw(nvars, terms)

    def primitive_int(self) -> Tuple[Rational, List[int]]:
        """Return (content, ints) with self = content * ints, ints primitive, lc > 0."""
        if not self.coeffs:
            return _ZERO, []
        ints, den = _int_form(self.coeffs)
        g = mpz(0)
        for c in ints:
            g = gmpy2.gcd(g, c)
            if g == 1:
                break
        if ints[-1] < 0:
            g = -g
        return mpq(g, den), [c // g for c in ints]


def _int_form(coeffs: Sequence[Rational]) -> Tuple[List[int], int]:
    """Common-denominator integer form: coeffs = ints / den."""
    den = mpz(1)
    for c in coeffs:
        d = c.denominator
        if d != 1:
            den = gmpy2.lcm(den, d)
    if den == 1:
        return [c.numerator for c in coeffs], den
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def _int_convolve(a: Sequence[int], b: Sequence[int]) -> List[int]:
    if len(a) < len(b):
        a, b = b, a
    out = [mpz(0)] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        if bj == 0:
            continue
        for i, ai in enumerate(a):
            out[i + j] += ai * bj
    return out


# ---------------------------------------------------------------------------
# multivariate


class MPoly:
    """Sparse polynomial over Q in ``nvars`` variables.

    ``terms`` maps exponent tuples to nonzero ``mpq`` coefficients.  Values
    are treated as immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Monomial, object] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        self.nvars = nvars
        clean: Dict[Monomial, Rational] = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != nvars or any(e < 0 for e in m):
                raise ValueError(f"bad monomial {m} for {nvars} variables")
            c = to_rational(c)
            if c != 0:
                clean[m] = clean.get(m, _ZERO) + c
                if clean[m] == 0:
                    del clean[m]
        self.terms = clean

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Monomial, Rational]) -> "MPoly":
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def var(cls, i: int, nvars: int) -> "MPoly":
        """The variable x_i (1-based)."""
        if not 1 <= i <= nvars:
            raise ValueError(f"variable index {i} out of range 1..{nvars}")
        m = [0] * nvars
        m[i - 1] = 1
        return cls._raw(nvars, {tuple(m): _ONE})

    @classmethod
    def const(cls, c, nvars: int) -> "MPoly":
        c = to_rational(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c != 0 else {})

    @classmethod
    def variables(cls, nvars: int) -> List["MPoly"]:
        return [cls.var(i, nvars) for i in range(1, nvars + 1)]

    # -- queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    @property
    def degree(self) -> int:
        """Total degree, -1 for zero."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        """Degree in x_i (1-based), -1 for zero."""
        return max((m[i - 1] for m in self.terms), default=-1)

    def coefficients(self) -> List[Rational]:
        return list(self.terms.values())

    def constant_term(self) -> Rational:
        return self.terms.get((0,) * self.nvars, _ZERO)

    def sorted_terms(self, order: str = "grlex", reverse: bool = True):
        key = ORDERS[order]
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=reverse)

    def leading(self, order: str = "lex") -> Tuple[Monomial, Rational]:
        key = ORDERS[order]
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def variables_used(self) -> set:
        return {i + 1 for m in self.terms for i, e in enumerate(m) if e}

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Rational, Fraction)):
            c = to_rational(other)
            return self.terms == ({(0,) * self.nvars: c} if c != 0 else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MPoly({self.nvars}, {format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # -- arithmetic
    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError(
                    f"variable-count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, UPoly):
            return other.to_mpoly(self.nvars)
        return MPoly.const(other, self.nvars)

    def __add__(self, other) -> "MPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v == 0:
                    del out[m]
                else:
                    out[m] = v
        return MPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, (MPoly, UPoly)):
            c = to_rational(other)
            if c == 0:
                return MPoly._raw(self.nvars, {})
            return MPoly._raw(self.nvars, {m: v * c for m, v in self.terms.items()})
        other = self._coerce(other)
        out: Dict[Monomial, Rational] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return MPoly._raw(self.nvars, {m: c for m, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "MPoly":
        if e < 0:
            raise ValueError("negative exponent")
        result = MPoly.const(1, self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_term(self, mono: Monomial, c) -> "MPoly":
        c = to_rational(c)
        return MPoly._raw(
            self.nvars,
            {tuple(a + b for a, b in zip(m, mono)): v * c for m, v in self.terms.items()},
        )

    def partial_derivative(self, i: int) -> "MPoly":
        """d/dx_i with 1 <= i <= nvars."""
        if not 1 <= i <= self.nvars:
            raise ValueError(f"variable index {i} out of range 1..{self.nvars}")
        k = i - 1
        out = {}
        for m, c in self.terms.items():
            e = m[k]
            if e:
                mm = list(m)
                mm[k] = e - 1
                out[tuple(mm)] = c * e
        return MPoly._raw(self.nvars, out)

    def __call__(self, *point):
        return self.eval(point)

    def eval(self, point: Sequence):
        """Evaluate at a point (rationals, or anything supporting + and *)."""
        if len(point) != self.nvars:
            raise ValueError("point has the wrong number of coordinates")
        pt = [to_rational(v) if isinstance(v, (int, Fraction)) else v for v in point]
        total = _ZERO
        for m, c in self.terms.items():
            t = c
            for v, e in zip(pt, m):
                if e:
                    t = t * v ** e
            total = total + t
        return total

    def substitute(self, values: Sequence["MPoly"], nvars: int | None = None) -> "MPoly":
        """Replace x_i by values[i] (MPolys in ``nvars`` variables)."""
        if len(values) != self.nvars:
            raise ValueError("need one substitution per variable")
        nv = nvars if nvars is not None else values[0].nvars
        powers: List[Dict[int, MPoly]] = [{0: MPoly.const(1, nv)} for _ in values]

        def pw(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = pw(i, e - 1) * values[i]
            return cache[e]

        out = MPoly._raw(nv, {})
        for m, c in self.terms.items():
            t = MPoly.const(c, nv)
            for i, e in enumerate(m):
                if e:
                    t = t * pw(i, e)
            out = out + t
        return out

    def to_upoly(self, var: int = 1) -> UPoly:
        """View as univariate in x_var (1-based); fails if other variables occur."""
        k = var - 1
        coeffs: Dict[int, Rational] = {}
        for m, c in self.terms.items():
            if any(e for j, e in enumerate(m) if j != k):
                raise ValueError("polynomial depends on other variables")
            coeffs[m[k]] = c
        deg = max(coeffs, default=-1)
        return UPoly([coeffs.get(i, 0) for i in range(deg + 1)])

    def monic(self, order: str = "lex") -> "MPoly":
        if not self.terms:
            return self
        return self * (1 / self.leading(order)[1])


# ---------------------------------------------------------------------------
# printing


def format_coeff(c) -> str:
    c = to_rational(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _format_monomial(m: Monomial, names: Sequence[str] | None = None) -> str:
    parts = []
    for i, e in enumerate(m):
        if e:
            name = names[i] if names else f"x{i + 1}"
            parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _join_terms(items, names=None) -> str:
    out = []
    for m, c in items:
        mono = _format_monomial(m, names)
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{format_coeff(a)}*{mono}"
        else:
            body = format_coeff(a)
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


def format_poly(p: MPoly) -> str:
    """Deterministic text in descending graded-lex order (x1 > x2 > ...)."""
    return _join_terms(p.sorted_terms("grlex", reverse=True))


def format_upoly(p: UPoly, var: str = "x1") -> str:
    items = [((i,), c) for i, c in reversed(list(enumerate(p.coeffs))) if c != 0]
    return _join_terms(items, [var])


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"(\d+)|(x)(\d+)|\^|\*|/|\+|-")


def _tokenize(text: str):
    for k, ch in enumerate(text):
        if ord(ch) > 127:
            raise ParseError(f"unexpected character {ch!r}", len(text[:k].encode("utf-8")))
    # ASCII only from here on, so character offsets equal byte offsets
    pos, toks = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            toks.append(("INT", int(m.group(1)), pos))
        elif m.group(2):
            toks.append(("VAR", int(m.group(3)), pos))
        else:
            sym = m.group(0).strip()
            toks.append((sym, sym, pos))
        pos = m.end()
    toks.append(("END", None, len(text)))
    return toks


def parse_poly(text: str, nvars: int) -> MPoly:
    """Parse ``text`` into an MPoly in ``nvars`` variables (strict)."""
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind):
        nonlocal i
        tok = toks[i]
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[0]}", tok[2])
        i += 1
        return tok

    def factor(mono):
        tok = take("VAR")
        idx = tok[1]
        if not 1 <= idx <= nvars:
            raise ParseError(f"variable x{idx} outside x1..x{nvars}", tok[2])
        exp = 1
        if peek()[0] == "^":
            take("^")
            exp = take("INT")[1]
        mono[idx - 1] += exp

    def term():
        mono = [0] * nvars
        coeff = _ONE
        if peek()[0] == "INT":
            num = take("INT")[1]
            if peek()[0] == "/":
                tok = take("/")
                den = take("INT")[1]
                if den == 0:
                    raise ParseError("zero denominator", tok[2])
                coeff = mpq(num, den)
            else:
                coeff = mpq(num)
        elif peek()[0] == "VAR":
            factor(mono)
        else:
            tok = peek()
            raise ParseError(f"expected a term, found {tok[0]}", tok[2])
        while peek()[0] == "*":
            take("*")
            factor(mono)
        return tuple(mono), coeff

    terms: Dict[Monomial, Rational] = {}
    sign = 1
    if peek()[0] in ("+", "-"):
        sign = -1 if take(peek()[0])[0] == "-" else 1
    while True:
        m, c = term()
        terms[m] = terms.get(m, _ZERO) + sign * c
        kind = peek()[0]
        if kind == "END":
            break
        if kind not in ("+", "-"):
            tok = peek()
            raise ParseError(f"expected '+', '-' or end of input, found {tok[0]}", tok[2])
        sign = -1 if take(kind)[0] == "-" else 1
    return MPoly(nvars, terms)


def parse_upoly(text: str) -> UPoly:
    """Parse a polynomial in x1 only."""
    return parse_poly(text, 1).to_upoly(1)


def iter_monomials(nvars: int, max_deg: int) -> Iterator[Monomial]:
    """All exponent vectors of total degree <= max_deg, ascending grlex."""
    def rec(k, budget):
        if k == nvars:
            yield ()
            return
        for e in range(budget + 1):
            for rest in rec(k + 1, budget - e):
                yield (e,) + rest

    mons = list(rec(0, max_deg))
    mons.sort(key=grlex_key)
    return iter(mons)
