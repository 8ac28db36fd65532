"""SOS certificates modulo the gradient ideal: pipelines, verifier, text format.

Two pipelines:

* :func:`sos_shape` writes f = sum c_j q_j(x1)^2 + sum_i phi_i (x_i - v_i(x1))
  using the shape basis of the gradient ideal;
* :func:`sos_grad` writes (w')^d f = sum c_j q_j(x1)^2 + sum_i phi_i (w' x_i - k_i)
  using a rational parametrization (phi_i may carry powers of w' as
  denominators).

When x1 does not separate the critical points, both work on
g(y) = f(T^-1 y) with y1 = x1 + j x2 + ... + j^(n-1) xn and the certificate
records j; every univariate piece is then read at u(x) = y1.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

from .eliminate import FracPoly, eliminate
from .errors import (
    GradSOSError,
    NotNonnegativeOnCriticalCurve,
    ParseError,
)
from .grobner import (
    ChangeOfVariables,
    ShapeBasis,
    apply_change_of_variables,
    buchberger,
    gradient_ideal,
    normal_form,
)
from .polyq import MPoly, UPoly, format_coeff, format_poly, format_upoly, height, parse_poly, to_rational
from .rur import RationalParam, check_radical, gradient_shape, shape_to_param
from .univar import is_nonnegative_on_R
from .univsos import ALGORITHM, WeightedSOS, weighted_sos

HEADER = "gradsos-certificate 1"


@dataclass
class PolyCertificate:
    nvars: int
    degree: int
    delta: int
    shape: ShapeBasis
    sos: WeightedSOS
    phi: List[MPoly]
    cov: Optional[ChangeOfVariables] = None
    phi1: Optional[MPoly] = None
    h: Optional[UPoly] = None
    timings: Dict[str, float] = field(default_factory=dict, compare=False)
    meta: Dict[str, str] = field(default_factory=dict, compare=False)

    mode = "poly"


@dataclass
class FracCertificate:
    nvars: int
    degree: int
    delta: int
    param: RationalParam
    sos: WeightedSOS
    phi: List[FracPoly]
    cov: Optional[ChangeOfVariables] = None
    h: Optional[UPoly] = None
    timings: Dict[str, float] = field(default_factory=dict, compare=False)
    meta: Dict[str, str] = field(default_factory=dict, compare=False)

    mode = "frac"


Certificate = Union[PolyCertificate, FracCertificate]


@dataclass
class VerifyReport:
    identity_holds: bool
    weights_positive: bool
    multipliers_in_gradient_ideal: bool
    attainment_assumed: bool = True
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.identity_holds and self.weights_positive and self.multipliers_in_gradient_ideal

    def lines(self) -> List[str]:
        out = [
            f"identity_holds={str(self.identity_holds).lower()}",
            f"weights_positive={str(self.weights_positive).lower()}",
            f"multipliers_in_gradient_ideal={str(self.multipliers_in_gradient_ideal).lower()}",
            f"attainment_assumed={str(self.attainment_assumed).lower()}",
        ]
        out.extend(f"note: {n}" for n in self.notes)
        return out


@dataclass
class Metrics:
    delta: int
    d_h: int
    tau_h: int
    tau_sos: int
    t_h: float
    t_sos: float
    num_squares: int


# ---------------------------------------------------------------------------
# pipelines


def _frame(f: MPoly, require_radical=False):
    gs = gradient_shape(f, require_radical=require_radical)
    g = f if gs.cov is None else apply_change_of_variables(f, gs.cov)
    return gs, g


def _certify_h(h: UPoly, gs) -> WeightedSOS:
    # non-negativity first: a negative h refutes f >= 0 whatever the radicality
    if not is_nonnegative_on_R(h):
        raise NotNonnegativeOnCriticalCurve(
            "f restricted to the critical curve takes negative values, so f is not >= 0"
        )
    check_radical(gs)
    return weighted_sos(h)


def sos_shape(f: MPoly) -> PolyCertificate:
    """Polynomial SOS certificate of f modulo its gradient ideal."""
    n = f.nvars
    t0 = time.perf_counter()
    gs, g = _frame(f)
    sb = gs.shape
    phis, r = eliminate(g, UPoly([1]), sb.v)
    h = r.num
    phi = [p.to_mpoly() for p in phis]
    t1 = time.perf_counter()
    sos = _certify_h(h, gs)
    t2 = time.perf_counter()
    return PolyCertificate(
        nvars=n,
        degree=f.degree,
        delta=gs.delta,
        shape=sb,
        sos=sos,
        phi=phi,
        cov=gs.cov,
        phi1=MPoly(n) if gs.cov is not None else None,
        h=h,
        timings={"t_h": t1 - t0, "t_sos": t2 - t1},
        meta={"algorithm": sos.algorithm},
    )


def sos_grad(f: MPoly) -> FracCertificate:
    """Certificate with rational-fraction coefficients over a parametrization."""
    n = f.nvars
    d = f.degree
    t0 = time.perf_counter()
    gs, g = _frame(f)
    rp = shape_to_param(gs.shape)
    a0 = rp.w.derivative()
    big = g * (a0 ** d).to_mpoly(n, 0)
    phis, r = eliminate(big, a0, rp.kappa[1:])
    if r.e:
        raise AssertionError("remainder of (w')^d f is not a polynomial")
    h = r.num
    t1 = time.perf_counter()
    sos = _certify_h(h, gs)
    t2 = time.perf_counter()
    return FracCertificate(
        nvars=n,
        degree=d,
        delta=gs.delta,
        param=rp,
        sos=sos,
        phi=phis,
        cov=gs.cov,
        h=h,
        timings={"t_h": t1 - t0, "t_sos": t2 - t1},
        meta={"algorithm": sos.algorithm},
    )


def certify(f: MPoly, mode: str = "poly") -> Certificate:
    if mode == "poly":
        return sos_shape(f)
    if mode == "frac":
        return sos_grad(f)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# verification


def _u_of_x(cov: Optional[ChangeOfVariables], n: int) -> MPoly:
    """The polynomial substituted for the univariate variable."""
    if cov is None:
        return MPoly.var(1, n)
    u = MPoly(n)
    for c, x in zip(cov.first_row(), MPoly.variables(n)):
        u = u + x * c
    return u


def _univ(p: UPoly, u: MPoly, n: int) -> MPoly:
    return p.to_mpoly(1, 0).substitute([u], n)


def _back(p: MPoly, cov: Optional[ChangeOfVariables]) -> MPoly:
    """phi(y) -> phi(T x)."""
    return p if cov is None else apply_change_of_variables(p, cov, inverse=True)


def _sos_part(sos: WeightedSOS, u: MPoly, n: int) -> MPoly:
    total = UPoly()
    for c, q in sos.terms:
        total = total + (q * q) * c
    return _univ(total, u, n)


def _identity_and_multipliers(f: MPoly, cert: Certificate):
    n = f.nvars
    u = _u_of_x(cert.cov, n)
    xs = MPoly.variables(n)
    if isinstance(cert, PolyCertificate):
        sb = cert.shape
        rhs = _sos_part(cert.sos, u, n)
        mults = []
        for i, (vi, phi) in enumerate(zip(sb.v, cert.phi), start=2):
            m = xs[i - 1] - _univ(vi, u, n)
            mults.append(m)
            rhs = rhs + _back(phi, cert.cov) * m
        w_u = _univ(sb.w, u, n)
        # w itself must vanish on V_grad(f), whether or not it carries a multiplier
        mults.append(w_u)
        if cert.phi1 is not None and not cert.phi1.is_zero():
            rhs = rhs + _back(cert.phi1, cert.cov) * w_u
        return f == rhs, mults
    rp = cert.param
    wp = rp.w.derivative()
    d = cert.degree
    k = max([p.max_exponent() + 1 for p in cert.phi] + [0])
    wp_x = _univ(wp, u, n)
    lhs = f * wp_x ** (d + k)
    rhs = _sos_part(cert.sos, u, n) * wp_x ** k
    # w and the parameter's own coordinate (u = kappa_1 / w') must vanish on V_grad(f)
    mults = [_univ(rp.w, u, n), wp_x * u - _univ(rp.kappa[0], u, n)]
    for i, phi in enumerate(cert.phi, start=2):
        m = wp_x * xs[i - 1] - _univ(rp.kappa[i - 1], u, n)
        mults.append(m)
        if phi.is_zero():
            continue
        num, _ = phi.cleared(k - 1)
        rhs = rhs + _back(num, cert.cov) * m
    return lhs == rhs, mults


def verify(f: MPoly, cert: Certificate) -> VerifyReport:
    """Exact check of a (possibly untrusted) certificate against f."""
    notes: List[str] = []
    weights = cert.sos.weights_positive()
    if not weights:
        notes.append("some SOS weight is not positive")
    try:
        if cert.nvars != f.nvars:
            raise ValueError("certificate and polynomial have different numbers of variables")
        if cert.degree != f.degree:
            raise ValueError("certificate degree does not match deg f")
        w = cert.shape.w if isinstance(cert, PolyCertificate) else cert.param.w
        if w.degree != cert.delta:
            raise ValueError("deg w does not match delta")
        identity, mults = _identity_and_multipliers(f, cert)
        if not identity:
            notes.append("the certificate identity does not hold")
        gb = buchberger(gradient_ideal(f), "grevlex")
        members = all(normal_form(m, gb, "grevlex").is_zero() for m in mults)
        if not members:
            notes.append("a multiplier is not in the gradient ideal of f")
    except (GradSOSError, ValueError, AssertionError) as exc:
        notes.append(f"verification aborted: {exc}")
        identity, members = False, False
    return VerifyReport(identity, weights, members, True, notes)


def bitsize_metrics(cert: Certificate) -> Metrics:
    h = cert.h if cert.h is not None else cert.sos.expand()
    return Metrics(
        delta=cert.delta,
        d_h=h.degree,
        tau_h=height(h),
        tau_sos=cert.sos.max_height(),
        t_h=round(cert.timings.get("t_h", 0.0), 3),
        t_sos=round(cert.timings.get("t_sos", 0.0), 3),
        num_squares=cert.sos.num_squares,
    )


# ---------------------------------------------------------------------------
# text format


def dumps(cert: Certificate) -> str:
    """Serialize a certificate (see the README for the grammar)."""
    out = [HEADER, "[FIELDS]", f"mode = {cert.mode}", f"nvars = {cert.nvars}",
           f"degree = {cert.degree}", f"delta = {cert.delta}"]
    if cert.cov is not None:
        out.append(f"cov_j = {cert.cov.j}")
    if isinstance(cert, PolyCertificate):
        out += ["[W]", format_upoly(cert.shape.w)]
        out += ["[V]"] + [format_upoly(v) for v in cert.shape.v]
    else:
        out += ["[W]", format_upoly(cert.param.w)]
        out += ["[KAPPA]"] + [format_upoly(k) for k in cert.param.kappa]
    out += ["[SOS]"] + [f"{format_coeff(c)} : {format_upoly(q)}" for c, q in cert.sos.terms]
    out.append("[PHI]")
    if isinstance(cert, PolyCertificate):
        out += [format_poly(p) for p in cert.phi]
        if cert.phi1 is not None:
            out += ["[PHI1]", format_poly(cert.phi1)]
    else:
        for p in cert.phi:
            num, e = p.cleared()
            out.append(f"{e} : {format_poly(num)}")
    meta = dict(cert.meta)
    meta.setdefault("algorithm", cert.sos.algorithm)
    if cert.h is not None:
        meta["d_h"] = str(cert.h.degree)
        meta["tau_h"] = str(height(cert.h))
    meta["tau_sos"] = str(cert.sos.max_height())
    for key in ("t_h", "t_sos"):
        if key in cert.timings:
            meta[key] = f"{cert.timings[key]:.3f}"
    out.append("[META]")
    out += [f"{k} = {v}" for k, v in meta.items()]
    return "\n".join(out) + "\n"


_SECTIONS = {
    "poly": ("FIELDS", "W", "V", "SOS", "PHI", "PHI1", "META"),
    "frac": ("FIELDS", "W", "KAPPA", "SOS", "PHI", "META"),
}
_FIELD_KEYS = ("mode", "nvars", "degree", "delta", "cov_j")


def _nbytes(s: str) -> int:
    return len(s.encode("utf-8"))


def _after(p: int, head: str, tail: str) -> int:
    """Byte offset of the stripped ``tail`` in a line starting at ``p`` with ``head``."""
    return p + _nbytes(head) + _nbytes(tail[: len(tail) - len(tail.lstrip())])


def loads(text: str) -> Certificate:
    """Strict parser for :func:`dumps` output."""
    data = text.encode("utf-8")
    lines = []
    pos = 0
    for raw in data.split(b"\n"):
        lines.append((pos, raw.decode("utf-8").rstrip("\r")))
        pos += len(raw) + 1
    body = [(p, l) for p, l in lines if l.strip()]
    if not body or body[0][1].strip() != HEADER:
        raise ParseError(f"missing header line {HEADER!r}", 0)
    sections: Dict[str, list] = {}
    order: List[str] = []
    current = None
    for p, l in body[1:]:
        s = l.strip()
        if s.startswith("[") and s.endswith("]"):
            name = s[1:-1]
            if name in sections:
                raise ParseError(f"duplicate section [{name}]", p)
            if name not in _SECTIONS["poly"] + _SECTIONS["frac"]:
                raise ParseError(f"unknown section [{name}]", p)
            sections[name] = []
            order.append(name)
            current = name
            continue
        if current is None:
            raise ParseError("content before the first section", p)
        sections[current].append((p + _nbytes(l[: len(l) - len(l.lstrip())]), s))
    if "FIELDS" not in sections:
        raise ParseError("missing [FIELDS] section", 0)
    fields: Dict[str, str] = {}
    for p, s in sections["FIELDS"]:
        key, sep, value = s.partition("=")
        key = key.strip()
        if not sep or key not in _FIELD_KEYS:
            raise ParseError(f"bad field line {s!r}", p)
        fields[key] = value.strip()
    for key in ("mode", "nvars", "degree", "delta"):
        if key not in fields:
            raise ParseError(f"missing field {key!r}", 0)
    mode = fields["mode"]
    if mode not in _SECTIONS:
        raise ParseError(f"unknown mode {mode!r}", 0)
    for name in order:
        if name not in _SECTIONS[mode]:
            raise ParseError(f"section [{name}] not allowed in {mode} mode", 0)
    try:
        n = int(fields["nvars"])
        degree = int(fields["degree"])
        delta = int(fields["delta"])
        cov_j = int(fields["cov_j"]) if "cov_j" in fields else None
    except ValueError as exc:
        raise ParseError(f"non-integer field: {exc}", 0) from None
    if n < 1:
        raise ParseError("nvars must be positive", 0)
    cov = ChangeOfVariables(cov_j, n) if cov_j else None

    def poly_line(p, s, nv):
        try:
            return parse_poly(s, nv)
        except ParseError as exc:
            raise ParseError(str(exc).split(" (at byte")[0], p + (exc.offset or 0)) from None

    def upoly_line(p, s):
        q = poly_line(p, s, 1)
        return q.to_upoly(1)

    def section(name, count=None):
        rows = sections.get(name)
        if rows is None:
            raise ParseError(f"missing section [{name}]", 0)
        if count is not None and len(rows) != count:
            raise ParseError(f"section [{name}] needs {count} lines, found {len(rows)}", rows[0][0] if rows else 0)
        return rows

    (pw, sw), = section("W", 1)
    w = upoly_line(pw, sw)
    terms = []
    for p, s in section("SOS"):
        c, sep, q = s.partition(":")
        if not sep:
            raise ParseError("SOS lines read 'c : q'", p)
        try:
            cval = to_rational(c.strip())
        except ValueError:
            raise ParseError(f"bad SOS weight {c.strip()!r}", p) from None
        terms.append((cval, upoly_line(_after(p, c + sep, q), q.strip())))
    sos = WeightedSOS(terms)
    meta = {}
    for p, s in sections.get("META", []):
        key, sep, value = s.partition("=")
        if not sep:
            raise ParseError("META lines read 'key = value'", p)
        meta[key.strip()] = value.strip()
    sos.algorithm = meta.get("algorithm", ALGORITHM)
    timings = {k: float(meta[k]) for k in ("t_h", "t_sos") if k in meta}
    if w.degree < 1:
        raise ParseError("w must be non-constant", pw)

    if mode == "poly":
        v = [upoly_line(p, s) for p, s in section("V", n - 1)]
        phi = [poly_line(p, s, n) for p, s in section("PHI", n - 1)]
        phi1 = None
        if "PHI1" in sections:
            (p1, s1), = section("PHI1", 1)
            phi1 = poly_line(p1, s1, n)
        return PolyCertificate(n, degree, delta, ShapeBasis(w, v, n), sos, phi, cov, phi1,
                               None, timings, meta)
    kappa = [upoly_line(p, s) for p, s in section("KAPPA", n)]
    rp = RationalParam(w, kappa, 0)
    a0 = w.derivative()
    phi = []
    for p, s in section("PHI", n - 1):
        e, sep, num = s.partition(":")
        if not sep or not e.strip().isdigit():
            raise ParseError("frac PHI lines read 'e : numerator'", p)
        phi.append(FracPoly.from_cleared(poly_line(_after(p, e + sep, num), num.strip(), n), int(e), a0))
    return FracCertificate(n, degree, delta, rp, sos, phi, cov, None, timings, meta)
