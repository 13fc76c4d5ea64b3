"""Minimal expression algebra over a fixed special-function basis.

Expressions are immutable trees built from constants, the variable x, sums,
products, integer powers, exp/log with polynomial arguments, and basis
functions whose argument is a constant multiple of x. Differentiation is
exact and closed over the basis (Bessel/Airy/Legendre/Hermite identities keep
derivatives in-basis), so applying a differential operator to a candidate
solution never involves numerical differentiation.

Simplification is deliberately limited: constant folding, zero/one
elimination, and like-term collection over identical basis factors. That is
enough to recognize the exact cancellations the catalog's residual checks
rely on, and nothing more.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from . import specfun
from .errors import DomainError, EvalOverflowError, ExprError, ParseError

__all__ = [
    "Expr", "Const", "Var", "Sum", "Prod", "Pow", "Call", "Basis",
    "LinearOperator", "X", "const", "add", "mul", "pow_int", "quotient",
    "parse", "to_text", "simplify", "differentiate", "evaluate",
    "apply_operator", "apply_operator_power", "structurally_equal",
]


class Expr:
    """Base class; concrete nodes are frozen dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    """The independent variable x."""


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Prod(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int):
            raise ExprError(f"power exponent must be an integer, got {self.exponent!r}")


@dataclass(frozen=True)
class Call(Expr):
    """exp or log applied to a general (polynomial) argument."""

    tag: str
    arg: Expr

    def __post_init__(self):
        if self.tag not in ("exp", "log"):
            raise ExprError(f"Call supports exp/log only, got {self.tag!r}")


# Basis functions with argument scale*x. ``order`` is None for the orderless
# tags and a nonnegative integer otherwise.
_ORDERLESS = ("sin", "cos", "Ai", "Bi", "AiP", "BiP")
_ORDERED = ("J", "Y", "I", "K", "P", "Q", "Pd", "H", "G", "Hd", "Gd")


@dataclass(frozen=True)
class Basis(Expr):
    tag: str
    order: int | None
    scale: float = 1.0

    def __post_init__(self):
        if self.tag in _ORDERLESS:
            if self.order is not None:
                raise ExprError(f"{self.tag} takes no order parameter")
        elif self.tag in _ORDERED:
            if not (isinstance(self.order, int) and 0 <= self.order <= specfun.MAX_ORDER):
                raise ExprError(
                    f"{self.tag} order must be an integer in [0, {specfun.MAX_ORDER}]")
        else:
            raise ExprError(f"unknown basis tag {self.tag!r}")
        if not (math.isfinite(self.scale) and self.scale != 0.0):
            raise ExprError(f"argument scale must be finite and nonzero, got {self.scale}")


X = Var()
ZERO = Const(0.0)
ONE = Const(1.0)


def const(v: float) -> Const:
    return Const(float(v))


def add(*terms: Expr) -> Expr:
    flat: list[Expr] = []
    acc = 0.0
    for t in terms:
        if isinstance(t, Const):
            acc += t.value
        elif isinstance(t, Sum):
            flat.extend(t.terms)
        else:
            flat.append(t)
    if acc != 0.0 or not flat:
        flat.append(Const(acc))
    return flat[0] if len(flat) == 1 else Sum(tuple(flat))


def mul(*factors: Expr) -> Expr:
    flat: list[Expr] = []
    coeff = 1.0
    for f in factors:
        if isinstance(f, Const):
            coeff *= f.value
        elif isinstance(f, Prod):
            inner = f.factors
            if inner and isinstance(inner[0], Const):
                coeff *= inner[0].value
                inner = inner[1:]
            flat.extend(inner)
        else:
            flat.append(f)
    if coeff == 0.0:
        return ZERO
    if not flat:
        return Const(coeff)
    if coeff != 1.0:
        flat.insert(0, Const(coeff))
    return flat[0] if len(flat) == 1 else Prod(tuple(flat))


def pow_int(base: Expr, k: int) -> Expr:
    if k == 0:
        return ONE
    if k == 1:
        return base
    if isinstance(base, Const):
        if base.value == 0.0 and k < 0:
            raise ExprError("division by the zero constant")
        return Const(base.value ** k)
    return Pow(base, k)


def quotient(num: Expr, den: Expr) -> Expr:
    """num/den with the denominator restricted to powers of x, powers of a
    basis function, polynomials in x, or constants."""
    if isinstance(den, Const):
        if den.value == 0.0:
            raise ExprError("division by zero constant")
        return mul(Const(1.0 / den.value), num)
    base, k = (den.base, den.exponent) if isinstance(den, Pow) else (den, 1)
    if not _valid_denominator_base(base):
        raise ExprError("quotient denominator must be a power of x, a power of a "
                        "basis function, or a polynomial in x")
    return mul(num, Pow(base, -k))


def _valid_denominator_base(base: Expr) -> bool:
    if isinstance(base, (Var, Basis, Call)):
        return True
    return _poly_coeffs_or_none(base) is not None


# ----------------------------------------------------------------------------
# Canonicalization: sums of monomials over hashable factor keys.

_KIND_X = "0x"
_KIND_BASIS = "1b"
_KIND_CALL = "2c"
_KIND_POLY = "3p"


def _num_str(v: float) -> str:
    if v == int(v) and abs(v) <= 1e15:
        return str(int(v))
    return repr(v)


def _factor_key(e: Expr) -> tuple:
    if isinstance(e, Var):
        return (_KIND_X,)
    if isinstance(e, Basis):
        return (_KIND_BASIS, e.tag, -1 if e.order is None else e.order, repr(e.scale))
    if isinstance(e, Call):
        return (_KIND_CALL, e.tag, to_text(simplify(e.arg)))
    raise ExprError(f"not a factor atom: {e!r}")


def _poly_coeffs_or_none(e: Expr) -> dict[int, float] | None:
    """Expression as {degree: coeff} if it is a polynomial in x, else None."""
    try:
        monos = _canon(e)
    except ExprError:
        return None
    coeffs: dict[int, float] = {}
    for c, factors in monos:
        if not factors:
            coeffs[0] = coeffs.get(0, 0.0) + c
            continue
        if len(factors) != 1:
            return None
        key = next(iter(factors))
        exp = factors[key][0]
        if key != (_KIND_X,) or exp < 0:
            return None
        coeffs[exp] = coeffs.get(exp, 0.0) + c
    return {d: c for d, c in coeffs.items() if c != 0.0} or {0: 0.0}


# A monomial is (coeff, {key: [exponent, rebuild_expr]}).
_Mono = tuple[float, dict]


def _mono_mul(a: _Mono, b: _Mono) -> _Mono:
    coeff = a[0] * b[0]
    factors = {k: v.copy() for k, v in a[1].items()}
    for k, (exp, reb) in b[1].items():
        if k in factors:
            factors[k][0] += exp
            if factors[k][0] == 0:
                del factors[k]
        else:
            factors[k] = [exp, reb]
    return (coeff, factors)


def _canon(e: Expr) -> list[_Mono]:
    if isinstance(e, Const):
        return [] if e.value == 0.0 else [(e.value, {})]
    if isinstance(e, (Var, Basis)):
        return [(1.0, {_factor_key(e): [1, e]})]
    if isinstance(e, Call):
        arg = simplify(e.arg)
        if isinstance(arg, Const):
            v = arg.value
            if e.tag == "exp":
                try:
                    return _canon(Const(math.exp(v)))
                except OverflowError:
                    pass
            elif v > 0.0:
                return _canon(Const(math.log(v)))
        node = Call(e.tag, arg)
        return [(1.0, {_factor_key(node): [1, node]})]
    if isinstance(e, Sum):
        out: list[_Mono] = []
        for t in e.terms:
            out.extend(_canon(t))
        return _collect(out)
    if isinstance(e, Prod):
        acc: list[_Mono] = [(1.0, {})]
        for f in e.factors:
            cf = _canon(f)
            acc = _collect([_mono_mul(a, b) for a in acc for b in cf])
            if not acc:
                return []
        return acc
    if isinstance(e, Pow):
        k = e.exponent
        if k == 0:
            return [(1.0, {})]
        cb = _canon(e.base)
        if not cb:
            if k < 0:
                raise ExprError("division by an expression that simplifies to zero")
            return []
        if len(cb) == 1:
            coeff, factors = cb[0]
            if coeff == 0.0:
                raise ExprError("division by zero coefficient")
            nf = {key: [exp * k, reb] for key, (exp, reb) in factors.items()}
            return [(coeff ** k, nf)]
        if k > 0:
            acc = cb
            for _ in range(k - 1):
                acc = _collect([_mono_mul(a, b) for a in acc for b in cb])
            return acc
        # Negative power of a genuine sum: only polynomials in x may appear
        # in a denominator.
        poly = _poly_coeffs_or_none(e.base)
        if poly is None:
            raise ExprError("quotient denominator must be a power of x, a power of a "
                            "basis function, or a polynomial in x")
        if poly == {0: 0.0}:
            raise ExprError("division by an expression that simplifies to zero")
        deg = max(poly)
        lead = poly[deg]
        monic = tuple(sorted((d, c / lead) for d, c in poly.items()))
        reb = _poly_rebuild(monic)
        key = (_KIND_POLY, monic)
        return [(lead ** k, {key: [k, reb]})]
    raise ExprError(f"unknown expression node {e!r}")


def _poly_rebuild(monic: tuple[tuple[int, float], ...]) -> Expr:
    terms = []
    for d, c in monic:
        if d == 0:
            terms.append(Const(c))
        else:
            terms.append(mul(Const(c), pow_int(X, d)))
    return add(*terms)


def _mono_sort_key(m: _Mono):
    return tuple(sorted((str(k), exp) for k, (exp, _) in m[1].items()))


def _collect(monos: list[_Mono]) -> list[_Mono]:
    groups: dict[tuple, tuple[list[float], dict]] = {}
    for coeff, factors in monos:
        gk = tuple(sorted((str(k), exp) for k, (exp, _) in factors.items()))
        if gk in groups:
            groups[gk][0].append(coeff)
        else:
            groups[gk] = ([coeff], factors)
    out = []
    for gk in sorted(groups):
        coeffs, factors = groups[gk]
        total = math.fsum(coeffs)
        if total != 0.0:
            out.append((total, factors))
    return out


def _mono_rebuild(m: _Mono) -> Expr:
    coeff, factors = m
    parts: list[Expr] = []
    for key in sorted(factors, key=str):
        exp, reb = factors[key]
        parts.append(pow_int(reb, exp))
    return mul(Const(coeff), *parts)


def simplify(e: Expr) -> Expr:
    """Canonical form: constant folding, zero/one elimination, like-term
    collection over identical basis factors. No other rewriting."""
    monos = _collect(_canon(e))
    if not monos:
        return ZERO
    return add(*[_mono_rebuild(m) for m in monos])


def structurally_equal(a: Expr, b: Expr) -> bool:
    return a == b


# ----------------------------------------------------------------------------
# Exact differentiation (closed over the basis).

def differentiate(e: Expr) -> Expr:
    """Exact d/dx; the result is again an in-basis expression."""
    d = _diff(e)
    return simplify(d)


def _diff(e: Expr) -> Expr:
    if isinstance(e, (Const,)):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Sum):
        return add(*[_diff(t) for t in e.terms])
    if isinstance(e, Prod):
        terms = []
        for i, f in enumerate(e.factors):
            df = _diff(f)
            if df == ZERO:
                continue
            rest = e.factors[:i] + (df,) + e.factors[i + 1:]
            terms.append(mul(*rest))
        return add(*terms) if terms else ZERO
    if isinstance(e, Pow):
        k = e.exponent
        if k == 0:
            return ZERO
        return mul(Const(float(k)), pow_int(e.base, k - 1), _diff(e.base))
    if isinstance(e, Call):
        du = _diff(e.arg)
        if e.tag == "exp":
            return mul(du, e)
        return quotient(du, e.arg)  # log
    if isinstance(e, Basis):
        return _diff_basis(e)
    raise ExprError(f"cannot differentiate {e!r}")


def _diff_basis(e: Basis) -> Expr:
    """Derivative identities; each keeps the result inside the basis."""
    s = e.scale
    n = e.order

    def b(tag, order=None, scale=s):
        return Basis(tag, order, scale)

    t = e.tag
    if t == "sin":
        return mul(Const(s), b("cos"))
    if t == "cos":
        return mul(Const(-s), b("sin"))
    if t == "Ai":
        return mul(Const(s), b("AiP"))
    if t == "Bi":
        return mul(Const(s), b("BiP"))
    if t == "AiP":  # Ai'' rewrites to x*Ai
        return mul(Const(s * s), X, b("Ai"))
    if t == "BiP":
        return mul(Const(s * s), X, b("Bi"))
    if t in ("J", "Y"):
        tail = mul(Const(-s), b(t, n + 1))
        if n == 0:
            return tail
        return add(mul(Const(float(n)), b(t, n), Pow(X, -1)), tail)
    if t == "I":
        tail = mul(Const(s), b("I", n + 1))
        if n == 0:
            return tail
        return add(mul(Const(float(n)), b("I", n), Pow(X, -1)), tail)
    if t == "K":
        tail = mul(Const(-s), b("K", n + 1))
        if n == 0:
            return tail
        return add(mul(Const(float(n)), b("K", n), Pow(X, -1)), tail)
    if t == "P":
        # P_n' expands in lower-order Legendre polynomials.
        terms = [mul(Const(s * (2 * m + 1)), b("P", m))
                 for m in range(n - 1, -1, -2)]
        return add(*terms) if terms else ZERO
    if t == "Q":
        inv = pow_int(_one_minus_sq(s), -1)
        inner = add(mul(Const(s), X, b("Q", n)), mul(Const(-1.0), b("Q", n + 1)))
        return mul(Const(s * (n + 1)), inner, inv)
    if t == "Pd":
        inv = pow_int(_one_minus_sq(s), -1)
        inner = add(
            mul(Const(s), X, b("P", n)), mul(Const(-1.0), b("P", n + 1)),
            mul(Const(s * (n + 1)), X, b("Pd", n)),
            mul(Const(-float(n + 1)), b("Pd", n + 1)),
        )
        return mul(Const(s), inner, inv)
    if t == "H":
        if n == 0:
            return ZERO
        return mul(Const(2.0 * n * s), b("H", n - 1))
    if t == "Hd":
        return mul(Const(s), add(mul(Const(2.0 * s), X, b("Hd", n)),
                                 mul(Const(-1.0), b("Hd", n + 1))))
    if t == "G":
        gauss = Call("exp", mul(Const(s * s), Pow(X, 2)))
        inv_h = pow_int(b("H", n), -1)
        terms = [mul(Const(s), gauss, inv_h)]
        if n > 0:
            terms.append(mul(Const(2.0 * n * s), b("H", n - 1), b("G", n), inv_h))
        return add(*terms)
    if t == "Gd":
        gauss = Call("exp", mul(Const(s * s), Pow(X, 2)))
        u, v, g, gd = b("H", n), b("Hd", n), b("G", n), b("Gd", n)
        inv_u = pow_int(u, -1)
        inv_u2 = pow_int(u, -2)
        vprime = add(mul(Const(2.0 * s), X, v), mul(Const(-1.0), b("Hd", n + 1)))
        terms = [mul(vprime, g, inv_u), mul(Const(-1.0), v, gauss, inv_u2)]
        if n > 0:
            uprime = mul(Const(2.0 * n), b("H", n - 1))
            terms.append(mul(Const(-1.0), uprime,
                             add(mul(v, g), mul(Const(-1.0), gd, u)), inv_u2))
        return mul(Const(s), add(*terms))
    raise ExprError(f"no derivative rule for basis tag {t!r}")


def _one_minus_sq(s: float) -> Expr:
    # 1 - (s x)^2, constructed identically everywhere so canonical keys match.
    return add(ONE, mul(Const(-(s * s)), Pow(X, 2)))


# ----------------------------------------------------------------------------
# Evaluation.

def evaluate(e: Expr, x: float, quad: specfun.QuadratureSpec = specfun.DEFAULT_QUAD) -> float:
    """IEEE-double value of the expression at x.

    Raises DomainError outside a basis node's domain and EvalOverflowError
    when a value exceeds double range; the two are never conflated.
    """
    v = _eval(e, float(x), quad)
    if math.isnan(v):
        raise DomainError(f"expression undefined at x={x}")
    return v


def _eval(e: Expr, x: float, quad) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Sum):
        return math.fsum(_eval(t, x, quad) for t in e.terms)
    if isinstance(e, Prod):
        out = 1.0
        for f in e.factors:
            out *= _eval(f, x, quad)
            if math.isinf(out):
                raise EvalOverflowError(f"product overflow at x={x}")
        return out
    if isinstance(e, Pow):
        base = _eval(e.base, x, quad)
        if base == 0.0 and e.exponent < 0:
            raise DomainError(f"division by zero at x={x}")
        try:
            v = base ** e.exponent
        except OverflowError:
            raise EvalOverflowError(f"power overflow at x={x}") from None
        if math.isinf(v):
            raise EvalOverflowError(f"power overflow at x={x}")
        return v
    if isinstance(e, Call):
        u = _eval(e.arg, x, quad)
        if e.tag == "exp":
            if u > 709.0:
                raise EvalOverflowError(f"exp overflow at x={x}")
            return math.exp(u)
        if u <= 0.0:
            raise DomainError(f"log of nonpositive value {u} at x={x}")
        return math.log(u)
    if isinstance(e, Basis):
        return _eval_basis(e, x, quad)
    raise ExprError(f"cannot evaluate {e!r}")


def _eval_basis(e: Basis, x: float, quad) -> float:
    z = e.scale * x
    t = e.tag
    if t == "sin":
        return math.sin(z)
    if t == "cos":
        return math.cos(z)
    if t in ("Ai", "Bi", "AiP", "BiP"):
        ai, bi, aip, bip = specfun.airy(z)
        return {"Ai": ai, "Bi": bi, "AiP": aip, "BiP": bip}[t]
    if t in ("J", "Y", "I", "K"):
        return specfun.bessel(t, e.order, z)
    if t == "P":
        return specfun.legendre_p(e.order, z)
    if t == "Q":
        return specfun.legendre_q(e.order, z)
    if t == "Pd":
        return specfun.legendre_p_deg_deriv(e.order, z)
    if t == "H":
        return specfun.hermite_h(e.order, z)
    if t == "Hd":
        return specfun.hermite_h_deg_deriv(e.order, z)
    if t == "G":
        return specfun.hermite_g(e.order, z, quad)
    if t == "Gd":
        return specfun.hermite_g_deg_deriv(e.order, z, quad)
    raise ExprError(f"no evaluator for basis tag {t!r}")


# ----------------------------------------------------------------------------
# Linear differential operators.

@dataclass(frozen=True)
class LinearOperator:
    """a_0(x) + sum_j a_j(x) d^j/dx^j with in-basis coefficient expressions."""

    name: str
    coeffs: tuple[tuple[int, Expr], ...]

    @property
    def order(self) -> int:
        return max(j for j, _ in self.coeffs)


def apply_operator(op, e: Expr) -> Expr:
    """Apply a linear differential operator exactly; returns a simplified Expr."""
    coeffs = op.coeffs if hasattr(op, "coeffs") else tuple(op)
    top = max(j for j, _ in coeffs)
    derivs = [simplify(e)]
    for _ in range(top):
        derivs.append(simplify(_diff(derivs[-1])))
    return simplify(add(*[mul(a, derivs[j]) for j, a in coeffs]))


def apply_operator_power(op, e: Expr, times: int) -> Expr:
    """Repeated application for factored operators."""
    out = simplify(e)
    for _ in range(times):
        out = apply_operator(op, out)
    return out


# ----------------------------------------------------------------------------
# Printer.

def to_text(e: Expr) -> str:
    """Grammar-conformant text; printed output re-parses to the same tree."""
    return _print_sum(e) if isinstance(e, Sum) else _print_term(e)


def _print_sum(e: Sum) -> str:
    parts = [_print_term(t) for t in e.terms]
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def _print_term(e: Expr) -> str:
    if isinstance(e, Prod):
        coeff = 1.0
        rest: list[Expr] = []
        for f in e.factors:
            if isinstance(f, Const):
                coeff *= f.value
            else:
                rest.append(f)
        if not rest:
            return _num_str(coeff)
        body = "*".join(_print_factor(f) for f in rest)
        return _wrap_coeff(coeff, body)
    if isinstance(e, Const):
        return _num_str(e.value)
    return _print_factor(e)


def _wrap_coeff(coeff: float, body: str) -> str:
    sign = "-" if coeff < 0 else ""
    ac = abs(coeff)
    if ac == 1.0:
        return sign + body
    if ac < 1.0:
        q = round(1.0 / ac)
        if q >= 2 and 1.0 / q == ac:
            return f"{sign}{body}/{q}"
    return f"{sign}{_num_str(ac)}*{body}"


def _print_factor(e: Expr) -> str:
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Const):
        v = _num_str(e.value)
        return v if e.value >= 0 else f"({v})"
    if isinstance(e, Pow):
        base = _print_factor(e.base)
        return f"{base}^{e.exponent}"
    if isinstance(e, Call):
        return f"{e.tag}({to_text(e.arg)})"
    if isinstance(e, Basis):
        if e.scale == 1.0:
            arg = "x"
        elif e.scale == -1.0:
            arg = "-x"
        else:
            arg = f"{_num_str(e.scale)}*x"
        if e.order is None:
            return f"{e.tag}({arg})"
        return f"{e.tag}({e.order},{arg})"
    if isinstance(e, (Sum, Prod)):
        return f"({to_text(e)})"
    raise ExprError(f"cannot print {e!r}")


# ----------------------------------------------------------------------------
# Parser (recursive descent).

_TOKEN_RE = re.compile(r"""
    (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>[+\-*/^(),])
  | (?P<ws>\s+)
""", re.VERBOSE)

_FUNCS_ONE = ("sin", "cos", "exp", "log", "Ai", "Bi", "AiP", "BiP")
_FUNCS_TWO = _ORDERED


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            pos = m.end()
            if m.lastgroup != "ws":
                self.tokens.append((m.lastgroup, m.group(), m.start()))
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected trailing input {val!r}", pos)
        return e

    def expr(self) -> Expr:
        negate = False
        if self.peek()[1] == "-":
            self.next()
            negate = True
        e = self.term()
        if negate:
            e = mul(Const(-1.0), e)
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            rhs = self.term()
            if op == "-":
                rhs = mul(Const(-1.0), rhs)
            e = add(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.next()
            rhs = self.factor()
            if op == "*":
                e = mul(e, rhs)
            else:
                try:
                    e = quotient(e, rhs)
                except ExprError as err:
                    raise ParseError(str(err), pos) from None
        return e

    def factor(self) -> Expr:
        e = self.atom()
        if self.peek()[1] == "^":
            self.next()
            sign = 1
            if self.peek()[1] == "-":
                self.next()
                sign = -1
            kind, val, pos = self.next()
            if kind != "num" or not re.fullmatch(r"\d+", val):
                raise ParseError("exponent must be an integer", pos)
            try:
                e = pow_int(e, sign * int(val))
            except ExprError as err:
                raise ParseError(str(err), pos) from None
        return e

    def atom(self) -> Expr:
        kind, val, pos = self.next()
        if kind == "num":
            return Const(float(val))
        if val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            if val == "x":
                return X
            if val in _FUNCS_ONE:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return self._make_func(val, None, arg, pos)
            if val in _FUNCS_TWO:
                self.expect("(")
                order = self.expr()
                self.expect(",")
                arg = self.expr()
                self.expect(")")
                if not isinstance(order, Const) or order.value != int(order.value):
                    raise ParseError(f"{val} requires an integer order", pos)
                return self._make_func(val, int(order.value), arg, pos)
            raise ParseError(f"unknown symbol {val!r} (free constants must be "
                             f"numeric literals)", pos)
        raise ParseError(f"unexpected token {val or 'end of input'!r}", pos)

    def _make_func(self, tag: str, order: int | None, arg: Expr, pos: int) -> Expr:
        if tag in ("exp", "log"):
            return Call(tag, arg)
        scale = _scale_of(arg)
        if scale is None:
            raise ParseError(f"{tag} argument must be a constant multiple of x", pos)
        try:
            return Basis(tag, order, scale)
        except ExprError as err:
            raise ParseError(str(err), pos) from None


def _scale_of(arg: Expr) -> float | None:
    """Scale c when the (folded) argument has the form c*x, else None."""
    arg = simplify(arg)
    if isinstance(arg, Var):
        return 1.0
    if isinstance(arg, Prod) and len(arg.factors) == 2:
        a, b = arg.factors
        if isinstance(a, Const) and isinstance(b, Var) and a.value != 0.0:
            return a.value
    return None


def parse(text: str) -> Expr:
    """Parse expression text; the unique tree round-trips through to_text."""
    if not text.strip():
        raise ParseError("empty expression", 0)
    return _Parser(text).parse()
