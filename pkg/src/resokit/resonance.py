"""The solution catalog: operator families with eigen-parametrizations, their
homogeneous solution families, and the resonant / repeated-root closed forms
obtained by differentiating the homogeneous family with respect to the
operator eigenvalue.

Each catalog row carries the factored operator D = M - lambda(mu), the
homogeneous members u(x; mu), the closed-form resonant solution
u_p = du/dlambda, and repeated roots u_(k) = d^k u/dlambda^k where a closed
form exists. The jet engine provides the generic finite-difference route for
cross-checking every closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import jets, specfun, symexpr
from .errors import DomainError, ExprError
from .specfun import FunctionDomain
from .symexpr import Basis, Call, Const, LinearOperator, Pow, X, add, mul, pow_int

__all__ = [
    "OperatorFamily", "SolutionMember", "SolutionFamily", "CatalogRow",
    "catalog", "get_row", "ROW_IDS", "resonant_solution", "repeated_root",
    "generic_resonant", "modified_bessel_fixture", "sixth_order_solution_set",
]

ROW_IDS = ("harmonic", "equidim", "airy", "bessel0", "legendre", "hermite")


@dataclass(frozen=True)
class OperatorFamily:
    """A factored linear operator D = M - lambda at a concrete parameter mu.

    ``lam_taylor`` holds the exact Taylor coefficients of lambda(mu + e)
    around e=0 (lambda, lambda', lambda''/2!, ...), used by the chain rule
    when converting parameter jets into eigenvalue derivatives.
    """

    name: str
    order: int
    parameter_role: str  # "argument-scale" | "degree"
    mu: float
    coeffs: tuple[tuple[int, symexpr.Expr], ...]
    lam_taylor: tuple[float, float, float, float, float]

    def __post_init__(self):
        if self.lam_taylor[1] == 0.0:
            raise ExprError("eigen map must have nonzero dlambda/dmu")

    @property
    def lam(self) -> float:
        return self.lam_taylor[0]

    @property
    def dlam_dmu(self) -> float:
        return self.lam_taylor[1]

    @property
    def operator(self) -> LinearOperator:
        return LinearOperator(self.name, self.coeffs)


@dataclass(frozen=True)
class SolutionMember:
    """One homogeneous family member: symbolic constructor plus the
    real-parameter continuation evaluator used by the jet route."""

    label: str
    build: Callable[[float], symexpr.Expr]
    value: Callable[[float, float], float]  # (x, mu) -> u(x; mu)
    resonant: Callable[[float], symexpr.Expr] | None


@dataclass(frozen=True)
class SolutionFamily:
    members: tuple[SolutionMember, ...]
    domain: Callable[[float], FunctionDomain]

    def member(self, label: str) -> SolutionMember:
        for m in self.members:
            if m.label == label:
                return m
        raise KeyError(f"unknown member {label!r}; have "
                       f"{[m.label for m in self.members]}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(m.label for m in self.members)


@dataclass(frozen=True)
class CatalogRow:
    row_id: str
    description: str
    parameter_role: str
    default_mu: float
    mu_max: float
    lambda_text: str
    family: SolutionFamily
    _operator: Callable[[float], OperatorFamily]
    _repeated: Callable[[str, float, int], symexpr.Expr]
    _grid_spec: Callable[[float], tuple[float, float, int, str]]

    def validate_mu(self, mu: float) -> float:
        mu = float(mu)
        if self.parameter_role == "degree":
            if mu != int(mu) or mu < 0:
                raise DomainError(f"{self.row_id} requires an integer parameter >= 0, got {mu}")
        elif mu <= 0.0 and self.row_id != "equidim":
            raise DomainError(f"{self.row_id} requires parameter > 0, got {mu}")
        if abs(mu) > self.mu_max:
            raise DomainError(f"{self.row_id} parameter capped at |mu| <= {self.mu_max}")
        return mu

    def operator(self, mu: float | None = None) -> OperatorFamily:
        return self._operator(self.validate_mu(self.default_mu if mu is None else mu))

    def resonant(self, label: str, mu: float | None = None) -> symexpr.Expr:
        mu = self.validate_mu(self.default_mu if mu is None else mu)
        member = self.family.member(label)
        if member.resonant is None:
            raise KeyError(f"member {label!r} of row {self.row_id} has no "
                           f"resonant closed form in the catalog")
        return member.resonant(mu)

    def repeated(self, label: str, mu: float, k: int) -> symexpr.Expr:
        mu = self.validate_mu(mu)
        self.family.member(label)
        return self._repeated(label, mu, k)

    def probe_grid_spec(self, mu: float | None = None) -> tuple[float, float, int, str]:
        return self._grid_spec(self.validate_mu(self.default_mu if mu is None else mu))

    def domain(self, mu: float | None = None) -> FunctionDomain:
        return self.family.domain(self.validate_mu(self.default_mu if mu is None else mu))


def _unsupported(row_id):
    def f(label, mu, k):
        raise DomainError(f"row {row_id!r} has no closed-form repeated root for k={k}")
    return f


def _xpow_expr(mu: float) -> symexpr.Expr:
    if mu == int(mu):
        return pow_int(X, int(mu))
    return Call("exp", mul(Const(mu), Call("log", X)))


# ---------------------------------------------------------------------------
# Row constructions (operator, eigen map, members, closed forms, grids).

def _harmonic_row() -> CatalogRow:
    def op(mu):
        return OperatorFamily(
            "harmonic", 2, "argument-scale", mu,
            ((0, Const(mu * mu)), (2, Const(1.0))),
            (-mu * mu, -2.0 * mu, -1.0, 0.0, 0.0))

    def repeated(label, mu, k):
        trig = {"sin": "sin", "cos": "cos"}[label]
        other = "cos" if trig == "sin" else "sin"
        sgn = -1.0 if trig == "sin" else 1.0
        if k == 1:
            return mul(Const(sgn / (2.0 * mu)), X, Basis(other, None, mu))
        if k == 2:
            # Exact second eigenvalue derivative (includes the lower-root term).
            return add(mul(Const(-1.0 / (4.0 * mu * mu)), Pow(X, 2), Basis(trig, None, mu)),
                       mul(Const(sgn / (4.0 * mu ** 3)), X, Basis(other, None, mu)))
        raise DomainError(f"harmonic repeated roots available for k <= 2, got k={k}")

    members = (
        SolutionMember(
            "sin", lambda mu: Basis("sin", None, mu),
            lambda x, m: math.sin(m * x),
            lambda mu: mul(Const(-1.0 / (2.0 * mu)), X, Basis("cos", None, mu))),
        SolutionMember(
            "cos", lambda mu: Basis("cos", None, mu),
            lambda x, m: math.cos(m * x),
            lambda mu: mul(Const(1.0 / (2.0 * mu)), X, Basis("sin", None, mu))),
    )
    return CatalogRow(
        "harmonic", "constant-coefficient oscillator d2/dx2 + mu^2",
        "argument-scale", 1.0, 32.0, "lambda(mu) = -mu^2",
        SolutionFamily(members, lambda mu: FunctionDomain(-math.inf, math.inf)),
        op, repeated, lambda mu: (0.1, 10.0, 200, "linear"))


def _equidim_row() -> CatalogRow:
    def op(mu):
        return OperatorFamily(
            "equidim", 1, "argument-scale", mu,
            ((0, Const(-mu)), (1, X)),
            (mu, 1.0, 0.0, 0.0, 0.0))

    def repeated(label, mu, k):
        if not 1 <= k <= jets.MAX_JET_ORDER:
            raise DomainError(f"equidim repeated roots available for k in 1..4, got k={k}")
        return mul(_xpow_expr(mu), pow_int(Call("log", X), k))

    members = (
        SolutionMember(
            "pow", _xpow_expr,
            lambda x, m: math.exp(m * math.log(x)),
            lambda mu: mul(_xpow_expr(mu), Call("log", X))),
    )
    return CatalogRow(
        "equidim", "equidimensional operator x d/dx - mu",
        "argument-scale", 0.5, 32.0, "lambda(mu) = mu",
        SolutionFamily(members, lambda mu: FunctionDomain(0.0, math.inf)),
        op, repeated, lambda mu: (0.1, 10.0, 200, "linear"))


def _airy_row() -> CatalogRow:
    def op(mu):
        return OperatorFamily(
            "airy", 2, "argument-scale", mu,
            ((0, Const(-mu ** 3)), (2, Pow(X, -1))),
            (mu ** 3, 3.0 * mu * mu, 3.0 * mu, 1.0, 0.0))

    def mk_res(fn, dfn):
        def res(mu):
            return mul(Const(1.0 / (3.0 * mu * mu)), X, Basis(dfn, None, mu))
        return res

    def repeated(label, mu, k):
        fn = {"Ai": "Ai", "Bi": "Bi"}[label]
        dfn = fn + "P"
        if k == 1:
            return mul(Const(1.0 / (3.0 * mu * mu)), X, Basis(dfn, None, mu))
        if k == 2:
            return add(mul(Const(1.0 / (9.0 * mu ** 3)), Pow(X, 3), Basis(fn, None, mu)),
                       mul(Const(-2.0 / (9.0 * mu ** 5)), X, Basis(dfn, None, mu)))
        raise DomainError(f"airy repeated roots available for k <= 2, got k={k}")

    members = (
        SolutionMember(
            "Ai", lambda mu: Basis("Ai", None, mu),
            lambda x, m: specfun.airy(m * x)[0], mk_res("Ai", "AiP")),
        SolutionMember(
            "Bi", lambda mu: Basis("Bi", None, mu),
            lambda x, m: specfun.airy(m * x)[1], mk_res("Bi", "BiP")),
    )
    return CatalogRow(
        "airy", "Airy-type operator (1/x) d2/dx2 - mu^3",
        "argument-scale", 1.0, 4.0, "lambda(mu) = mu^3",
        SolutionFamily(members, lambda mu: FunctionDomain(0.0, 100.0)),
        op, repeated, lambda mu: (0.05, 5.0, 200, "linear"))


def _bessel_row() -> CatalogRow:
    def op(mu):
        return OperatorFamily(
            "bessel0", 2, "argument-scale", mu,
            ((0, Const(mu * mu)), (1, Pow(X, -1)), (2, Const(1.0))),
            (-mu * mu, -2.0 * mu, -1.0, 0.0, 0.0))

    def repeated(label, mu, k):
        if not 1 <= k <= jets.MAX_JET_ORDER:
            raise DomainError(f"bessel0 repeated roots available for k in 1..4, got k={k}")
        kind = {"J": "J", "Y": "Y"}[label]
        if k == 1:
            return mul(Const(1.0 / (2.0 * mu)), X, Basis(kind, 1, mu))
        # Unit-constant k-th root family x^k J_k(mu x); the exact eigenvalue
        # derivative is this divided by (2 mu)^k.
        return mul(pow_int(X, k), Basis(kind, k, mu))

    members = (
        SolutionMember(
            "J", lambda mu: Basis("J", 0, mu),
            lambda x, m: specfun.bessel("J", 0, m * x),
            lambda mu: mul(Const(1.0 / (2.0 * mu)), X, Basis("J", 1, mu))),
        SolutionMember(
            "Y", lambda mu: Basis("Y", 0, mu),
            lambda x, m: specfun.bessel("Y", 0, m * x),
            lambda mu: mul(Const(1.0 / (2.0 * mu)), X, Basis("Y", 1, mu))),
    )
    return CatalogRow(
        "bessel0", "Bessel operator d2/dx2 + (1/x) d/dx + mu^2",
        "argument-scale", 1.0, 8.0, "lambda(mu) = -mu^2",
        SolutionFamily(members, lambda mu: FunctionDomain(0.0, math.inf)),
        op, repeated, lambda mu: (0.3, 12.0, 200, "log"))


def _legendre_row() -> CatalogRow:
    def op(mu):
        n = mu
        return OperatorFamily(
            "legendre", 2, "degree", mu,
            ((0, Const(n * (n + 1.0))),
             (1, mul(Const(-2.0), X)),
             (2, add(Const(1.0), mul(Const(-1.0), Pow(X, 2))))),
            (-n * (n + 1.0), -(2.0 * n + 1.0), -1.0, 0.0, 0.0))

    def repeated(label, mu, k):
        if k == 1:
            return mul(Const(-1.0 / (2.0 * mu + 1.0)), Basis("Pd", int(mu)))
        raise DomainError(f"legendre repeated roots available for k=1 only, got k={k}")

    members = (
        SolutionMember(
            "P", lambda mu: Basis("P", int(mu)),
            lambda x, m: specfun.legendre_p_real_degree(m, x),
            lambda mu: mul(Const(-1.0 / (2.0 * mu + 1.0)), Basis("Pd", int(mu)))),
    )
    # The second-kind resonant form is excluded: the degree derivative of Q
    # is never constructed here, so only the P member ships a closed form.
    return CatalogRow(
        "legendre", "Legendre operator d/dx[(1-x^2) d/dx] + mu(mu+1)",
        "degree", 3.0, 8.0, "lambda(mu) = -mu(mu+1)",
        SolutionFamily(members, lambda mu: FunctionDomain(-1.0, 1.0)),
        op, repeated, lambda mu: (-0.9, 0.999, 200, "linear"))


def _hermite_g_value(x: float, m: float) -> float:
    # Real-order continuation of the second solution, anchored at the nearest
    # integer's base point so the order derivative keeps a fixed base point.
    anchor = int(round(m))
    x0 = specfun.hermite_g_base_point(anchor)

    def integrand(t):
        h = specfun.hermite_h_real_order(m, t)
        return np.exp(t * t) / (h * h)

    return specfun.hermite_h_real_order(m, x) * specfun.integrate(
        integrand, x0, x, specfun.DEFAULT_QUAD)


def _hermite_row() -> CatalogRow:
    def op(mu):
        return OperatorFamily(
            "hermite", 2, "degree", mu,
            ((0, Const(2.0 * mu)), (1, mul(Const(-2.0), X)), (2, Const(1.0))),
            (-2.0 * mu, -2.0, 0.0, 0.0, 0.0))

    def repeated(label, mu, k):
        if k == 1:
            tag = {"H": "Hd", "G": "Gd"}[label]
            return mul(Const(-0.5), Basis(tag, int(mu)))
        # Second order-derivatives of the Hermite functions are outside the
        # expression basis; no closed form is offered beyond k=1.
        raise DomainError(f"hermite repeated roots available for k=1 only, got k={k}")

    members = (
        SolutionMember(
            "H", lambda mu: Basis("H", int(mu)),
            lambda x, m: specfun.hermite_h_real_order(m, x),
            lambda mu: mul(Const(-0.5), Basis("Hd", int(mu)))),
        SolutionMember(
            "G", lambda mu: Basis("G", int(mu)),
            _hermite_g_value,
            lambda mu: mul(Const(-0.5), Basis("Gd", int(mu)))),
    )

    def domain(mu):
        zmax = specfun.hermite_z_max(int(mu))
        return FunctionDomain(zmax + 0.05, 8.0, specfun.hermite_zeros(int(mu)) or ())

    def grid(mu):
        zmax = specfun.hermite_z_max(int(mu))
        return (zmax + 0.1, zmax + 1.6, 120, "linear")

    return CatalogRow(
        "hermite", "Hermite operator d2/dx2 - 2x d/dx + 2 mu",
        "degree", 1.0, 8.0, "lambda(mu) = -2 mu",
        SolutionFamily(members, domain),
        op, repeated, grid)


_ROWS: dict[str, CatalogRow] | None = None


def catalog() -> list[CatalogRow]:
    """The six operator rows: harmonic, equidim, airy, bessel0, legendre,
    hermite, each carrying its closed forms."""
    global _ROWS
    if _ROWS is None:
        rows = [_harmonic_row(), _equidim_row(), _airy_row(),
                _bessel_row(), _legendre_row(), _hermite_row()]
        _ROWS = {r.row_id: r for r in rows}
    return list(_ROWS.values())


def get_row(row_id: str) -> CatalogRow:
    catalog()
    try:
        return _ROWS[row_id]
    except KeyError:
        raise KeyError(f"unknown catalog row {row_id!r}; have {ROW_IDS}") from None


def resonant_solution(row: CatalogRow | str, member: str, mu: float) -> symexpr.Expr:
    """Closed-form resonant particular solution du/dlambda for one member."""
    if isinstance(row, str):
        row = get_row(row)
    return row.resonant(member, mu)


def repeated_root(row: CatalogRow | str, member: str, mu: float, k: int) -> symexpr.Expr:
    """Closed-form k-th repeated root where the catalog provides one.

    The result is defined up to the usual constant-multiple freedom; the
    Bessel row returns the unit-constant family x^k J_k / x^k Y_k for k >= 2.
    """
    if isinstance(row, str):
        row = get_row(row)
    if not 1 <= k <= jets.MAX_JET_ORDER:
        raise DomainError(f"repeated root order must be in 1..{jets.MAX_JET_ORDER}")
    return row.repeated(member, mu, k)


def generic_resonant(row: CatalogRow | str, member: str, mu: float,
                     xs, k: int, h: float | None = None) -> list[float]:
    """Generic jet route: pointwise d^k u/dlambda^k via parameter jets and
    exact series reversion of the eigen map. k=0 returns the member itself."""
    if isinstance(row, str):
        row = get_row(row)
    mu = row.validate_mu(mu)
    m = row.family.member(member)
    if k == 0:
        return [m.value(x, mu) for x in xs]
    if not 1 <= k <= jets.MAX_JET_ORDER:
        raise DomainError(f"derivative order must be in 0..{jets.MAX_JET_ORDER}")
    lam_taylor = row.operator(mu).lam_taylor
    offsets = tuple(lam_taylor[1:k + 1]) + (0.0,) * max(0, k - (len(lam_taylor) - 1))
    w = jets.jet_reversion((0.0,) + offsets)[:k + 1]
    out = []
    for x in xs:
        u_jet = jets.jet_of_solution(lambda p: m.value(x, p), mu, k, h)
        inner = jets.Jet(lam_taylor[0], w)
        v = jets.jet_compose(u_jet.coeffs, inner)
        out.append(v.derivative(k))
    return out


# ---------------------------------------------------------------------------
# Fixtures outside the public catalog.

def modified_bessel_fixture(kappa: float = 1.3):
    """Fourth-order modified-Bessel construction: the factor operator
    d2/dx2 - (1/x) d/dx - kappa^2 and the four solutions of its square
    {x I1(kx), x K1(kx), x^2 I2(kx), x^2 K2(kx)}."""
    op = LinearOperator(
        "modified-bessel", ((0, Const(-kappa * kappa)),
                            (1, mul(Const(-1.0), Pow(X, -1))),
                            (2, Const(1.0))))
    sols = [
        mul(X, Basis("I", 1, kappa)),
        mul(X, Basis("K", 1, kappa)),
        mul(Pow(X, 2), Basis("I", 2, kappa)),
        mul(Pow(X, 2), Basis("K", 2, kappa)),
    ]
    return op, sols


def sixth_order_solution_set(mu: float = 1.0) -> list[symexpr.Expr]:
    """The six independent solutions of the cubed Bessel operator:
    {J0, Y0, x J1, x Y1, x^2 J2, x^2 Y2} at scale mu."""
    return [
        Basis("J", 0, mu), Basis("Y", 0, mu),
        mul(X, Basis("J", 1, mu)), mul(X, Basis("Y", 1, mu)),
        mul(Pow(X, 2), Basis("J", 2, mu)), mul(Pow(X, 2), Basis("Y", 2, mu)),
    ]
