"""Truncated Taylor (jet) arithmetic in the continuation parameter.

A jet holds the coefficients c_0..c_K of an expansion around a base point;
c_k = (1/k!) * d^k/d_eps^k at eps=0. Arithmetic is exact truncated Taylor
algebra; numerical jets of solution families come from Richardson-
extrapolated central differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import JetError

__all__ = ["Jet", "MAX_JET_ORDER", "jet_arith", "jet_compose", "jet_reversion",
           "jet_of_solution", "fd_derivative"]

MAX_JET_ORDER = 4


@dataclass(frozen=True)
class Jet:
    """Taylor coefficients (c_0..c_K) of a scalar function around ``base``."""

    base: float
    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise JetError("jet order must be at least 1")
        if len(self.coeffs) - 1 > MAX_JET_ORDER:
            raise JetError(f"jet order capped at {MAX_JET_ORDER}")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def derivative(self, k: int) -> float:
        """k-th derivative value, i.e. k! * c_k."""
        if not 0 <= k <= self.order:
            raise JetError(f"derivative order {k} outside jet order {self.order}")
        return math.factorial(k) * self.coeffs[k]

    def _check_compatible(self, other: "Jet"):
        if self.base != other.base or self.order != other.order:
            raise JetError("jets must share base point and order")

    def add(self, other: "Jet") -> "Jet":
        self._check_compatible(other)
        return Jet(self.base, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def mul(self, other: "Jet") -> "Jet":
        """Cauchy product truncated at the common order."""
        self._check_compatible(other)
        k = self.order
        out = [0.0] * (k + 1)
        for i, a in enumerate(self.coeffs):
            for j in range(0, k + 1 - i):
                out[i + j] += a * other.coeffs[j]
        return Jet(self.base, tuple(out))

    def scale(self, c: float) -> "Jet":
        return Jet(self.base, tuple(c * a for a in self.coeffs))

    def reciprocal(self) -> "Jet":
        """Truncated 1/self; the constant term must be nonzero (a zero
        constant term is exactly the divergent resonant case, handled by
        the catalog's constant relabeling, not here)."""
        if self.coeffs[0] == 0.0:
            raise JetError("reciprocal of a jet with singular (zero) constant term")
        k = self.order
        inv0 = 1.0 / self.coeffs[0]
        out = [inv0] + [0.0] * k
        for m in range(1, k + 1):
            s = 0.0
            for i in range(1, m + 1):
                s += self.coeffs[i] * out[m - i]
            out[m] = -inv0 * s
        return Jet(self.base, tuple(out))


def jet_arith(a: Jet, b: Jet | float | None, op: str) -> Jet:
    """Dispatcher form of the arithmetic: op in {add, mul, scale, reciprocal}."""
    if op == "add":
        return a.add(b)
    if op == "mul":
        return a.mul(b)
    if op == "scale":
        return a.scale(float(b))
    if op == "reciprocal":
        return a.reciprocal()
    raise JetError(f"unknown jet operation {op!r}")


def jet_compose(outer: tuple[float, ...], inner: Jet) -> Jet:
    """Compose F(inner(eps)) from outer Taylor coefficients of F around
    inner's constant term; inner must have zero constant term."""
    if inner.coeffs[0] != 0.0:
        raise JetError("composition requires a zero constant term in the inner jet")
    k = inner.order
    acc = Jet(inner.base, (outer[-1],) + (0.0,) * k)
    for c in reversed(outer[:-1]):
        acc = acc.mul(inner)
        acc = Jet(inner.base, (acc.coeffs[0] + c,) + acc.coeffs[1:])
    return acc


def jet_reversion(l: tuple[float, ...]) -> tuple[float, ...]:
    """Series reversion to order 4: given w = l1 e + l2 e^2 + ..., return the
    coefficients of the inverse series e(w). Requires l1 != 0."""
    l = tuple(l) + (0.0,) * (5 - len(l))
    if l[0] != 0.0:
        raise JetError("reversion expects a zero constant term")
    l1, l2, l3, l4 = l[1], l[2], l[3], l[4]
    if l1 == 0.0:
        raise JetError("reversion requires a nonzero linear coefficient")
    w1 = 1.0 / l1
    w2 = -l2 / l1 ** 3
    w3 = (2.0 * l2 ** 2 - l1 * l3) / l1 ** 5
    w4 = (5.0 * l1 * l2 * l3 - 5.0 * l2 ** 3 - l1 ** 2 * l4) / l1 ** 7
    return (0.0, w1, w2, w3, w4)


# Central stencils for d^k/dmu^k, all O(h^2); offsets are in units of h.
_STENCILS = {
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
    4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
}


def fd_derivative(f: Callable[[float], float], mu: float, k: int, h: float,
                  _cache: dict | None = None) -> float:
    """k-th derivative of f at mu by a central stencil with one Richardson
    level (combining steps h and h/2)."""
    if k == 0:
        return f(mu)
    if k not in _STENCILS:
        raise JetError(f"finite-difference stencils support k in 1..4, got {k}")
    cache = _cache if _cache is not None else {}

    def val(offset_h: float) -> float:
        if offset_h not in cache:
            cache[offset_h] = f(mu + offset_h)
        return cache[offset_h]

    def estimate(step: float) -> float:
        return math.fsum(w * val(o * step) for o, w in _STENCILS[k]) / step ** k

    d_h = estimate(h)
    d_h2 = estimate(0.5 * h)
    return (4.0 * d_h2 - d_h) / 3.0


def jet_of_solution(f: Callable[[float], float], mu: float, order: int,
                    h: float | None = None) -> Jet:
    """Numerical jet of a solution family in its continuation parameter.

    ``f`` evaluates the family at a fixed abscissa as a function of the
    parameter. c_0 is exact (direct evaluation); higher coefficients come
    from Richardson-extrapolated central differences. Domain errors raised
    by ``f`` propagate unchanged.
    """
    if not 1 <= order <= MAX_JET_ORDER:
        raise JetError(f"jet order must be in 1..{MAX_JET_ORDER}")
    if h is None:
        h = 1e-3 * max(1.0, abs(mu))
    if h <= 0.0:
        raise JetError("step must be positive")
    cache: dict = {}
    coeffs = [f(mu)]
    for k in range(1, order + 1):
        coeffs.append(fd_derivative(f, mu, k, h, _cache=cache) / math.factorial(k))
    return Jet(mu, tuple(coeffs))
