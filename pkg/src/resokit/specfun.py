"""Numerical kernels for the special functions used by the solution catalog.

Classical kernels (Airy, Bessel) are delegated to scipy.special behind this
module's domain/overflow contracts; everything specific to the
eigenvalue-derivative construction (degree derivatives of Legendre and
Hermite functions, the second Hermite solution and its degree derivative,
the real-degree oracles) is implemented here directly.

All functions are stateless and safe for concurrent use; quadrature keeps
only local state.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.special as _sp

from .errors import (
    DomainError,
    EvalOverflowError,
    PoleError,
    QuadratureError,
    SeriesError,
)

__all__ = [
    "FunctionDomain",
    "QuadratureSpec",
    "DEFAULT_QUAD",
    "TIGHT_QUAD",
    "integrate",
    "gamma",
    "rgamma",
    "hyp1f1",
    "hyp1f1_a_deriv",
    "airy",
    "bessel",
    "legendre_p",
    "legendre_q",
    "legendre_p_real_degree",
    "legendre_p_deg_deriv",
    "hermite_h",
    "hermite_zeros",
    "hermite_z_max",
    "hermite_g_base_point",
    "hermite_h_real_order",
    "hermite_h_deg_deriv",
    "hermite_h_deg_deriv_single_term",
    "hermite_g",
    "hermite_g_deg_deriv",
    "GAMMA_ONE_THIRD",
    "AIRY_AI_ZERO",
    "MAX_ORDER",
]

# Pinned by scripts/pin_constants.py (40-digit arithmetic, rounded to double).
GAMMA_ONE_THIRD = 2.6789385347077475
AIRY_AI_ZERO = 0.3550280538878172

MAX_ORDER = 32


@dataclass(frozen=True)
class FunctionDomain:
    """Open-ish interval with isolated excluded points (e.g. zeros of H_n)."""

    lower: float = -math.inf
    upper: float = math.inf
    excluded: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError("domain requires lower < upper")
        for p in self.excluded:
            if not (self.lower < p < self.upper):
                raise ValueError("excluded point outside the interval")

    def contains(self, x: float, guard: float = 0.0) -> bool:
        if not (self.lower < x < self.upper):
            return False
        return all(abs(x - p) > guard for p in self.excluded)


# ----------------------------------------------------------------------------
# Adaptive quadrature: bisection with the embedded (G7, K15) pair.

@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budget for adaptive quadrature.

    ``base_point`` optionally overrides the default anchor used by the
    indefinite integrals of the second Hermite solution.
    """

    atol: float = 1e-10
    rtol: float = 1e-9
    max_subdivisions: int = 2000
    base_point: float | None = None

    def __post_init__(self):
        if self.atol <= 0 or self.rtol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUAD = QuadratureSpec()
# For cross-checks that numerically differentiate quadrature output.
TIGHT_QUAD = QuadratureSpec(atol=1e-13, rtol=1e-12, max_subdivisions=4000)

# 15-point Kronrod abscissae/weights with the embedded 7-point Gauss weights,
# aligned index-by-index (Gauss weight 0 on Kronrod-only nodes).
_GK_X = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_GK_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_GK_WG = np.array([
    0.0, 0.129484966168870, 0.0, 0.279705391489277, 0.0,
    0.381830050505119, 0.0, 0.417959183673469, 0.0,
    0.381830050505119, 0.0, 0.279705391489277, 0.0,
    0.129484966168870, 0.0,
])


def _gk15(f, a: float, b: float) -> tuple[float, float]:
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    y = np.asarray(f(c + h * _GK_X), dtype=float)
    if not np.all(np.isfinite(y)):
        raise DomainError(f"integrand not finite inside [{a}, {b}]")
    ik = h * float(_GK_WK @ y)
    ig = h * float(_GK_WG @ y)
    return ik, abs(ik - ig)


def integrate(f, a: float, b: float, spec: QuadratureSpec = DEFAULT_QUAD,
              vectorized: bool = True) -> float:
    """Adaptive bisection quadrature of ``f`` over [a, b].

    ``f`` must accept an ndarray of abscissae unless ``vectorized`` is False.
    Raises QuadratureError when the subdivision budget is exhausted before
    the (atol, rtol) target is met.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    if not vectorized:
        g = f
        f = lambda xs: np.array([g(t) for t in np.atleast_1d(xs)])

    ik, err = _gk15(f, a, b)
    # Max-heap on error; insertion counter keeps ordering deterministic.
    heap = [(-err, 0, a, b, ik)]
    total_i = ik
    total_err = err
    splits = 0
    counter = 1
    while total_err > max(spec.atol, spec.rtol * abs(total_i)):
        if splits >= spec.max_subdivisions:
            raise QuadratureError(
                f"subdivision budget {spec.max_subdivisions} exhausted "
                f"(err={total_err:.3e}, target={max(spec.atol, spec.rtol * abs(total_i)):.3e})")
        nerr, _, lo, hi, ival = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            raise QuadratureError("interval too small to subdivide further")
        i1, e1 = _gk15(f, lo, mid)
        i2, e2 = _gk15(f, mid, hi)
        total_i += (i1 + i2) - ival
        total_err += (e1 + e2) - (-nerr)
        heapq.heappush(heap, (-e1, counter, lo, mid, i1))
        heapq.heappush(heap, (-e2, counter + 1, mid, hi, i2))
        counter += 2
        splits += 1
    return sign * total_i


# ----------------------------------------------------------------------------
# Gamma and confluent hypergeometric kernels.

_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993, 676.5203681218851, -1259.1392167224028,
    771.32342877765313, -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
)


def _sinpi(x: float) -> float:
    # Exact argument reduction keeps full accuracy near integers.
    m = round(x)
    r = x - m
    s = math.sin(math.pi * r)
    return -s if (m % 2) else s


def gamma(x: float) -> float:
    """Gamma function via the Lanczos approximation (reflection for x < 0.5)."""
    if x <= 0 and x == round(x):
        raise PoleError(f"gamma pole at x={x}")
    if x < 0.5:
        return math.pi / (_sinpi(x) * gamma(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def rgamma(x: float) -> float:
    """1/gamma, finite (zero) at the poles of gamma."""
    if x >= 0.5:
        return 1.0 / gamma(x)
    return _sinpi(x) * gamma(1.0 - x) / math.pi


_HYP_MAX_TERMS = 500


def _check_hyp_args(b: float, z) -> None:
    if b <= 0 and b == round(b):
        raise PoleError(f"hyp1f1 parameter b={b} is a nonpositive integer")
    if np.any(np.abs(z) > 64.0):
        raise DomainError("hyp1f1 validated only for |z| <= 64")


def hyp1f1(a: float, b: float, z):
    """Confluent hypergeometric 1F1(a; b; z) by its ascending series.

    Accepts scalar or ndarray ``z``. Convergence is certified by a geometric
    tail bound once the term ratio falls below 1/2; SeriesError otherwise.
    """
    _check_hyp_args(b, z)
    zz = np.asarray(z, dtype=float)
    scalar = zz.ndim == 0
    zz = np.atleast_1d(zz)
    term = np.ones_like(zz)
    total = term.copy()
    comp = np.zeros_like(zz)  # compensated summation carry
    zmax = float(np.max(np.abs(zz))) if zz.size else 0.0
    for k in range(_HYP_MAX_TERMS):
        term = term * ((a + k) / ((b + k) * (k + 1.0))) * zz
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if k > zmax and np.all(np.abs(term) * abs(a + k + 1) * zmax
                               <= 0.5 * abs(b + k + 1) * (k + 2.0)
                               * np.maximum(1e-300, np.abs(total)) * 1e-16):
            # ratio < 1/2 and next term below eps*|sum|: tail < term/(1-r).
            break
    else:
        raise SeriesError("hyp1f1 series failed its tail bound in 500 terms")
    return float(total[0]) if scalar else total


def hyp1f1_a_deriv(a: float, b: float, z):
    """Term-wise d/da of 1F1(a; b; z); exact at nonpositive integer a."""
    _check_hyp_args(b, z)
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    scalar = np.asarray(z).ndim == 0
    poch = 1.0          # (a)_k
    dpoch = 0.0         # d/da (a)_k
    zpow = np.ones_like(zz)
    denom = 1.0         # (b)_k k!
    total = np.zeros_like(zz)
    comp = np.zeros_like(zz)
    zmax = float(np.max(np.abs(zz))) if zz.size else 0.0
    for k in range(1, _HYP_MAX_TERMS + 1):
        dpoch = dpoch * (a + k - 1) + poch
        poch = poch * (a + k - 1)
        zpow = zpow * zz
        denom = denom * (b + k - 1) * k
        term = (dpoch / denom) * zpow
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if k > zmax + 4 and np.all(np.abs(term) <= 1e-17 * (1.0 + np.abs(total))):
            break
    else:
        raise SeriesError("hyp1f1 parameter-derivative series did not converge")
    return float(total[0]) if scalar else total


# ----------------------------------------------------------------------------
# Airy and Bessel kernels (scipy-backed, contract-checked here).

def airy(x: float) -> tuple[float, float, float, float]:
    """(Ai, Bi, Ai', Bi') at x; validated on |x| <= 100."""
    if abs(x) > 100.0:
        raise DomainError("airy validated only on |x| <= 100")
    ai, aip, bi, bip = _sp.airy(x)
    vals = (float(ai), float(bi), float(aip), float(bip))
    if not all(math.isfinite(v) for v in vals):
        raise EvalOverflowError(f"airy component overflow at x={x}")
    return vals


_BESSEL_KINDS = {"J", "Y", "I", "K"}


def bessel(kind: str, order: int, x: float) -> float:
    """Bessel/modified-Bessel value of integer order 0..32.

    Y and K require x > 0; I is overflow-guarded at |x| <= 700.
    """
    if kind not in _BESSEL_KINDS:
        raise ValueError(f"unknown Bessel kind {kind!r}")
    if not (isinstance(order, (int, np.integer)) and 0 <= order <= MAX_ORDER):
        raise DomainError(f"order must be an integer in [0, {MAX_ORDER}], got {order}")
    n = int(order)
    if kind in ("Y", "K") and x <= 0.0:
        raise DomainError(f"{kind}_{n} requires x > 0, got x={x}")
    if kind == "I" and abs(x) > 700.0:
        raise EvalOverflowError(f"I_{n} overflow guard at |x| > 700 (x={x})")
    if kind == "J":
        v = _sp.jv(n, x)
    elif kind == "Y":
        v = _sp.yn(n, x)
    elif kind == "I":
        v = _sp.iv(n, x)
    else:
        v = _sp.kn(n, x)
    v = float(v)
    if math.isinf(v):
        raise EvalOverflowError(f"{kind}_{n}({x}) overflows double range")
    if math.isnan(v):
        raise DomainError(f"{kind}_{n} undefined at x={x}")
    return v


# ----------------------------------------------------------------------------
# Legendre kernels.

def _check_order(n: int, cap: int = MAX_ORDER, name: str = "n") -> int:
    if not (isinstance(n, (int, np.integer)) and 0 <= n <= cap):
        raise DomainError(f"{name} must be an integer in [0, {cap}], got {n}")
    return int(n)


def legendre_p(n: int, x):
    """Legendre polynomial P_n by the three-term recurrence."""
    n = _check_order(n)
    xx = np.asarray(x, dtype=float)
    scalar = xx.ndim == 0
    xx = np.atleast_1d(xx)
    pkm1 = np.ones_like(xx)
    if n == 0:
        return float(pkm1[0]) if scalar else pkm1
    pk = xx.copy()
    for k in range(1, n):
        pkm1, pk = pk, ((2 * k + 1) * xx * pk - k * pkm1) / (k + 1.0)
    return float(pk[0]) if scalar else pk


def legendre_q(n: int, x: float) -> float:
    """Legendre function of the second kind on the cut |x| < 1."""
    n = _check_order(n)
    if abs(x) >= 1.0:
        raise DomainError(f"Q_{n} has logarithmic singularities at |x| >= 1 (x={x})")
    q0 = 0.5 * math.log((1.0 + x) / (1.0 - x))
    if n == 0:
        return q0
    qkm1, qk = q0, x * q0 - 1.0
    for k in range(1, n):
        qkm1, qk = qk, ((2 * k + 1) * x * qk - k * qkm1) / (k + 1.0)
    return qk


def legendre_p_real_degree(nu: float, x: float) -> float:
    """Real-degree P_nu(x) = 2F1(-nu, nu+1; 1; (1-x)/2); oracle only."""
    if abs(nu) > 13.0:
        raise DomainError("legendre_p_real_degree validated only for |nu| <= 13")
    if not (-1.0 < x <= 1.0):
        raise DomainError(f"P_nu defined on (-1, 1], got x={x}")
    w = 0.5 * (1.0 - x)
    term = 1.0
    parts = [1.0]
    for k in range(_HYP_MAX_TERMS):
        term *= (k - nu) * (nu + 1.0 + k) / ((k + 1.0) * (k + 1.0)) * w
        parts.append(term)
        if term == 0.0:
            break
        ratio_bound = w * (1.0 + (abs(nu) + 1.0) / (k + 2.0)) ** 2
        if ratio_bound < 0.75:
            total = math.fsum(parts)
            tail = abs(term) * ratio_bound / (1.0 - ratio_bound)
            if tail <= 1e-17 * max(1.0, abs(total)):
                break
    else:
        raise SeriesError("real-degree Legendre series failed its tail bound in 500 terms")
    return math.fsum(parts)


def legendre_p_deg_deriv(n: int, x: float) -> float:
    """Degree derivative dP_nu/dnu at integer nu=n, by the Rodrigues-with-log
    closed form expanded via the Leibniz rule (every factor in closed form)."""
    n = _check_order(n, cap=13)
    if not (-1.0 < x <= 1.0):
        raise DomainError(f"degree derivative defined on (-1, 1], got x={x}")
    lg = math.log((x + 1.0) / 2.0)
    pn = legendre_p(n, x)
    if n == 0:
        return lg
    xp, xm = x + 1.0, x - 1.0

    def d_m_poly(m):
        # d^m/dx^m (x^2-1)^n via the product rule on (x+1)^n (x-1)^n.
        parts = []
        for j in range(m + 1):
            if j > n or (m - j) > n:
                continue
            c = (math.comb(m, j)
                 * math.perm(n, j) * math.perm(n, m - j))
            parts.append(c * xp ** (n - j) * xm ** (n - m + j))
        return math.fsum(parts)

    scale = 1.0 / (2.0 ** (n - 1) * math.factorial(n))
    corr = []
    for k in range(1, n + 1):
        c = math.comb(n, k) * (-1.0) ** (k - 1) * math.factorial(k - 1)
        corr.append(c * d_m_poly(n - k) / xp ** k)
    return pn * lg + scale * math.fsum(corr)


# ----------------------------------------------------------------------------
# Hermite kernels.

def hermite_h(n: int, x):
    """Physicists' Hermite polynomial H_n by recurrence."""
    n = _check_order(n, cap=20)
    xx = np.asarray(x, dtype=float)
    scalar = xx.ndim == 0
    xx = np.atleast_1d(xx)
    hkm1 = np.ones_like(xx)
    if n == 0:
        return float(hkm1[0]) if scalar else hkm1
    hk = 2.0 * xx
    for k in range(1, n):
        hkm1, hk = hk, 2.0 * xx * hk - 2.0 * k * hkm1
    return float(hk[0]) if scalar else hk


@lru_cache(maxsize=64)
def hermite_zeros(n: int) -> tuple[float, ...]:
    """All real zeros of H_n, ascending, found by interlacing bisection."""
    n = _check_order(n, cap=20)
    if n == 0:
        return ()

    def h(k, t):
        return hermite_h(k, t)

    zeros = (0.0,)  # H_1
    for k in range(2, n + 1):
        hi = math.sqrt(2.0 * k + 1.0)
        brackets = (-hi,) + zeros + (hi,)
        new = []
        for a, b in zip(brackets[:-1], brackets[1:]):
            fa, fb = h(k, a), h(k, b)
            if fa == 0.0:
                fa = h(k, a + 1e-13)
            if fb == 0.0:
                fb = h(k, b - 1e-13)
            lo_, hi_ = a, b
            for _ in range(100):
                mid = 0.5 * (lo_ + hi_)
                fm = h(k, mid)
                if fm == 0.0:
                    lo_ = hi_ = mid
                    break
                if (fm > 0) == (fa > 0):
                    lo_, fa = mid, fm
                else:
                    hi_ = mid
            new.append(0.5 * (lo_ + hi_))
        zeros = tuple(new)
    return zeros


def hermite_z_max(n: int) -> float:
    """Largest real zero of H_n; 0.0 for n=0 (no zeros) by convention."""
    zs = hermite_zeros(n)
    return zs[-1] if zs else 0.0


def hermite_g_base_point(n: int) -> float:
    return hermite_z_max(n) + 0.5


def hermite_h_real_order(nu: float, x):
    """Hermite function of real order via its two-term 1F1 representation."""
    xx = np.asarray(x, dtype=float)
    if np.any(np.abs(xx) > 8.0):
        raise DomainError("hermite_h_real_order validated only on |x| <= 8")
    z = xx * xx
    t1 = rgamma(0.5 * (1.0 - nu)) * hyp1f1(-0.5 * nu, 0.5, z)
    t2 = 2.0 * xx * rgamma(-0.5 * nu) * hyp1f1(0.5 * (1.0 - nu), 1.5, z)
    return (2.0 ** nu) * math.sqrt(math.pi) * (t1 - t2)


def _hermite_h_deg_deriv_raw(n: int, x, step: float):
    # Central difference in the order with one Richardson level.
    def d(h):
        return (hermite_h_real_order(n + h, x) - hermite_h_real_order(n - h, x)) / (2.0 * h)

    return (4.0 * d(0.5 * step) - d(step)) / 3.0


@lru_cache(maxsize=500_000)
def _hermite_h_deg_deriv_scalar(n: int, x: float, step: float) -> float:
    return float(_hermite_h_deg_deriv_raw(n, x, step))


def hermite_h_deg_deriv(n: int, x: float, step: float = 1e-4) -> float:
    """Degree derivative dH_nu/dnu at integer nu=n.

    Computed by a Richardson-extrapolated central difference in the order of
    the real-order Hermite function; its ground truth is the residual
    identity (d^2/dx^2 - 2x d/dx + 2n)[H_{n,1}] = -2 H_n.
    """
    n = _check_order(n, cap=16)
    if abs(x) > 8.0:
        raise DomainError("hermite_h_deg_deriv validated only on |x| <= 8")
    if step <= 0:
        raise ValueError("step must be positive")
    return _hermite_h_deg_deriv_scalar(n, float(x), float(step))


def hermite_h_deg_deriv_single_term(n: int, x: float) -> float:
    """Single-term candidate x * d/dxi 1F1(xi, 3/2, x^2) at xi=(1-n)/2.

    Kept as a recorded cross-check only: it does not reproduce the defining
    residual of the degree derivative (see tests); use hermite_h_deg_deriv.
    """
    n = _check_order(n, cap=16)
    return x * hyp1f1_a_deriv(0.5 * (1.0 - n), 1.5, x * x)


def _g_domain_check(n: int, x: float) -> float:
    zmax = hermite_z_max(n)
    for z in hermite_zeros(n):
        if abs(x - z) <= 0.05:
            raise DomainError(f"x={x} within 0.05 of a zero of H_{n}")
    if x <= zmax + 0.05:
        raise DomainError(
            f"second Hermite solution defined for x > {zmax + 0.05:.6g} (largest zero + 0.05)")
    return zmax


def _g_weight_integral(n: int, x: float, spec: QuadratureSpec) -> float:
    # F_n(x) = int_{x0}^{x} e^{t^2} / H_n(t)^2 dt
    x0 = spec.base_point if spec.base_point is not None else hermite_g_base_point(n)

    def f(t):
        hn = hermite_h(n, t)
        return np.exp(t * t) / (hn * hn)

    return integrate(f, x0, x, spec)


@lru_cache(maxsize=200_000)
def _hermite_g_cached(n: int, x: float, spec: QuadratureSpec) -> float:
    _g_domain_check(n, x)
    return hermite_h(n, x) * _g_weight_integral(n, x, spec)


def hermite_g(n: int, x: float, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Second Hermite solution H_n(x) * int_{x0}^{x} e^{t^2}/H_n(t)^2 dt.

    Defined to the right of the largest zero of H_n with the deterministic
    base point x0 = z_max + 0.5.
    """
    n = _check_order(n, cap=16)
    return _hermite_g_cached(n, float(x), spec)


@lru_cache(maxsize=200_000)
def _hermite_g_deg_deriv_cached(n: int, x: float, spec: QuadratureSpec,
                                step: float) -> float:
    _g_domain_check(n, x)
    x0 = spec.base_point if spec.base_point is not None else hermite_g_base_point(n)
    f_int = _g_weight_integral(n, x, spec)

    def t_integrand(t):
        hn = hermite_h(n, t)
        hd = np.asarray(_hermite_h_deg_deriv_raw(n, t, step))
        return np.exp(t * t) * hd / (hn * hn * hn)

    t_int = integrate(t_integrand, x0, x, spec)
    return (hermite_h_deg_deriv(n, x, step) * f_int
            - 2.0 * hermite_h(n, x) * t_int)


def hermite_g_deg_deriv(n: int, x: float, spec: QuadratureSpec = DEFAULT_QUAD,
                        step: float = 1e-4) -> float:
    """Degree derivative of the second Hermite solution (chain rule on its
    integral representation); same domain and base point as hermite_g."""
    n = _check_order(n, cap=16)
    return _hermite_g_deg_deriv_cached(n, float(x), spec, float(step))
