"""Floating-point asymptotics for the normalized triangle rows.

Three layers of approximation to A(n, k, rho)/n!:

* a plain central-limit z-score (mean (n+1)/2 - rho, variance (n+1)/12),
* a local limit expansion with Hermite-polynomial corrections q_nu whose
  coefficients are built exactly from Bernoulli numbers, and
* a saddle-point formula m(a)^(n+1)/sqrt(2 pi (n+1) sigma^2(a)) that stays
  accurate far into the tails, where a = (k + rho)/(n + 1).

The saddle point t(a) solves (log psi)'(t) = a for psi(t) = (e^t - 1)/t,
the uniform moment generating function.  Everything returns binary64;
the q_nu construction keeps exact rationals internally because its
partition-sum constants are tiny and cancellation-prone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .ef_core import bernoulli_number

__all__ = [
    "SaddleResult",
    "hermite_poly",
    "q_poly",
    "llt_approx",
    "clt_zscore",
    "saddle_solve",
    "ldev_approx",
    "polyval",
]


def polyval(coeffs, x: float) -> float:
    """Horner evaluation of a coefficient list (index = power) at a float."""
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + float(c)
    return acc


@lru_cache(maxsize=256)
def hermite_poly(m: int) -> tuple[Fraction, ...]:
    """Probabilists' Hermite polynomial H_m, exact coefficients.

    H_0 = 1, H_1 = x, H_{m+1} = x H_m - m H_{m-1}.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return (Fraction(1),)
    if m == 1:
        return (Fraction(0), Fraction(1))
    prev2 = hermite_poly(m - 2)
    prev1 = hermite_poly(m - 1)
    out = [Fraction(0)] * (m + 1)
    for i, c in enumerate(prev1):
        out[i + 1] += c
    for i, c in enumerate(prev2):
        out[i] -= (m - 1) * c
    return tuple(out)


def _weighted_partitions(total: int):
    """All (k_1, ..., k_total) with sum m*k_m = total, as {m: k_m} dicts."""

    def rec(m: int, remaining: int):
        if m == 0:
            if remaining == 0:
                yield {}
            return
        for c in range(remaining // m + 1):
            for rest in rec(m - 1, remaining - c * m):
                if c:
                    rest = dict(rest)
                    rest[m] = c
                yield rest

    yield from rec(total, total)


@lru_cache(maxsize=64)
def q_poly(nu: int) -> tuple[Fraction, ...]:
    """Correction polynomial q_nu of the local limit expansion, exact.

    q_nu(x) = 12^nu * sum over partitions (k_1..k_nu) of nu, s = sum k_m:
        H_{2 nu + 2 s}(x) * 6^s * prod_m (1/k_m!) (B_{2m+2}/((m+1)(2m+2)!))^{k_m}.

    Degree is 4*nu.  q_1 = -(x^4 - 6x^2 + 3)/20.
    """
    if nu < 1:
        raise ValueError("nu must be >= 1")
    acc: list[Fraction] = [Fraction(0)] * (4 * nu + 1)
    for part in _weighted_partitions(nu):
        s = sum(part.values())
        coef = Fraction(6) ** s
        for m, km in part.items():
            base = bernoulli_number(2 * m + 2) / ((m + 1) * factorial(2 * m + 2))
            coef *= base**km / factorial(km)
        for i, h in enumerate(hermite_poly(2 * nu + 2 * s)):
            acc[i] += coef * h
    scale = Fraction(12) ** nu
    out = [scale * c for c in acc]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@lru_cache(maxsize=64)
def _q_poly_floats(nu: int) -> tuple[float, ...]:
    return tuple(float(c) for c in q_poly(nu))


def llt_approx(n: int, k: int, rho: float, ell: int = 0) -> float:
    """Gaussian local approximation of A(n, k, rho)/n! with ell corrections.

    sqrt(6/(pi(n+1))) e^(-x^2/2) (1 + sum_{nu<=ell} q_nu(x)/(n+1)^nu)
    at x = (k + rho - (n+1)/2) sqrt(12/(n+1)).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= rho <= 1:
        raise ValueError("rho must lie in [0, 1]")
    if ell < 0:
        raise ValueError("ell must be >= 0")
    x = (k + rho - (n + 1) / 2.0) * math.sqrt(12.0 / (n + 1))
    correction = 1.0
    for nu in range(1, ell + 1):
        correction += polyval(_q_poly_floats(nu), x) / (n + 1) ** nu
    return math.sqrt(6.0 / (math.pi * (n + 1))) * math.exp(-x * x / 2.0) * correction


def clt_zscore(n: int, rho: float, k: int) -> float:
    """Standardized coordinate (k - mean)/sd with mean (n+1)/2 - rho."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return (k - ((n + 1) / 2.0 - rho)) / math.sqrt((n + 1) / 12.0)


# --- saddle-point machinery -------------------------------------------------

_SERIES_CUT = 1e-3


def _log_psi(t: float) -> float:
    """log((e^t - 1)/t), stable for all t."""
    if abs(t) < 1e-2:
        t2 = t * t
        return t / 2.0 + t2 / 24.0 - t2 * t2 / 2880.0 + t2 * t2 * t2 / 181440.0
    if t > 0:
        return t + math.log(-math.expm1(-t)) - math.log(t)
    return math.log(-math.expm1(t)) - math.log(-t)


def _log_psi_prime(t: float) -> float:
    """(log psi)'(t) = 1/(1 - e^(-t)) - 1/t, increasing from 0 to 1."""
    if abs(t) < _SERIES_CUT:
        # Taylor expansion through t^5; next term is O(t^7)
        t2 = t * t
        return 0.5 + t / 12.0 - t * t2 / 720.0 + t * t2 * t2 / 30240.0
    if t < -36.0:
        # 1/(1 - e^(-t)) = -e^t/(1 - e^t) = -e^t + O(e^(2t)); avoids expm1 overflow
        return -math.exp(t) - 1.0 / t
    em1 = math.expm1(-t)  # e^(-t) - 1
    return -1.0 / em1 - 1.0 / t


def _log_psi_second(t: float) -> float:
    """(log psi)''(t) = 1/t^2 - e^t/(e^t - 1)^2, positive, even, max 1/12 at 0.

    The subtrahend equals 1/(4 sinh^2(t/2)); the t -> 0 limit is 1/12,
    the variance of a uniform variable.
    """
    if abs(t) < _SERIES_CUT:
        t2 = t * t
        return 1.0 / 12.0 - t2 / 240.0 + t2 * t2 / 6048.0
    if abs(t) > 100.0:
        return 1.0 / (t * t)
    sh = 2.0 * math.sinh(t / 2.0)
    return 1.0 / (t * t) - 1.0 / (sh * sh)


@dataclass(frozen=True)
class SaddleResult:
    """Solved saddle point for a target mean value a in (0, 1)."""

    a: float
    t: float
    m: float
    sigma2: float


def saddle_solve(a: float, tol: float = 1e-13, max_iter: int = 200) -> SaddleResult:
    """Solve (log psi)'(t) = a; return t, m(a) = e^(-a t) psi(t), sigma^2(a).

    Bracketed Newton: the target function is strictly increasing, so a
    bracket always exists and Newton steps that leave it fall back to
    bisection.  Near a = 1/2 the Taylor seed t ~ 12(a - 1/2) avoids the
    0/0 cancellation in the defining expression.
    """
    if not 0.0 < a < 1.0:
        raise ValueError("a must lie in (0, 1)")
    if a == 0.5:
        return SaddleResult(a=a, t=0.0, m=1.0, sigma2=1.0 / 12.0)

    if abs(a - 0.5) < _SERIES_CUT:
        t = 12.0 * (a - 0.5)
    elif a < 0.5:
        t = max(-1.0 / a, -1e308)  # asymptotically exact as a -> 0
    else:
        t = 1.0 / (1.0 - a)

    # grow a sign-changing bracket around the seed
    lo, hi = t - 1.0, t + 1.0
    step = 1.0
    while _log_psi_prime(lo) > a:
        step *= 2.0
        lo -= step
    step = 1.0
    while _log_psi_prime(hi) < a:
        step *= 2.0
        hi += step

    for _ in range(max_iter):
        r = _log_psi_prime(t) - a
        if abs(r) <= tol:
            break
        if r > 0:
            hi = min(hi, t)
        else:
            lo = max(lo, t)
        d = _log_psi_second(t)
        t_new = t - r / d if d > 0 else (lo + hi) / 2.0
        if not lo < t_new < hi:
            t_new = (lo + hi) / 2.0
        if t_new == t:
            break
        t = t_new
    else:
        raise RuntimeError(f"saddle solve did not converge for a={a}")

    m = math.exp(-a * t + _log_psi(t))
    return SaddleResult(a=a, t=t, m=m, sigma2=_log_psi_second(t))


def ldev_approx(n: int, k: int, rho: float) -> float:
    """Saddle-point approximation of A(n, k, rho)/n!.

    m(a)^(n+1)/sqrt(2 pi (n+1) sigma^2(a)) at a = (k + rho)/(n + 1);
    requires 0 < k + rho < n + 1.  The power m^(n+1) is evaluated through
    logs so deep-tail values do not underflow prematurely.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    pos = k + rho
    if not 0.0 < pos < n + 1:
        raise ValueError("k + rho must lie strictly inside (0, n+1)")
    a = pos / (n + 1)
    res = saddle_solve(a)
    log_m = -a * res.t + _log_psi(res.t)
    return math.exp((n + 1) * log_m) / math.sqrt(2.0 * math.pi * (n + 1) * res.sigma2)
