"""Distribution of sums of independent uniform(0,1) variables and the
integer law obtained by rho-rounding such a sum.

S_n denotes U_1 + ... + U_n.  Its distribution function F_n and density
f_n are piecewise polynomials with knots at the integers; f_n(k + rho)
equals A(n-1, k, rho)/(n-1)!, which ties the density values to the exact
triangle in `ef_core`.  Rounding S_n with parameter rho produces the
integer variable whose pmf is A(n, k, rho)/n!; this module computes that
law exactly (pmf, cdf, moments, cumulants, generating functions) and
numerically (characteristic-function series, oscillatory quadrature).

Exact routines accept anything `fractions.Fraction` accepts and always
return Fractions; float-typed routines are binary64 end to end.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, floor
from typing import Iterator, Union

import numpy as np

from .ef_core import as_fraction, ef_number, ef_row

__all__ = [
    "IntPmf",
    "EFDistribution",
    "QuadratureError",
    "irwin_hall_cdf",
    "irwin_hall_pdf",
    "irwin_hall_moment",
    "pdf_via_ef",
    "slice_volume",
    "ef_pmf",
    "ef_cdf",
    "ef_distribution",
    "ef_moment",
    "ef_cumulant",
    "ef_pgf_eval",
    "char_fn_exact",
    "char_fn_series",
    "ef_via_integral",
]

_FLOAT_MASS_TOL = 1e-12


@dataclass(frozen=True)
class IntPmf:
    """Probability mass function on a contiguous block of integers.

    `weights[j]` is the mass at `offset + j`.  Weights are either all
    exact (Fraction/int, summing to 1 exactly) or floats (summing to 1
    within 1e-12).  Empirical pmfs built from counts stay exact, which
    makes reproducibility checks bit-for-bit.
    """

    offset: int
    weights: tuple

    def __post_init__(self):
        if not self.weights:
            raise ValueError("pmf needs at least one atom")
        if any(w < 0 for w in self.weights):
            raise ValueError("pmf weights must be nonnegative")
        total = sum(self.weights)
        if self.is_exact:
            if total != 1:
                raise ValueError(f"exact pmf weights sum to {total}, not 1")
        elif abs(total - 1.0) > _FLOAT_MASS_TOL:
            raise ValueError(f"float pmf weights sum to {total!r}")

    @property
    def is_exact(self) -> bool:
        return all(isinstance(w, (int, Fraction)) for w in self.weights)

    @property
    def support(self) -> range:
        return range(self.offset, self.offset + len(self.weights))

    def prob(self, k: int):
        j = k - self.offset
        if 0 <= j < len(self.weights):
            return self.weights[j]
        return Fraction(0) if self.is_exact else 0.0

    def items(self) -> Iterator[tuple[int, Union[Fraction, float]]]:
        for j, w in enumerate(self.weights):
            yield self.offset + j, w

    def moment(self, m: int):
        return sum(k**m * w for k, w in self.items())

    def mean(self):
        return self.moment(1)

    def variance(self):
        mu = self.mean()
        return self.moment(2) - mu * mu

    def tv_distance(self, other: "IntPmf") -> float:
        lo = min(self.offset, other.offset)
        hi = max(self.support.stop, other.support.stop)
        acc = sum(abs(self.prob(k) - other.prob(k)) for k in range(lo, hi))
        return float(acc) / 2.0

    def as_floats(self) -> "IntPmf":
        return IntPmf(self.offset, tuple(float(w) for w in self.weights))


@dataclass(frozen=True)
class EFDistribution:
    """The law of a rho-rounded uniform sum: pmf(k) = A(n, k+floor(rho), {rho})/n!."""

    n: int
    rho: Fraction
    pmf: IntPmf


def _frac(x: Fraction) -> Fraction:
    # fractional part in [0, 1) for every sign
    return x - floor(x)


def _pos_pow(x: Fraction, n: int) -> Fraction:
    if x <= 0:
        return Fraction(0)
    return x**n


def irwin_hall_cdf(n: int, x) -> Fraction:
    """F_n(x) = P(S_n <= x), exact; 0 below 0 and 1 above n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    v = as_fraction(x)
    if v <= 0:
        return Fraction(0)
    if v >= n:
        return Fraction(1)
    acc = Fraction(0)
    for j in range(n + 1):
        term = _pos_pow(v - j, n)
        if term:
            acc += (-1) ** j * comb(n, j) * term
    return acc / factorial(n)


def irwin_hall_pdf(n: int, x) -> Fraction:
    """Density f_n(x), exact.  n = 1 is rejected at the jump points 0, 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    v = as_fraction(x)
    if n == 1 and (v == 0 or v == 1):
        raise ValueError("f_1 is undetermined at 0 and 1")
    acc = Fraction(0)
    for j in range(n + 1):
        term = _pos_pow(v - j, n - 1)
        if term:
            acc += (-1) ** j * comb(n, j) * term
    return acc / factorial(n - 1)


def pdf_via_ef(n: int, x) -> Fraction:
    """f_n(x) as A(n-1, floor(x), {x})/(n-1)!; same values as irwin_hall_pdf."""
    if n < 1:
        raise ValueError("n must be >= 1")
    v = as_fraction(x)
    if n == 1 and (v == 0 or v == 1):
        raise ValueError("f_1 is undetermined at 0 and 1")
    return ef_number(n - 1, floor(v), _frac(v)) / factorial(n - 1)


@lru_cache(maxsize=1024)
def irwin_hall_moment(n: int, m: int) -> Fraction:
    """E S_n^m by symbolic integration of the piecewise polynomial density.

    On [j, j+1] the density is (1/(n-1)!) sum_{l<=j} (-1)^l C(n,l) (x-l)^(n-1);
    each integral of x^m (x-l)^(n-1) expands binomially into monomials.
    Kept independent of the cumulant shortcuts so it can act as an oracle.
    """
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    if m == 0:
        return Fraction(1)
    total = Fraction(0)
    for j in range(n):
        for l in range(j + 1):
            c = Fraction((-1) ** l * comb(n, l))
            # integral of x^m (x-l)^(n-1) dx over [j, j+1]
            piece = Fraction(0)
            for i in range(n):
                coef = comb(n - 1, i) * (Fraction(-l)) ** (n - 1 - i)
                p = m + i + 1
                piece += coef * (Fraction((j + 1) ** p, p) - Fraction(j**p, p))
            total += c * piece
    return total / factorial(n - 1)


def slice_volume(n: int, s) -> Fraction:
    """Volume of {x in [0,1]^n : s-1 <= sum x_i <= s} = F_n(s) - F_n(s-1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    v = as_fraction(s)
    return irwin_hall_cdf(n, v) - irwin_hall_cdf(n, v - 1)


def ef_pmf(n: int, rho, k: int) -> Fraction:
    """P(Z = k) = A(n, k + floor(rho), {rho})/n! for the rounded sum Z."""
    if n < 1:
        raise ValueError("n must be >= 1")
    r = as_fraction(rho)
    return ef_number(n, k + floor(r), _frac(r)) / factorial(n)


def ef_cdf(n: int, rho, k: int) -> Fraction:
    """P(Z <= k) = F_n(k + rho)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return irwin_hall_cdf(n, k + as_fraction(rho))


def ef_distribution(n: int, rho) -> EFDistribution:
    """Full pmf of the rounded sum, zero edge atoms trimmed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    r = as_fraction(rho)
    shift = floor(r)
    row = ef_row(n, _frac(r)).values
    lo, hi = 0, n
    while row[lo] == 0:
        lo += 1
    while row[hi] == 0:
        hi -= 1
    weights = tuple(v / factorial(n) for v in row[lo : hi + 1])
    return EFDistribution(n=n, rho=r, pmf=IntPmf(offset=lo - shift, weights=weights))


def ef_moment(n: int, rho, m: int) -> Fraction:
    """m-th raw moment of the rounded sum, by direct summation."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return ef_distribution(n, rho).pmf.moment(m)


def ef_cumulant(n: int, rho, m: int) -> Fraction:
    """m-th cumulant, from exact moments via the standard recursion.

    kappa_m = mu_m - sum_{j=1}^{m-1} C(m-1, j-1) kappa_j mu_{m-j}.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    mu = [ef_moment(n, rho, i) for i in range(m + 1)]
    kappa = [Fraction(0)] * (m + 1)
    for i in range(1, m + 1):
        acc = mu[i]
        for j in range(1, i):
            acc -= comb(i - 1, j - 1) * kappa[j] * mu[i - j]
        kappa[i] = acc
    return kappa[m]


def ef_pgf_eval(n: int, rho, x) -> Fraction:
    """Probability generating function P_n(x)/n!, defined for rho in [0, 1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    r = as_fraction(rho)
    if not 0 <= r <= 1:
        raise ValueError("the pgf form requires rho in [0, 1]")
    xx = as_fraction(x)
    row = ef_row(n, r).values
    acc = Fraction(0)
    for c in reversed(row):
        acc = acc * xx + c
    return acc / factorial(n)


def char_fn_exact(n: int, rho, t: float) -> complex:
    """E exp(itZ) summed over the exact pmf (result in binary64)."""
    dist = ef_distribution(n, rho)
    return sum(float(w) * cmath.exp(1j * t * k) for k, w in dist.pmf.items())


def char_fn_series(n: int, rho: float, t: float, K: int) -> complex:
    """Characteristic function by the lattice series over shifted poles.

    i^(-n-1) e^(-i rho t) (e^(it)-1)^(n+1) sum_{|k|<=K} e^(-2 pi i k rho)/(t+2 pi k)^(n+1).
    Valid away from the poles at multiples of 2*pi; the truncation error
    decays like K^(-n).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if K < 1:
        raise ValueError("K must be >= 1")
    nearest = round(t / (2 * math.pi))
    if abs(t - 2 * math.pi * nearest) < 1e-9:
        raise ValueError("t is within 1e-9 of a pole at a multiple of 2*pi")
    acc = 0j
    for k in range(-K, K + 1):
        acc += cmath.exp(-2j * math.pi * k * rho) / (t + 2 * math.pi * k) ** (n + 1)
    prefac = (1j) ** (-(n + 1)) * cmath.exp(-1j * rho * t) * (cmath.exp(1j * t) - 1) ** (n + 1)
    return prefac * acc


class QuadratureError(RuntimeError):
    """Requested tolerance could not be certified."""


@lru_cache(maxsize=8)
def _gl_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _composite_gl(f, a: float, b: float, panels: int, order: int = 16) -> float:
    x, w = _gl_nodes(order)
    edges = np.linspace(a, b, panels + 1)
    mid = (edges[1:] + edges[:-1]) / 2.0
    half = (edges[1:] - edges[:-1]) / 2.0
    pts = mid[:, None] + half[:, None] * x[None, :]
    vals = f(pts)
    return float(np.sum(vals @ w * half))


def ef_via_integral(n: int, k: int, rho: float, tol: float = 1e-8,
                    max_panels: int = 1 << 21) -> float:
    """A(n, k, rho) by oscillatory quadrature of its Fourier representation.

    A = (2 n!/pi) * integral_0^inf cos(b t) (sin t / t)^(n+1) dt with
    b = 2k + 2 rho - n - 1.  The integrand is a trigonometric polynomial
    divided by t^(n+1); any zero-frequency (resonant) component decays
    without cancellation, so its tail integral beyond the truncation
    point T is added in closed form, while the oscillatory remainder is
    bounded by 2/(|freq| T^(n+1)) per component and T is chosen to push
    that bound below tol/2.  The finite part uses panel-doubling
    composite Gauss-Legendre until two refinements agree.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    b = 2.0 * k + 2.0 * rho - (n + 1)
    prefac = 2.0 * factorial(n) / math.pi

    # cos(bt) sin^(n+1)(t) = sum over (j, s) of (gamma_j/2) e^{i((n+1-2j)+s b)t}
    gammas = [comb(n + 1, j) * (-1) ** j / (2j) ** (n + 1) for j in range(n + 2)]
    dc = 0j
    osc_sum = 0.0
    for j, g in enumerate(gammas):
        for s in (1.0, -1.0):
            freq = (n + 1 - 2 * j) + s * b
            if abs(freq) < 1e-9:
                dc += g / 2.0
            else:
                osc_sum += abs(g) / 2.0 * 2.0 / abs(freq)
    if abs(dc.imag) > 1e-12 * (abs(dc.real) + 1.0):
        raise AssertionError("resonant component should be real")

    # truncation point: oscillatory tail prefac*osc_sum/T^(n+1) <= tol/2
    T = (2.0 * prefac * osc_sum / tol) ** (1.0 / (n + 1)) if osc_sum else 0.0
    T = max(T, float(2 * (n + 2)), 8.0)

    def integrand(t: np.ndarray) -> np.ndarray:
        return np.cos(b * t) * np.sinc(t / np.pi) ** (n + 1)

    max_freq = max(abs(b) + n + 1, 1.0)
    panels = max(64, int(T * max_freq / 4.0) + 1)
    if panels > max_panels:
        raise QuadratureError(f"tolerance {tol} needs more than {max_panels} panels")
    prev = _composite_gl(integrand, 0.0, T, panels)
    while True:
        panels *= 2
        if panels > max_panels:
            raise QuadratureError(f"tolerance {tol} not reached within {max_panels} panels")
        cur = _composite_gl(integrand, 0.0, T, panels)
        if prefac * abs(cur - prev) <= tol / 4.0:
            break
        prev = cur

    tail_dc = dc.real * T ** (-n) / n
    return prefac * (cur + tail_dc)
