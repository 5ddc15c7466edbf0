"""Cardinal B-splines, exponential splines, and interpolation solvability.

The density f_n of a sum of n uniforms is the cardinal B-spline of degree
n - 1 with knots at the integers.  The exponential spline

    Phi_n(x; t) = sum_k t^k f_{n+1}(x - k)

is the unique degree-n cardinal spline (up to scale) with
Phi(x + 1) = t Phi(x); on [0, 1] it collapses to a single row polynomial
evaluation, which is the second of the two evaluation modes offered here.

Row polynomials P_n(x) = sum_k A(n, k, rho) x^k have only real, negative,
simple roots for rho in (0, 1], interlacing level by level; that
structure drives the bisection root finder, the Bernoulli-convolution
factorization of the rounded-sum law, and the solvability test for
periodic cardinal interpolation at the points k + lambda.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, floor

import mpmath

from .ef_core import as_fraction, ef_row
from .uniform_sum import irwin_hall_pdf

__all__ = [
    "RootList",
    "BernoulliFactors",
    "RootIsolationError",
    "bspline_eval",
    "exp_spline",
    "ef_roots",
    "bernoulli_factors",
    "cardinal_solvable",
]


def bspline_eval(n: int, x):
    """B-spline of degree n-1 at x, i.e. the density f_n(x).

    Exact input (int/Fraction) gives a Fraction, float gives a float.
    """
    if isinstance(x, float):
        return float(irwin_hall_pdf(n, as_fraction(x)))
    return irwin_hall_pdf(n, x)


def exp_spline(n: int, x: float, t: float, mode: str = "direct_sum") -> float:
    """Exponential spline Phi_n(x; t) = sum_k t^k f_{n+1}(x - k), t != 0.

    mode 'direct_sum' adds the finitely many nonzero translates; mode
    'ef_formula' reduces x to [0, 1) by quasi-periodicity and evaluates
    t^(floor(x)) t^(-n)/n! P_n(t) at the row with rho = 1 - {x}.  The two
    agree to roundoff and cross-check each other in the tests.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if t == 0:
        raise ValueError("t must be nonzero")
    if mode == "direct_sum":
        xf = as_fraction(x)
        acc = 0.0
        # f_{n+1}(x - k) != 0 only for 0 < x - k < n + 1
        for k in range(floor(xf) - n, floor(xf) + 1):
            v = xf - k
            if 0 < v < n + 1:
                acc += t**k * float(irwin_hall_pdf(n + 1, v))
        return acc
    if mode == "ef_formula":
        xf = as_fraction(x)
        shift = floor(xf)
        frac = xf - shift
        row = ef_row(n, 1 - frac).values
        poly = 0.0
        for c in reversed(row):
            poly = poly * t + float(c)
        return t**shift * t ** (-n) / factorial(n) * poly
    raise ValueError(f"unknown mode {mode!r}")


class RootIsolationError(RuntimeError):
    """A guaranteed sign change was not found; indicates an internal
    inconsistency rather than a user error."""


@dataclass(frozen=True)
class RootList:
    """Real roots of a row polynomial, strictly decreasing (all negative)."""

    n: int
    rho: Fraction
    roots: tuple[float, ...]


def _polyval(coeffs: list[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _polyder(coeffs: list[float]) -> list[float]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def _bisect_root(coeffs: list[float], lo: float, hi: float, tol: float) -> float:
    flo = _polyval(coeffs, lo)
    fhi = _polyval(coeffs, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise RootIsolationError(
            f"no sign change on [{lo}, {hi}]; interlacing violated"
        )
    while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
        mid = (lo + hi) / 2.0
        if mid == lo or mid == hi:
            break
        fmid = _polyval(coeffs, mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    root = (lo + hi) / 2.0
    # Newton polish; simple roots make this safe
    deriv = _polyder(coeffs)
    for _ in range(4):
        d = _polyval(deriv, root)
        if d == 0.0:
            break
        step = _polyval(coeffs, root) / d
        new = root - step
        if not lo - tol <= new <= hi + tol:
            break
        root = new
    return root


def ef_roots(n: int, rho, tol: float = 1e-12) -> RootList:
    """All real roots of the row polynomial P_n for rho in (0, 1].

    Found level by level: the roots of P_{m-1} bracket sign changes of
    P_m (with 0 above and a Cauchy bound below), so plain bisection is
    certified.  rho in (0, 1) gives n roots; rho = 1 drops the degree and
    gives n - 1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    r = as_fraction(rho)
    if not 0 < r <= 1:
        raise ValueError("rho must lie in (0, 1]")
    roots: list[float] = []  # descending
    for m in range(1, n + 1):
        coeffs = [float(c) for c in ef_row(m, r).values]
        while coeffs and coeffs[-1] == 0.0:
            coeffs.pop()
        degree = len(coeffs) - 1
        if degree == 0:
            new_roots: list[float] = []
        else:
            lead = abs(coeffs[-1])
            cauchy = -(1.0 + max(abs(c) for c in coeffs[:-1]) / lead)
            uppers = [0.0] + roots
            lowers = roots + [min(cauchy, (roots[-1] if roots else 0.0) - 1.0)]
            new_roots = [
                _bisect_root(coeffs, lo, hi, tol)
                for lo, hi in zip(lowers, uppers)
            ]
            if len(new_roots) != degree:
                raise RootIsolationError(
                    f"expected {degree} roots at level {m}, found {len(new_roots)}"
                )
        roots = sorted(new_roots, reverse=True)
    return RootList(n=n, rho=r, roots=tuple(roots))


@dataclass(frozen=True)
class BernoulliFactors:
    """Success probabilities p_j = 1/(1 + lambda_j) from the row roots
    -lambda_j; convolving independent Bernoulli(p_j) reproduces the
    rounded-sum law."""

    probs: tuple[float, ...]

    def convolved_pmf(self) -> list[float]:
        pmf = [1.0]
        for p in self.probs:
            nxt = [0.0] * (len(pmf) + 1)
            for i, w in enumerate(pmf):
                nxt[i] += w * (1.0 - p)
                nxt[i + 1] += w * p
            pmf = nxt
        return pmf


def bernoulli_factors(n: int, rho) -> BernoulliFactors:
    """Bernoulli factorization of the rounded-sum law for rho in (0, 1]."""
    root_list = ef_roots(n, rho)
    probs = tuple(1.0 / (1.0 - root) for root in root_list.roots)
    return BernoulliFactors(probs=probs)


def _row_poly_at_i(coeffs) -> tuple[Fraction, Fraction]:
    re = Fraction(0)
    im = Fraction(0)
    for k, c in enumerate(coeffs):
        r = k % 4
        if r == 0:
            re += c
        elif r == 1:
            im += c
        elif r == 2:
            re -= c
        else:
            im -= c
    return re, im


def cardinal_solvable(n: int, lam, N: int) -> tuple[bool, str]:
    """Unique solvability of periodic cardinal interpolation at k + lambda.

    Checked two ways that must agree: the closed classification (always
    solvable for odd N; for even N it fails exactly when n is even with
    lambda in {0, 1}, or n is odd with lambda = 1/2), and evaluation of
    the row polynomial with rho = 1 - lambda at all N-th roots of unity
    (solvable iff none vanishes).  Points +-1 and +-i are evaluated in
    exact rational/Gaussian-rational arithmetic; the rest use 30-digit
    complex evaluation with margin 1e-12, falling back to the
    classification if a value lands inside the margin.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if N < 1:
        raise ValueError("N must be >= 1")
    lam_f = as_fraction(lam)
    if not 0 <= lam_f <= 1:
        raise ValueError("lambda must lie in [0, 1]")

    if N % 2 == 1:
        classified, reason = True, "N odd: always solvable"
    elif n % 2 == 0 and lam_f in (0, 1):
        classified, reason = False, "N even, n even, lambda in {0, 1}"
    elif n % 2 == 1 and lam_f == Fraction(1, 2):
        classified, reason = False, "N even, n odd, lambda = 1/2"
    else:
        classified, reason = True, "no root of unity is a polynomial zero"

    coeffs = ef_row(n, 1 - lam_f).values
    scale = float(factorial(n))
    numeric = True
    for j in range(1, N + 1):
        angle = Fraction(2 * j, N)  # in units of pi
        angle -= 2 * floor(angle / 2)
        if angle == 0:
            continue  # value is n!, never zero
        if angle == 1:  # omega = -1: exact alternating sum
            alt = sum(c if k % 2 == 0 else -c for k, c in enumerate(coeffs))
            if alt == 0:
                numeric = False
            continue
        if angle in (Fraction(1, 2), Fraction(3, 2)):  # omega = +-i
            re, im = _row_poly_at_i(coeffs)
            if re == 0 and im == 0:
                numeric = False
            continue
        with mpmath.workdps(30):
            omega = mpmath.expjpi(mpmath.mpf(angle.numerator) / angle.denominator)
            value = mpmath.polyval([mpmath.mpf(c.numerator) / c.denominator
                                    for c in reversed(coeffs)], omega)
            if abs(value) < 1e-12 * scale:
                # inside the margin: defer to the classification
                numeric = numeric and classified
    if numeric != classified:
        raise AssertionError(
            "root-of-unity evaluation contradicts the closed classification"
        )
    return classified, reason
