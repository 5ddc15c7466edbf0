"""Exact arithmetic for the Euler-Frobenius triangle and its relatives.

The numbers A(n, k, rho) are defined by A(0, 0, rho) = 1 and

    A(n, k, rho) = (k + rho) A(n-1, k, rho) + (n - k + 1 - rho) A(n-1, k-1, rho)

with A(n, k, rho) = 0 for k outside {0, ..., n}.  rho = 1 gives the
classical Eulerian numbers (OEIS A173018), rho = 0 their unit shift, and
2^n A(n, k, 1/2) the type-B Eulerian numbers (OEIS A060187).  The row
polynomial P_n(x) = sum_k A(n, k, rho) x^k always satisfies P_n(1) = n!.

Everything in this module is exact: scalar values are `fractions.Fraction`
(any input accepted by the Fraction constructor works, including floats,
which convert exactly), and polynomials in rho are `RhoPoly`.  These exact
routines serve as the oracle for every floating-point layer elsewhere in
the package.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, floor
from typing import Iterable, Sequence, Union

from . import _powseries

Rational = Union[int, Fraction]

__all__ = [
    "RhoPoly",
    "EFTable",
    "ef_number",
    "ef_row",
    "ef_number_poly",
    "ef_row_poly",
    "ef_explicit",
    "type_b",
    "bernoulli_number",
    "euler_polynomial_value",
    "euler_number",
    "tangent_number",
    "geometric_moment",
    "benoumhani_poly",
    "eulerian_poly_at_i",
]


def as_fraction(x) -> Fraction:
    """Coerce to Fraction; floats convert to their exact binary value."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


@dataclass(frozen=True)
class RhoPoly:
    """Polynomial in the rounding parameter rho, exact coefficients.

    coeffs[i] is the coefficient of rho^i; trailing zeros are trimmed so
    two equal polynomials compare equal.
    """

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def from_coeffs(coeffs: Iterable) -> "RhoPoly":
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return RhoPoly(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __call__(self, rho) -> Fraction:
        rho = as_fraction(rho)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * rho + c
        return acc

    def __add__(self, other: "RhoPoly") -> "RhoPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        out = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            out[i] += c
        for i, c in enumerate(other.coeffs):
            out[i] += c
        return RhoPoly.from_coeffs(out)

    def __sub__(self, other: "RhoPoly") -> "RhoPoly":
        return self + (-other)

    def __neg__(self) -> "RhoPoly":
        return RhoPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> "RhoPoly":
        if isinstance(other, RhoPoly):
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs))
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
            return RhoPoly.from_coeffs(out)
        c = as_fraction(other)
        return RhoPoly.from_coeffs(c * x for x in self.coeffs)

    __rmul__ = __mul__

    def derivative(self) -> "RhoPoly":
        return RhoPoly.from_coeffs(i * c for i, c in enumerate(self.coeffs) if i)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
                continue
            var = "rho" if i == 1 else f"rho^{i}"
            if c == 1:
                term = var
            elif c == -1:
                term = f"-{var}"
            else:
                term = f"{c}*{var}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out


@dataclass(frozen=True)
class EFTable:
    """One triangle row: values[k] = A(n, k, rho) for k = 0..n."""

    n: int
    rho: Fraction
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.n + 1:
            raise ValueError("row length must be n + 1")


@lru_cache(maxsize=4096)
def _row(n: int, rho: Fraction) -> tuple[Fraction, ...]:
    # two-row rolling DP over the triangle recursion; O(n^2) exact ops
    row = [Fraction(1)]
    for m in range(1, n + 1):
        prev = row
        row = [Fraction(0)] * (m + 1)
        for k in range(m + 1):
            acc = Fraction(0)
            if k <= m - 1:
                acc += (k + rho) * prev[k]
            if 1 <= k:
                acc += (m - k + 1 - rho) * prev[k - 1]
            row[k] = acc
    return tuple(row)


def ef_number(n: int, k: int, rho) -> Fraction:
    """A(n, k, rho) via the triangle recursion; 0 outside 0 <= k <= n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if k < 0 or k > n:
        return Fraction(0)
    return _row(n, as_fraction(rho))[k]


def ef_row(n: int, rho) -> EFTable:
    """All A(n, k, rho) for k = 0..n in one dynamic-programming pass."""
    if n < 0:
        raise ValueError("n must be >= 0")
    r = as_fraction(rho)
    return EFTable(n=n, rho=r, values=_row(n, r))


@lru_cache(maxsize=256)
def _poly_row(n: int) -> tuple[RhoPoly, ...]:
    zero = RhoPoly(())
    row: list[RhoPoly] = [RhoPoly.from_coeffs([1])]
    for m in range(1, n + 1):
        prev = row
        row = []
        for k in range(m + 1):
            acc = zero
            if k <= m - 1:
                acc = acc + RhoPoly.from_coeffs([k, 1]) * prev[k]
            if 1 <= k:
                acc = acc + RhoPoly.from_coeffs([m - k + 1, -1]) * prev[k - 1]
            row.append(acc)
    return tuple(row)


def ef_number_poly(n: int, k: int) -> RhoPoly:
    """A(n, k, .) as an exact polynomial in rho."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if k < 0 or k > n:
        return RhoPoly(())
    return _poly_row(n)[k]


def ef_row_poly(n: int) -> list[RhoPoly]:
    """Row n of the triangle with every entry symbolic in rho."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return list(_poly_row(n))


def _pos_pow(x: Fraction, n: int) -> Fraction:
    # (x)_+^n, with the x <= 0 case defined as 0 for every n >= 0
    if x <= 0:
        return Fraction(0)
    return x**n


def ef_explicit(n: int, k: int, rho) -> Fraction:
    """A(n, k, rho) by the alternating binomial sum, rho in [0, 1] only.

    sum_j (-1)^j C(n+1, j) (k + rho - j)_+^n.  Must agree with ef_number
    exactly; the two routes cross-check each other in the test suite.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    r = as_fraction(rho)
    if not 0 <= r <= 1:
        raise ValueError("rho must lie in [0, 1]")
    acc = Fraction(0)
    for j in range(n + 2):
        term = _pos_pow(k + r - j, n)
        if term:
            acc += (-1) ** j * comb(n + 1, j) * term
    return acc


@lru_cache(maxsize=1024)
def _type_b_row(n: int) -> tuple[int, ...]:
    row = [1]
    for m in range(1, n + 1):
        prev = row
        row = [0] * (m + 1)
        for k in range(m + 1):
            acc = 0
            if k <= m - 1:
                acc += (2 * k + 1) * prev[k]
            if 1 <= k:
                acc += (2 * m - 2 * k + 1) * prev[k - 1]
            row[k] = acc
    return tuple(row)


def type_b(n: int, k: int) -> int:
    """Type-B Eulerian number B(n, k) = 2^n A(n, k, 1/2), by its own
    integer recursion B(n,k) = (2k+1) B(n-1,k) + (2n-2k+1) B(n-1,k-1)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if k < 0 or k > n:
        return 0
    return _type_b_row(n)[k]


_bernoulli_cache: list[Fraction] = []
_bernoulli_lock = threading.Lock()


def bernoulli_number(m: int) -> Fraction:
    """The m-th Bernoulli number (B_1 = -1/2 convention).

    Computed by exact power-series inversion of (e^t - 1)/t; the cache
    only ever grows and is safe for concurrent readers.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if m >= len(_bernoulli_cache):
        with _bernoulli_lock:
            if m >= len(_bernoulli_cache):
                order = max(m, 2 * len(_bernoulli_cache), 16)
                inv = _powseries.inverse(_powseries.expm1_over_z(order), order)
                values = [factorial(i) * c for i, c in enumerate(inv)]
                _bernoulli_cache[:] = values
    return _bernoulli_cache[m]


def euler_polynomial_value(n: int, rho) -> Fraction:
    """Euler polynomial E_n evaluated at rho: 2^(-n) sum_k A(n,k,rho) (-1)^k."""
    if n < 0:
        raise ValueError("n must be >= 0")
    row = _row(n, as_fraction(rho))
    alt = sum(v if k % 2 == 0 else -v for k, v in enumerate(row))
    return alt / Fraction(2**n)


def euler_number(n: int) -> int:
    """Euler (secant) number E_n (OEIS A000364 up to sign); 0 for odd n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    value = euler_polynomial_value(n, Fraction(1, 2)) * 2**n
    if value.denominator != 1:
        raise AssertionError("Euler number came out non-integer")
    return int(value)


def eulerian_poly_at_i(n: int) -> tuple[Fraction, Fraction]:
    """(real, imag) parts of sum_k A(n, k, 1) i^k, exact.

    Powers of i cycle with period 4, so no general complex tower is
    needed; this local Gaussian-rational evaluation feeds tangent_number.
    """
    row = _row(n, Fraction(1))
    re = Fraction(0)
    im = Fraction(0)
    for k, v in enumerate(row):
        r = k % 4
        if r == 0:
            re += v
        elif r == 1:
            im += v
        elif r == 2:
            re -= v
        else:
            im -= v
    return re, im


def tangent_number(n: int) -> int:
    """Tangent number T_n (OEIS A000182); 0 for even n.

    Extracted from the Gaussian-rational value of the Eulerian row
    polynomial at i, which equals 2^m i^m T_n for n = 2m + 1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n % 2 == 0:
        return 0
    m = (n - 1) // 2
    re, im = eulerian_poly_at_i(n)
    # divide by 2^m i^m: i^-m rotates by quarter turns
    r = m % 4
    if r == 0:
        num = re, im
    elif r == 1:
        num = im, -re
    elif r == 2:
        num = -re, -im
    else:
        num = -im, re
    if num[1] != 0:
        raise AssertionError("tangent extraction left an imaginary part")
    value = num[0] / Fraction(2**m)
    if value.denominator != 1:
        raise AssertionError("tangent number came out non-integer")
    return int(value)


def geometric_moment(n: int, p) -> Fraction:
    """n-th moment of a geometric(p) variable on {0, 1, 2, ...}.

    Equals (1-p)^(-n) * sum_k A(n, k, 0) p^k, exact.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    q = as_fraction(p)
    if not 0 < q < 1:
        raise ValueError("p must lie in (0, 1)")
    row = _row(n, Fraction(0))
    acc = Fraction(0)
    for k in reversed(range(n + 1)):
        acc = acc * q + row[k]
    return acc / (1 - q) ** n


def benoumhani_poly(m: int, n: int) -> list[Fraction]:
    """Coefficients of sum_k m^n A(n, k, 1/m) x^k (1+x)^(n-k), exact."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")
    row = _row(n, Fraction(1, m))
    scale = Fraction(m) ** n
    out = [Fraction(0)] * (n + 1)
    for k, a in enumerate(row):
        if not a:
            continue
        c = scale * a
        for j in range(n - k + 1):
            out[k + j] += c * comb(n - k, j)
    return out
