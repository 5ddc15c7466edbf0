"""Truncated power series with exact rational coefficients.

A series is a plain list of Fractions indexed by power.  Every operation
truncates at the requested order (inclusive), so results have length
``order + 1``.  These helpers back the Bernoulli/Euler number machinery
and the generating-function identity checks; nothing here touches floats.
"""

from fractions import Fraction
from math import factorial


def mul(a: list[Fraction], b: list[Fraction], order: int) -> list[Fraction]:
    """Cauchy product of two series, truncated at `order`."""
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if not ai:
            continue
        for j, bj in enumerate(b[: order + 1 - i]):
            if bj:
                out[i + j] += ai * bj
    return out


def inverse(a: list[Fraction], order: int) -> list[Fraction]:
    """Multiplicative inverse of a series with a[0] != 0."""
    if not a or a[0] == 0:
        raise ZeroDivisionError("series has no inverse: zero constant term")
    inv0 = 1 / Fraction(a[0])
    out = [inv0] + [Fraction(0)] * order
    for m in range(1, order + 1):
        acc = Fraction(0)
        for j in range(1, min(m, len(a) - 1) + 1):
            if a[j]:
                acc += a[j] * out[m - j]
        out[m] = -inv0 * acc
    return out


def scale(a: list[Fraction], c: Fraction) -> list[Fraction]:
    return [c * x for x in a]


def add(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    pad = lambda s: list(s) + [Fraction(0)] * (n - len(s))
    return [x + y for x, y in zip(pad(a), pad(b))]


def exp_linear(c: Fraction, order: int) -> list[Fraction]:
    """Series of exp(c*z): coefficients c^m / m!."""
    out = [Fraction(1)]
    for m in range(1, order + 1):
        out.append(out[-1] * c / m)
    return out


def expm1_over_z(order: int) -> list[Fraction]:
    """Series of (e^z - 1)/z: coefficients 1/(m+1)!."""
    return [Fraction(1, factorial(m + 1)) for m in range(order + 1)]


def cosh_series(order: int) -> list[Fraction]:
    """Series of cosh z truncated at `order`."""
    out = [Fraction(0)] * (order + 1)
    for m in range(0, order + 1, 2):
        out[m] = Fraction(1, factorial(m))
    return out
