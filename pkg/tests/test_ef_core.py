"""Exact triangle values, identities, and special-number sequences.

Frozen rows come from the classical tables (Eulerian numbers A173018,
type-B A060187); derived expectations are recomputed in-test by an
independent oracle before being asserted.
"""

import random
from fractions import Fraction as F
from math import comb, factorial

import pytest

from eufro import (
    benoumhani_poly,
    bernoulli_number,
    ef_explicit,
    ef_number,
    ef_number_poly,
    ef_row,
    ef_row_poly,
    euler_number,
    euler_polynomial_value,
    geometric_moment,
    tangent_number,
    type_b,
)
from eufro.ef_core import RhoPoly
from eufro import _powseries

# rows n = 0..3 as coefficient lists in rho, lowest power first
SYMBOLIC_ROWS = [
    [[1]],
    [[0, 1], [1, -1]],
    [[0, 0, 1], [1, 2, -2], [1, -2, 1]],
    [[0, 0, 0, 1], [1, 3, 3, -3], [4, 0, -6, 3], [1, -3, 3, -1]],
]

EULERIAN_ROWS = [
    [1],
    [1],
    [1, 1],
    [1, 4, 1],
    [1, 11, 11, 1],
    [1, 26, 66, 26, 1],
    [1, 57, 302, 302, 57, 1],
    [1, 120, 1191, 2416, 1191, 120, 1],
]

TYPE_B_ROWS = [
    [1],
    [1, 1],
    [1, 6, 1],
    [1, 23, 23, 1],
    [1, 76, 230, 76, 1],
    [1, 237, 1682, 1682, 237, 1],
    [1, 722, 10543, 23548, 10543, 722, 1],
]

RHOS = [F(0), F(1, 7), F(1, 2), F(6, 7), F(1)]


def test_symbolic_rows_match_reference_table():
    for n, rows in enumerate(SYMBOLIC_ROWS):
        got = ef_row_poly(n)
        assert got == [RhoPoly.from_coeffs(c) for c in rows]


def test_eulerian_rows():
    for n, row in enumerate(EULERIAN_ROWS):
        for k, value in enumerate(row):
            assert ef_number(n, k, 1) == value
        if n >= 1:
            assert ef_number(n, n, 1) == 0


def test_type_b_rows_and_bridge():
    for n, row in enumerate(TYPE_B_ROWS):
        for k, value in enumerate(row):
            assert type_b(n, k) == value
    for n in range(31):
        for k in range(n + 1):
            assert type_b(n, k) == 2**n * ef_number(n, k, F(1, 2))


def test_ef_number_examples():
    assert ef_number(2, 1, F(1, 2)) == F(3, 2)
    assert ef_number(4, 1, 1) == 11
    assert ef_number(3, 5, F(1, 3)) == 0
    assert ef_number(3, -1, F(1, 3)) == 0
    assert ef_number(3, 1, F(1, 2)) == F(23, 8)  # B(3,1) = 23 over 2^3


def test_ef_number_poly_examples():
    assert ef_number_poly(1, 0) == RhoPoly.from_coeffs([0, 1])
    assert ef_number_poly(3, 2) == RhoPoly.from_coeffs([4, 0, -6, 3])
    assert ef_number_poly(2, 2) == RhoPoly.from_coeffs([1, -2, 1])
    # evaluating the polynomial agrees with the numeric recursion
    for n in range(8):
        for k in range(n + 1):
            poly = ef_number_poly(n, k)
            for rho in RHOS:
                assert poly(rho) == ef_number(n, k, rho)


def test_ef_number_poly_leading_coefficient():
    for n in range(1, 10):
        for k in range(n + 1):
            coeffs = ef_number_poly(n, k).coeffs
            assert len(coeffs) == n + 1
            assert coeffs[-1] == (-1) ** k * comb(n, k)


def test_ef_row_examples():
    assert ef_row(5, 1).values == (1, 26, 66, 26, 1, 0)
    assert ef_row(0, F(2, 7)).values == (1,)
    assert ef_row(4, F(1, 2)).values == (
        F(1, 16),
        F(76, 16),
        F(230, 16),
        F(76, 16),
        F(1, 16),
    )


def test_row_endpoints_and_nonnegativity():
    for n in range(12):
        for rho in RHOS:
            values = ef_row(n, rho).values
            assert values[0] == rho**n
            assert values[-1] == (1 - rho) ** n
            assert all(v >= 0 for v in values)


def test_row_sums_up_to_60():
    rnd = random.Random(101)
    for n in range(61):
        rho = F(rnd.randrange(-200, 301), rnd.randrange(1, 100))
        assert sum(ef_row(n, rho).values) == factorial(n)


def test_symmetry_and_shift():
    for n in range(26):
        for rho in RHOS:
            row = ef_row(n, rho).values
            mirrored = ef_row(n, 1 - rho).values
            assert row == tuple(reversed(mirrored))
    for n in range(1, 26):
        for k in range(-1, n + 2):
            assert ef_number(n, k + 1, 0) == ef_number(n, k, 1)


def test_explicit_formula_matches_recursion():
    for n in range(1, 26):
        for rho in RHOS:
            for k in range(n + 1):
                assert ef_explicit(n, k, rho) == ef_number(n, k, rho)


def test_explicit_formula_examples_and_domain():
    assert ef_explicit(2, 1, F(1, 2)) == ef_number(2, 1, F(1, 2)) == F(3, 2)
    assert ef_explicit(6, 2, 1) == 302
    assert ef_explicit(3, 0, F(1, 4)) == F(1, 64)
    with pytest.raises(ValueError):
        ef_explicit(3, 1, F(3, 2))
    with pytest.raises(ValueError):
        ef_explicit(3, 1, F(-1, 2))
    with pytest.raises(ValueError):
        ef_explicit(0, 0, F(1, 2))


def test_derivative_identity():
    # d/drho A(n,k,.) = n (A(n-1,k,.) - A(n-1,k-1,.)) as exact polynomials
    for n in range(1, 16):
        for k in range(n + 1):
            lhs = ef_number_poly(n, k).derivative()
            rhs = (ef_number_poly(n - 1, k) - ef_number_poly(n - 1, k - 1)) * n
            assert lhs == rhs


def test_binomial_expansion_in_rho():
    # P_n(x) = sum_i C(n,i) rho^i (1-x)^i P_{n-i}(x at rho=0), bivariate
    for n in range(16):
        rows0 = [ef_row(m, 0).values for m in range(n + 1)]
        for k in range(n + 1):
            coeffs = [F(0)] * (n + 1)
            for i in range(n + 1):
                acc = F(0)
                for l in range(min(i, k) + 1):
                    j = k - l
                    if j <= n - i:
                        acc += comb(i, l) * (-1) ** l * rows0[n - i][j]
                coeffs[i] = comb(n, i) * acc
            assert RhoPoly.from_coeffs(coeffs) == ef_number_poly(n, k)


def test_generating_function_coefficients():
    # coefficient of z^n/n! in (1-x) e^{rho z (1-x)} / (1 - x e^{z(1-x)})
    rnd = random.Random(7)
    for n in range(1, 11):
        x = F(rnd.randrange(1, 59), 59)  # strictly inside (0, 1)
        rho = F(rnd.randrange(0, 101), 100)
        order = n + 2
        one_minus_x = 1 - x
        numer = _powseries.scale(
            _powseries.exp_linear(rho * one_minus_x, order), one_minus_x
        )
        exp_z = _powseries.exp_linear(one_minus_x, order)
        denom = [1 - x * exp_z[0]] + [-x * c for c in exp_z[1:]]
        series = _powseries.mul(numer, _powseries.inverse(denom, order), order)
        row = ef_row(n, rho).values
        poly_at_x = sum(c * x**k for k, c in enumerate(row))
        assert series[n] * factorial(n) == poly_at_x


def _bernoulli_akiyama_tanigawa(n: int) -> list[F]:
    # independent oracle for the Bernoulli cache (B1 = -1/2 convention)
    a = [F(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        a[m] = F(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    # Akiyama-Tanigawa yields B1 = +1/2; flip to the series convention
    if n >= 1:
        out[1] = -out[1]
    return out


def test_bernoulli_numbers():
    assert bernoulli_number(2) == F(1, 6)
    assert bernoulli_number(3) == 0
    assert bernoulli_number(4) == F(-1, 30)
    oracle = _bernoulli_akiyama_tanigawa(30)
    for m in range(31):
        assert bernoulli_number(m) == oracle[m]


def test_euler_polynomial_value():
    assert euler_polynomial_value(1, F(3, 4)) == F(1, 4)
    for rho in RHOS:
        assert euler_polynomial_value(0, rho) == 1
    assert euler_polynomial_value(2, F(1, 2)) == F(-1, 4)


def test_euler_numbers_two_routes():
    assert [euler_number(n) for n in (0, 2, 4, 6)] == [1, -1, 5, -61]
    assert all(euler_number(n) == 0 for n in (1, 3, 5, 7, 9))
    # independent oracle: Taylor coefficients of 1/cosh
    order = 14
    sech = _powseries.inverse(_powseries.cosh_series(order), order)
    for n in range(order + 1):
        assert euler_number(n) == factorial(n) * sech[n]


def test_tangent_numbers_two_routes():
    assert [tangent_number(n) for n in (1, 3, 5, 7)] == [1, 2, 16, 272]
    assert tangent_number(4) == 0
    # cross-check against the Bernoulli-number expression for T_{2m-1}
    for m in range(1, 8):
        via_b = (
            (-1) ** (m - 1)
            * F(2 ** (2 * m) * (2 ** (2 * m) - 1), 2 * m)
            * bernoulli_number(2 * m)
        )
        assert tangent_number(2 * m - 1) == via_b


def test_geometric_moment():
    assert [geometric_moment(n, F(1, 2)) for n in (1, 2, 3, 4)] == [1, 3, 13, 75]
    assert geometric_moment(1, F(1, 3)) == F(1, 2)
    # brute-force series: sum j^n (1-p) p^j converges geometrically
    p = F(1, 3)
    for n in (1, 2, 3):
        partial = sum(F(j) ** n * (1 - p) * p**j for j in range(120))
        assert abs(partial - geometric_moment(n, p)) < F(1, 10**20)
    with pytest.raises(ValueError):
        geometric_moment(2, F(0))
    with pytest.raises(ValueError):
        geometric_moment(2, 1)


def test_benoumhani_poly():
    assert benoumhani_poly(1, 2) == [1, 3, 2]
    assert benoumhani_poly(2, 1) == [1, 2]
    assert benoumhani_poly(5, 0) == [1]
    # substitution oracle: F(x) = m^n (1+x)^n P_n(x/(1+x)) at rho = 1/m
    rnd = random.Random(3)
    for m in (1, 2, 3, 5):
        for n in range(6):
            coeffs = benoumhani_poly(m, n)
            x = F(rnd.randrange(1, 40), 13)
            lhs = sum(c * x**k for k, c in enumerate(coeffs))
            row = ef_row(n, F(1, m)).values
            u = x / (1 + x)
            rhs = F(m) ** n * (1 + x) ** n * sum(
                c * u**k for k, c in enumerate(row)
            )
            assert lhs == rhs


def test_rho_poly_rendering():
    assert str(ef_number_poly(2, 1)) == "1 + 2*rho - 2*rho^2"
    assert str(ef_number_poly(1, 0)) == "rho"
    assert str(RhoPoly.from_coeffs([])) == "0"
