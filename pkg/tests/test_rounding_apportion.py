"""Rounding, seeded simulations, discrepancy laws, and apportionment."""

import json
import math
import random
from fractions import Fraction as F
from math import factorial

import numpy as np
import pytest

from eufro import (
    ApportionmentError,
    ApportionmentTieError,
    DiscrepancyExperiment,
    RngStream,
    apportion_divisor,
    apportion_droop,
    apportion_hare,
    discrepancy_exact_pmf,
    ef_distribution,
    ef_pmf,
    hare_bias_density,
    rho_round,
    sample_simplex,
    simulate_discrepancy,
    simulate_rounded_sum,
    simulate_seat_bias,
    simulate_symmetric,
)
from eufro.rounding_apportion import (
    discrepancy_records,
    experiment_from_config,
)


def test_rho_round_examples():
    assert rho_round(2.3, 1) == 2
    assert rho_round(2.3, 0) == 3
    assert rho_round(2.5, 0.5) == 3  # ties round up under floor(x + 1/2)
    assert rho_round(F(5, 2), F(1, 2)) == 3


def test_rho_round_properties():
    rnd = random.Random(4)
    for _ in range(500):
        x = rnd.uniform(-50, 50)
        rho = rnd.uniform(-2, 3)
        assert rho_round(x + 1, rho) == rho_round(x, rho) + 1
        if abs(x - round(x)) > 1e-9:
            assert rho_round(x, 1) == math.floor(x)
            assert rho_round(x, 0) == math.ceil(x)


def test_sample_simplex_basic():
    rng = RngStream(7)
    for n in (2, 3, 6):
        p = sample_simplex(n, rng)
        assert len(p) == n
        assert all(v >= 0 for v in p)
        assert abs(sum(p) - 1.0) < 1e-12


def test_sample_simplex_statistics():
    gen = RngStream(21).generator()
    m = 10**5
    # n = 2: first coordinate is uniform on (0, 1); KS statistic is small
    draws = np.sort(np.array([sample_simplex(2, gen)[0] for _ in range(2000)]))
    grid = (np.arange(len(draws)) + 1) / len(draws)
    ks = np.max(np.abs(draws - grid))
    assert ks < 0.04
    # exchangeability: each coordinate has mean 1/n
    from eufro.rounding_apportion import _simplex_matrix

    p = _simplex_matrix(5, m, gen)
    se = math.sqrt(1 / 12) / math.sqrt(m)  # loose bound on coordinate stderr
    assert np.all(np.abs(p.mean(axis=0) - 0.2) < 6 * se)


def test_simulate_rounded_sum_against_exact():
    pmf = simulate_rounded_sum(5, 0.3, 10**5, RngStream(42))
    exact = ef_distribution(5, F(3, 10)).pmf
    assert pmf.tv_distance(exact) < 0.01
    mean_se = math.sqrt(6 / 12) / math.sqrt(10**5)
    assert abs(float(pmf.mean()) - 2.7) < 4 * mean_se


def test_simulate_rounded_sum_degenerate():
    pmf = simulate_rounded_sum(1, 1.0, 1000, RngStream(3))
    assert dict(pmf.items()) == {0: F(1)}


def test_simulate_rounded_sum_mean_variance():
    pmf = simulate_rounded_sum(2, 0.0, 10**5, RngStream(8))
    se = math.sqrt(3 / 12) / math.sqrt(10**5)
    assert abs(float(pmf.mean()) - 1.5) < 4 * se + 0.01


def test_simulate_symmetric():
    pmf = simulate_symmetric(2, 10**5, RngStream(9))
    exact = ef_distribution(2, F(3, 2)).pmf
    assert dict(exact.items()) == {-1: F(1, 8), 0: F(3, 4), 1: F(1, 8)}
    assert pmf.tv_distance(exact) < 0.01
    # n = 3: symmetric about 0 within sampling error
    pmf3 = simulate_symmetric(3, 10**5, RngStream(10))
    for k in pmf3.support:
        assert abs(float(pmf3.prob(k)) - float(pmf3.prob(-k))) < 0.02
    # n = 1: a centered uniform always rounds to 0
    pmf1 = simulate_symmetric(1, 1000, RngStream(11))
    assert dict(pmf1.items()) == {0: F(1)}


def test_reproducibility_bit_identical():
    a = simulate_rounded_sum(4, 0.25, 50_000, RngStream(123), streams=3)
    b = simulate_rounded_sum(4, 0.25, 50_000, RngStream(123), streams=3)
    assert a == b
    c = simulate_rounded_sum(4, 0.25, 50_000, RngStream(124), streams=3)
    assert a != c
    d = simulate_rounded_sum(4, 0.25, 50_000, RngStream(123), streams=2)
    assert a != d  # stream layout is part of the determinism contract


def test_discrepancy_exact_pmf():
    pmf = discrepancy_exact_pmf(3, 0.5, 0.0)
    assert dict(pmf.items()) == {-1: F(1, 8), 0: F(3, 4), 1: F(1, 8)}
    # mean formula n(1/2 - rho) + gamma
    for n in (2, 3, 5):
        for rho, gamma in ((0.5, 0.0), (0.25, 1.0), (0.75, -0.5)):
            pmf = discrepancy_exact_pmf(n, rho, gamma)
            expected = F(n) * (F(1, 2) - F(rho)) + F(gamma)
            assert pmf.mean() == expected
    # exactness: with integral n*rho - gamma the denominators divide (n-1)!;
    # a fractional part p/q contributes at most a further q^(n-1)
    for n in range(2, 7):
        pmf = discrepancy_exact_pmf(n, 0.5, 0.0 if n % 2 == 0 else 0.5)
        for _, w in pmf.items():
            assert factorial(n - 1) % w.denominator == 0
        pmf = discrepancy_exact_pmf(n, 0.5, 0.0)
        for _, w in pmf.items():
            assert (2 ** (n - 1) * factorial(n - 1)) % w.denominator == 0


def test_simulate_discrepancy_matches_limit_law():
    exp = DiscrepancyExperiment(n=4, rho=0.5, gamma=0.0, N=10**4, samples=10**5, seed=5)
    res = simulate_discrepancy(exp)
    # P(no discrepancy) tends to A(3,2,0)/3! = 4/6
    assert abs(float(res.pmf.prob(0)) - 4 / 6) < 0.01
    exp3 = DiscrepancyExperiment(n=3, rho=0.5, gamma=0.0, N=10**4, samples=10**5, seed=6)
    res3 = simulate_discrepancy(exp3)
    assert abs(res3.variance - 3 / 12) < 0.01
    # unbiasing choice gamma = n (rho - 1/2)
    exp_u = DiscrepancyExperiment(
        n=4, rho=0.3, gamma=4 * (0.3 - 0.5), N=10**4, samples=10**5, seed=7
    )
    assert abs(simulate_discrepancy(exp_u).mean) < 0.01


def test_experiment_config_and_records(tmp_path):
    config = {"n": 3, "rho": 0.5, "gamma": 0.0, "N": 1000, "samples": 20000, "seed": 1}
    path = tmp_path / "exp.json"
    path.write_text(json.dumps(config))
    exp = experiment_from_config(json.loads(path.read_text()))
    assert exp.n == 3 and exp.N == 1000
    rows = discrepancy_records(exp)
    assert {r["k"] for r in rows} >= {-1, 0, 1}
    total_emp = sum(r["empirical"] for r in rows)
    assert abs(total_emp - 1.0) < 1e-12
    for r in rows:
        assert set(r) == {"k", "empirical", "theoretical", "stderr"}
    with pytest.raises(ValueError):
        experiment_from_config({"n": 3, "rho": 0.5, "N": 10, "bogus": 1})


# --- apportionment ------------------------------------------------------------


def test_apportion_divisor_examples():
    assert apportion_divisor([5, 3, 1], 3, 1).seats == (2, 1, 0)
    assert apportion_divisor([7.0], 5, F(1, 2)).seats == (5,)
    with pytest.raises(ApportionmentTieError) as info:
        apportion_divisor([6, 6], 3, 1)
    assert info.value.parties == [0, 1]


def test_apportion_divisor_rho_variants():
    # Sainte-Lague: quotients v/1, v/3, v/5, ... (hand-checked top ten)
    assert apportion_divisor([53, 24, 23], 10, F(1, 2)).seats == (6, 2, 2)
    assert apportion_divisor([10, 6, 2], 8, F(1, 2)).seats == (4, 3, 1)
    # ceiling rounding: every party is seated first
    assert apportion_divisor([9, 1], 3, 0).seats == (2, 1)
    with pytest.raises(ApportionmentError):
        apportion_divisor([9, 1, 1], 2, 0)


def test_apportion_divisor_homogeneous():
    base = apportion_divisor([5, 3, 1], 3, 1).seats
    for lam in (10, F(1, 3), 2.5):
        scaled = [lam * v for v in (5, 3, 1)]
        assert apportion_divisor(scaled, 3, 1).seats == base


def test_apportion_divisor_n_zero():
    assert apportion_divisor([4, 2], 0, F(1, 2)).seats == (0, 0)


def test_apportion_hare():
    assert apportion_hare([0.5, 0.3, 0.2], 7).seats == (4, 2, 1)
    assert apportion_hare([3, 3, 3, 3], 8).seats == (2, 2, 2, 2)
    assert apportion_hare([2, 1], 2).seats == (1, 1)
    with pytest.raises(ApportionmentTieError):
        apportion_hare([1, 1], 3)


def test_apportion_hare_quota_property():
    # seats never differ from the exact quota by 1 or more
    rnd = random.Random(13)
    for _ in range(50):
        votes = [F(rnd.randrange(1, 1000)) for _ in range(rnd.randrange(2, 7))]
        N = rnd.randrange(1, 30)
        try:
            outcome = apportion_hare(votes, N)
        except ApportionmentTieError:
            continue
        total = sum(votes)
        for v, s in zip(votes, outcome.seats):
            assert abs(s - N * v / total) < 1


def test_apportion_droop():
    out = apportion_droop([0.5, 0.3, 0.2], 7)
    assert out.seats == (4, 2, 1)
    assert sum(out.seats) == 7
    single = apportion_droop([9], 4)
    assert single.seats == (4,)
    with pytest.raises(ApportionmentTieError):
        apportion_droop([5, 5], 3)


def test_apportion_droop_matches_breakpoint_scan():
    # oracle: exhaustive scan over a fine rho grid plus the breakpoints
    rnd = random.Random(77)
    for _ in range(40):
        votes = [F(rnd.randrange(1, 500)) for _ in range(rnd.randrange(2, 6))]
        N = rnd.randrange(1, 25)
        total = sum(votes)
        quotas = [(N + 1) * v / total for v in votes]
        try:
            out = apportion_droop(votes, N)
        except ApportionmentError:
            continue
        assert sum(out.seats) == N
        rho = F(out.rho).limit_denominator(10**9)
        assert tuple(math.floor(q + 1 - rho) for q in quotas) == out.seats


def test_apportion_validation():
    with pytest.raises(ValueError):
        apportion_hare([], 3)
    with pytest.raises(ValueError):
        apportion_hare([1, -2], 3)
    with pytest.raises(ValueError):
        apportion_divisor([1, 2], 3, F(3, 2))


# --- seat bias ----------------------------------------------------------------


def test_hare_bias_density_examples():
    assert hare_bias_density(3, 0) == 1
    for x in (F(7, 6), F(-9, 8), 2, -3):
        assert hare_bias_density(3, x) == 0
    for n in (3, 4, 5):
        x = F(7, 13)
        total = sum(hare_bias_density(n, x + i) for i in range(-4, 5))
        assert total == 1


def test_hare_bias_density_piecewise_values():
    # n = 3: flat top 1 on [-1/3, 1/3], linear shoulders 2 -+ 3|x|
    assert hare_bias_density(3, F(1, 4)) == 1
    assert hare_bias_density(3, F(1, 2)) == F(1, 2)
    assert hare_bias_density(3, F(-63, 100)) == 2 - 3 * F(63, 100)


def test_simulate_seat_bias_hare_and_droop():
    rng = RngStream(2024)
    for method in ("hare", "droop"):
        records = simulate_seat_bias(3, 0.37, method, [2001], 30_000, rng)
        (rec,) = records
        assert rec["N"] == 2001
        total = sum(r["empirical"] for r in rec["rows"])
        assert abs(total - 1.0) < 1e-12
        for row in rec["rows"]:
            if row["empirical"] > 0.01:
                assert abs(row["empirical"] - row["theoretical"]) < 0.03


def test_simulate_seat_bias_validation():
    with pytest.raises(ValueError):
        simulate_seat_bias(2, 0.4, "hare", [100], 10, RngStream(1))
    with pytest.raises(ValueError):
        simulate_seat_bias(3, 1.4, "hare", [100], 10, RngStream(1))
    with pytest.raises(ValueError):
        simulate_seat_bias(3, 0.4, "dhondt", [100], 10, RngStream(1))
