"""rho-rounding, seeded Monte Carlo experiments, and apportionment methods.

rho-rounding maps x to floor(x + 1 - rho): rho = 1 is the floor, rho = 0
the ceiling, rho = 1/2 standard rounding.  Rounding a sum of n uniforms
this way lands exactly on the normalized triangle law from `uniform_sum`,
and the same mechanism drives two applications implemented here:

* the discrepancy sum_i round((N + gamma) p_i) - N for random proportions
  p on the simplex, whose large-N law is the rounded-sum law with
  parameters (n - 1, n*rho - gamma), and
* proportional-election apportionment (divisor methods parametrized by
  rho, the greatest-remainder/Hare method, and Droop's quota method),
  including the asymptotic seat-bias density for party 1.

All simulations are reproducible: an RngStream is a (seed, stream_id)
pair, work can be fanned out across stream ids, and merged counts do not
depend on execution order.  Empirical pmfs are returned as exact
count/total rationals so that reproducibility checks are bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Literal, Sequence

import numpy as np

from .ef_core import as_fraction, ef_number
from .uniform_sum import IntPmf, ef_distribution, ef_pmf, irwin_hall_cdf

__all__ = [
    "RngStream",
    "DiscrepancyExperiment",
    "DiscrepancyResult",
    "ApportionmentError",
    "ApportionmentTieError",
    "ApportionmentOutcome",
    "METHOD_RHO_ALIASES",
    "rho_round",
    "sample_simplex",
    "simulate_rounded_sum",
    "simulate_symmetric",
    "discrepancy_exact_pmf",
    "simulate_discrepancy",
    "apportion_divisor",
    "apportion_hare",
    "apportion_droop",
    "hare_bias_density",
    "simulate_seat_bias",
    "experiment_from_config",
    "discrepancy_records",
]

# rho values for the classical divisor methods.  Note the tension baked
# into the naming: d'Hondt is listed here with rho = 0 (ceiling rounding)
# following the convention that pairs it with Jefferson in the
# divisor-sequence picture, while the classical description of d'Hondt
# rounds quotients *down* (rho = 1).  The table is data, not hard-coded
# behavior, so callers can remap.
METHOD_RHO_ALIASES: dict[str, float] = {
    "dhondt": 0.0,
    "jefferson": 0.0,
    "sainte-lague": 0.5,
    "webster": 0.5,
    "floor": 1.0,
    "ceiling": 0.0,
}


@dataclass(frozen=True)
class RngStream:
    """Reproducible uniform source: (seed, stream_id) -> PCG64 generator.

    Identical pairs give identical sequences; distinct stream ids give
    statistically independent streams suitable for parallel fan-out.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, stream_id: int) -> "RngStream":
        return RngStream(seed=self.seed, stream_id=stream_id)


def rho_round(x, rho) -> int:
    """floor(x + 1 - rho); rho may be any real number."""
    if isinstance(x, Fraction) or isinstance(rho, Fraction):
        return floor(as_fraction(x) + 1 - as_fraction(rho))
    return floor(x + 1.0 - rho)


def sample_simplex(n: int, rng: RngStream | np.random.Generator) -> list[float]:
    """One point uniform on {p >= 0, sum p = 1} via spacings of sorted uniforms."""
    if n < 2:
        raise ValueError("n must be >= 2")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    return _simplex_matrix(n, 1, gen)[0].tolist()


def _simplex_matrix(n: int, count: int, gen: np.random.Generator) -> np.ndarray:
    cuts = np.sort(gen.random((count, n - 1)), axis=1)
    padded = np.concatenate(
        [np.zeros((count, 1)), cuts, np.ones((count, 1))], axis=1
    )
    return np.diff(padded, axis=1)


def _empirical_pmf(values: np.ndarray, samples: int) -> IntPmf:
    lo = int(values.min())
    hi = int(values.max())
    counts = np.bincount((values - lo).astype(np.int64), minlength=hi - lo + 1)
    weights = tuple(Fraction(int(c), samples) for c in counts)
    return IntPmf(offset=lo, weights=weights)


def _stream_chunks(samples: int, streams: int) -> list[int]:
    base, extra = divmod(samples, streams)
    return [base + (1 if i < extra else 0) for i in range(streams)]


_MAX_BLOCK = 1 << 22  # cap on floats drawn per batch


def _simulate_rounded(n: int, shift: float, samples: int, rng: RngStream,
                      streams: int, centered: bool) -> IntPmf:
    """Shared engine: empirical law of floor(sum of uniforms + shift)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if streams < 1:
        raise ValueError("streams must be >= 1")
    parts: list[np.ndarray] = []
    for sid, chunk in enumerate(_stream_chunks(samples, streams)):
        if chunk == 0:
            continue
        gen = rng.substream(rng.stream_id + sid).generator()
        done = 0
        while done < chunk:
            block = min(chunk - done, max(_MAX_BLOCK // n, 1))
            u = gen.random((block, n))
            if centered:
                u -= 0.5
            total = u.sum(axis=1)
            parts.append(np.floor(total + shift).astype(np.int64))
            done += block
    values = np.concatenate(parts)
    return _empirical_pmf(values, samples)


def simulate_rounded_sum(n: int, rho: float, samples: int, rng: RngStream,
                         streams: int = 1) -> IntPmf:
    """Empirical pmf of the rho-rounded sum of n uniforms."""
    return _simulate_rounded(n, 1.0 - rho, samples, rng, streams, centered=False)


def simulate_symmetric(n: int, samples: int, rng: RngStream,
                       streams: int = 1) -> IntPmf:
    """Empirical pmf of standard rounding of a sum of uniforms on [-1/2, 1/2].

    The exact comparison law is the rounded-sum law with rho = (n+1)/2.
    """
    return _simulate_rounded(n, 0.5, samples, rng, streams, centered=True)


@dataclass(frozen=True)
class DiscrepancyExperiment:
    """Configuration of one rounding-discrepancy experiment."""

    n: int
    rho: float
    gamma: float
    N: int
    samples: int
    seed: int
    streams: int = 1

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")


@dataclass(frozen=True)
class DiscrepancyResult:
    pmf: IntPmf
    mean: float
    variance: float


def discrepancy_exact_pmf(n: int, rho: float, gamma: float) -> IntPmf:
    """Large-N law of the rounding discrepancy over n categories.

    This is the rounded-sum law with parameters (n - 1, n*rho - gamma);
    its mean is n(1/2 - rho) + gamma and its variance n/12 (n >= 3).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    rho_eff = as_fraction(n) * as_fraction(rho) - as_fraction(gamma)
    return ef_distribution(n - 1, rho_eff).pmf


def simulate_discrepancy(exp: DiscrepancyExperiment) -> DiscrepancyResult:
    """Empirical law of sum_i round((N + gamma) p_i) - N on fresh simplex draws."""
    parts: list[np.ndarray] = []
    rng = RngStream(exp.seed)
    for sid, chunk in enumerate(_stream_chunks(exp.samples, exp.streams)):
        if chunk == 0:
            continue
        gen = rng.substream(sid).generator()
        done = 0
        while done < chunk:
            block = min(chunk - done, max(_MAX_BLOCK // exp.n, 1))
            p = _simplex_matrix(exp.n, block, gen)
            rounded = np.floor((exp.N + exp.gamma) * p + 1.0 - exp.rho)
            parts.append(rounded.sum(axis=1).astype(np.int64) - exp.N)
            done += block
    values = np.concatenate(parts)
    pmf = _empirical_pmf(values, exp.samples)
    return DiscrepancyResult(
        pmf=pmf,
        mean=float(values.mean()),
        variance=float(values.var()),
    )


def experiment_from_config(config: dict) -> DiscrepancyExperiment:
    """Build an experiment from a flat key-value mapping (JSON-compatible)."""
    known = {"n", "rho", "gamma", "N", "samples", "seed", "streams"}
    unknown = set(config) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return DiscrepancyExperiment(
        n=int(config["n"]),
        rho=float(config["rho"]),
        gamma=float(config.get("gamma", 0.0)),
        N=int(config["N"]),
        samples=int(config.get("samples", 10**6)),
        seed=int(config.get("seed", 0)),
        streams=int(config.get("streams", 1)),
    )


def discrepancy_records(exp: DiscrepancyExperiment) -> list[dict]:
    """Per-atom comparison rows: {k, empirical, theoretical, stderr}."""
    result = simulate_discrepancy(exp)
    exact = discrepancy_exact_pmf(exp.n, exp.rho, exp.gamma)
    lo = min(result.pmf.offset, exact.offset)
    hi = max(result.pmf.support.stop, exact.support.stop)
    rows = []
    for k in range(lo, hi):
        emp = float(result.pmf.prob(k))
        rows.append(
            {
                "k": k,
                "empirical": emp,
                "theoretical": float(exact.prob(k)),
                "stderr": math.sqrt(max(emp * (1.0 - emp), 0.0) / exp.samples),
            }
        )
    return rows


# --- apportionment ----------------------------------------------------------


class ApportionmentError(ValueError):
    """Apportionment cannot be completed as requested."""


class ApportionmentTieError(ApportionmentError):
    """A tie makes the seat assignment ambiguous; ties are never broken
    silently."""

    def __init__(self, message: str, parties: Sequence[int]):
        super().__init__(f"{message} (tied parties: {list(parties)})")
        self.parties = list(parties)


@dataclass(frozen=True)
class ApportionmentOutcome:
    """Seat vector plus the divisor/quota (and rho, where adjusted)."""

    seats: tuple[int, ...]
    divisor_or_quota: float
    method: Literal["divisor", "hare", "droop"]
    rho: float | None = None


def _check_votes(votes: Sequence) -> list[Fraction]:
    if not votes:
        raise ValueError("votes must be nonempty")
    vs = [as_fraction(v) for v in votes]
    if any(v <= 0 for v in vs):
        raise ValueError("votes must be positive")
    return vs


def apportion_divisor(votes: Sequence, N: int, rho) -> ApportionmentOutcome:
    """Divisor method: seats_i = round(v_i / D) with the given rho, D tuned.

    Party i reaches seat s once v_i / D >= s - 1 + rho, so the jump
    thresholds are v_i / (s - 1 + rho).  Comparing the N-th and (N+1)-th
    largest thresholds exactly (rational arithmetic) finds D or detects a
    tie.  rho = 0 makes the first seat free; N < #parties is then
    infeasible.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    vs = _check_votes(votes)
    r = as_fraction(rho)
    if not 0 <= r <= 1:
        raise ValueError("rho must lie in [0, 1]")

    thresholds: list[tuple[Fraction, int]] = []
    free_seats = 0  # seats granted for any finite divisor (rho = 0, s = 1)
    for i, v in enumerate(vs):
        for s in range(1, N + 2):
            denom = s - 1 + r
            if denom == 0:
                free_seats += 1
            else:
                thresholds.append((v / denom, i))
    if free_seats > N:
        raise ApportionmentError(
            "ceiling rounding grants every party a seat; house too small"
        )
    thresholds.sort(key=lambda tv: tv[0], reverse=True)
    paid = N - free_seats
    if paid == 0:
        top = thresholds[0][0]
        divisor = top * 2
    else:
        t_last = thresholds[paid - 1][0]
        t_next = thresholds[paid][0]
        if t_last == t_next:
            tied = sorted({i for t, i in thresholds if t == t_last})
            raise ApportionmentTieError(
                f"threshold tie at divisor {t_last}", tied
            )
        divisor = (t_last + t_next) / 2

    seats = tuple(floor(v / divisor + 1 - r) for v in vs)
    if sum(seats) != N:
        raise AssertionError("divisor search failed to hit the house size")
    return ApportionmentOutcome(
        seats=seats, divisor_or_quota=float(divisor), method="divisor", rho=float(r)
    )


def _largest_remainder(quotas: list[Fraction], N: int) -> tuple[int, ...]:
    base = [floor(q) for q in quotas]
    rem = [q - b for q, b in zip(quotas, base)]
    extra = N - sum(base)
    if extra < 0 or extra > len(quotas):
        raise ApportionmentError(
            f"cannot allocate {extra} remainder seats over {len(quotas)} parties"
        )
    order = sorted(range(len(quotas)), key=lambda i: (-rem[i], i))
    if 0 < extra < len(quotas) and rem[order[extra - 1]] == rem[order[extra]]:
        boundary = rem[order[extra - 1]]
        tied = sorted(i for i in range(len(quotas)) if rem[i] == boundary)
        raise ApportionmentTieError(
            f"remainder tie at {boundary} for the last seat", tied
        )
    seats = list(base)
    for i in order[:extra]:
        seats[i] += 1
    return tuple(seats)


def apportion_hare(votes: Sequence, N: int) -> ApportionmentOutcome:
    """Greatest remainder with the simple quota: q_i = N v_i / sum(v)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    vs = _check_votes(votes)
    total = sum(vs)
    quotas = [N * v / total for v in vs]
    seats = _largest_remainder(quotas, N)
    return ApportionmentOutcome(
        seats=seats, divisor_or_quota=float(total / N), method="hare"
    )


def apportion_droop(votes: Sequence, N: int) -> ApportionmentOutcome:
    """Quota method with quotas (N+1) v_i / sum(v) and rho adjusted.

    seats_i(rho) = floor(q_i + 1 - rho) is a nonincreasing step function
    of rho with breakpoints at the fractional parts of the quotas (plus
    their unit shifts); the smallest breakpoint hitting the house size is
    chosen.  If every quota is an integer the totals jump over N in one
    step per party, which is only resolvable for a single party.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    vs = _check_votes(votes)
    total = sum(vs)
    quotas = [(N + 1) * v / total for v in vs]

    fracs = sorted({q - floor(q) for q in quotas})
    candidates = sorted(
        {f for f in fracs if f > 0}
        | {f + 1 for f in fracs if f > 0}
        | {Fraction(1), Fraction(2)}
    )
    for r in candidates:
        seats = [floor(q + 1 - r) for q in quotas]
        if sum(seats) == N:
            return ApportionmentOutcome(
                seats=tuple(seats),
                divisor_or_quota=float(total / (N + 1)),
                method="droop",
                rho=float(r),
            )
    # totals skipped N: several parties drop a seat simultaneously just
    # past some breakpoint; those parties share the breakpoint's
    # fractional part
    for prev, cur in zip(candidates, candidates[1:]):
        hi = sum(floor(q + 1 - prev) for q in quotas)
        lo = sum(floor(q + 1 - cur) for q in quotas)
        if hi > N > lo:
            jump_frac = prev - floor(prev)  # 0 for integer-quota parties
            tied = sorted(
                i for i, q in enumerate(quotas) if q - floor(q) == jump_frac
            )
            raise ApportionmentTieError(
                f"quota fractional parts tie just past rho = {prev}", tied
            )
    raise ApportionmentError("no rho breakpoint reaches the house size")


# --- seat bias of quota methods ---------------------------------------------


def hare_bias_density(n: int, x) -> Fraction:
    """Asymptotic density of the greatest-remainder seat bias for one party.

    Two equivalent forms are evaluated and must agree exactly:
    F_{n-2}(nx + n - 1) - F_{n-2}(nx - 1), and the triangle-row sum
    (1/(n-2)!) sum_{j=0}^{n-1} A(n-2, floor(nx) + j, {nx}).  The density
    vanishes outside (-1, 1) and its integer translates sum to 1.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    v = as_fraction(x)
    via_cdf = irwin_hall_cdf(n - 2, n * v + n - 1) - irwin_hall_cdf(n - 2, n * v - 1)
    base = floor(n * v)
    frac = n * v - base
    via_sum = sum(ef_number(n - 2, base + j, frac) for j in range(n)) / math.factorial(
        n - 2
    )
    if via_cdf != via_sum:
        raise AssertionError("the two seat-bias density forms disagree")
    return via_cdf


def _hare_seats_party1(p: np.ndarray, N: int, quota_scale: int) -> np.ndarray:
    """Vectorized largest-remainder seats for party 1, quotas = quota_scale * p.

    Ties among remainders have probability zero under continuous sampling
    and are ignored here (the exact apportionment routines do reject them).
    """
    q = quota_scale * p
    base = np.floor(q)
    rem = q - base
    deficit = (N - base.sum(axis=1)).astype(np.int64)
    # rank remainders descending per row; party gets +1 if its rank < deficit
    order = np.argsort(-rem, axis=1, kind="stable")
    ranks = np.empty_like(order)
    rows = np.arange(p.shape[0])[:, None]
    ranks[rows, order] = np.arange(p.shape[1])[None, :]
    return (base + (ranks < deficit[:, None])).astype(np.int64)[:, 0]


def simulate_seat_bias(
    n: int,
    p1: float,
    method: Literal["hare", "droop"],
    N_list: Sequence[int],
    samples: int,
    rng: RngStream,
) -> list[dict]:
    """Empirical law of party 1's seat bias vs its asymptotic density.

    Returns one record per N with rows {k, empirical, theoretical, stderr},
    where the bias is k - {N p1} and the prediction is the bias density at
    that point (shifted by 1/n - p1 for Droop).
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    if not 0.0 < p1 < 1.0:
        raise ValueError("p1 must lie in (0, 1)")
    if method not in ("hare", "droop"):
        raise ValueError("method must be 'hare' or 'droop'")
    out = []
    for j, N in enumerate(N_list):
        gen = rng.substream(rng.stream_id + j).generator()
        counts: dict[int, int] = {}
        done = 0
        while done < samples:
            block = min(samples - done, max(_MAX_BLOCK // n, 1))
            p = np.empty((block, n))
            p[:, 0] = p1
            p[:, 1:] = (1.0 - p1) * _simplex_matrix(n - 1, block, gen)
            scale = N if method == "hare" else N + 1
            s1 = _hare_seats_party1(p, N, scale)
            ks, cs = np.unique(s1 - math.floor(N * p1), return_counts=True)
            for k, c in zip(ks.tolist(), cs.tolist()):
                counts[int(k)] = counts.get(int(k), 0) + int(c)
            done += block
        frac_np1 = N * p1 - math.floor(N * p1)
        rows = []
        for k in sorted(counts):
            arg = Fraction(k) - as_fraction(frac_np1)
            if method == "droop":
                arg = arg - as_fraction(p1) + Fraction(1, n)
            emp = counts[k] / samples
            rows.append(
                {
                    "k": int(k),
                    "empirical": emp,
                    "theoretical": float(hare_bias_density(n, arg)),
                    "stderr": math.sqrt(max(emp * (1.0 - emp), 0.0) / samples),
                }
            )
        out.append({"N": int(N), "rows": rows})
    return out
