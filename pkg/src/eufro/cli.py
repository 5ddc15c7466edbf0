"""Command-line frontend: tables, distribution queries, asymptotic
comparisons, seeded simulations, apportionment, and a self-test suite.

Exact rationals are rendered as "p/q" strings (never floats) so output
is loss-free; `--float` adds a binary64 column where it helps.  JSON
output is canonical (sorted keys, two-space indent, trailing newline),
which makes emitted files byte-stable under parse/re-emit.  Exit codes:
0 success, 2 usage error, 3 apportionment tie, 4 self-test failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import _powseries
from .ef_core import (
    bernoulli_number,
    ef_explicit,
    ef_number,
    ef_number_poly,
    ef_row,
    ef_row_poly,
    euler_number,
    geometric_moment,
    tangent_number,
    type_b,
)
from .uniform_sum import (
    ef_cdf,
    ef_cumulant,
    ef_distribution,
    ef_moment,
    ef_pmf,
    irwin_hall_cdf,
    irwin_hall_pdf,
    pdf_via_ef,
)
from .asymptotics import ldev_approx, llt_approx
from .rounding_apportion import (
    ApportionmentTieError,
    DiscrepancyExperiment,
    RngStream,
    apportion_divisor,
    apportion_droop,
    apportion_hare,
    discrepancy_records,
    simulate_rounded_sum,
    simulate_seat_bias,
    simulate_symmetric,
)

SCHEMA_VERSION = "1"
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TIE = 3
EXIT_SELFTEST = 4

DEFAULT_SAMPLES_ENV = "EUFRO_DEFAULT_SAMPLES"


def default_samples() -> int:
    return int(os.environ.get(DEFAULT_SAMPLES_ENV, 10**6))


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", integer, or decimal text into an exact Fraction."""
    return Fraction(text)


def render_value(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return str(v)


@dataclass
class OutputRecord:
    """Envelope for machine-readable command output."""

    command: str
    params: dict
    rows: list[dict]

    def to_json(self) -> str:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "params": self.params,
            "rows": self.rows,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.rows:
            writer = csv.DictWriter(buf, fieldnames=list(self.rows[0].keys()))
            writer.writeheader()
            writer.writerows(self.rows)
        return buf.getvalue()


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(record: OutputRecord, args) -> None:
    if getattr(args, "json", None):
        text = record.to_json()
        if args.json == "-":
            sys.stdout.write(text)
        else:
            with open(args.json, "w") as fp:
                fp.write(text)
    if getattr(args, "csv", None):
        text = record.to_csv()
        if args.csv == "-":
            sys.stdout.write(text)
        else:
            with open(args.csv, "w") as fp:
                fp.write(text)


# --- commands ----------------------------------------------------------------


def cmd_table(args) -> int:
    params: dict = {"n_max": args.n_max}
    rows = []
    if args.type_b:
        params["kind"] = "type-b"
        for n in range(args.n_max + 1):
            values = [type_b(n, k) for k in range(n + 1)]
            rows.append({"n": n, "values": [str(v) for v in values]})
            print(f"n={n}: " + "  ".join(str(v) for v in values))
    elif args.rho is None:
        params["kind"] = "symbolic"
        for n in range(args.n_max + 1):
            polys = ef_row_poly(n)
            rows.append({"n": n, "values": [str(p) for p in polys]})
            print(f"n={n}: " + " | ".join(str(p) for p in polys))
    else:
        rho = parse_rational(args.rho)
        params["kind"] = "numeric"
        params["rho"] = str(rho)
        for n in range(args.n_max + 1):
            values = ef_row(n, rho).values
            rows.append({"n": n, "values": [str(v) for v in values]})
            print(f"n={n}: " + "  ".join(str(v) for v in values))
    _emit(OutputRecord("table", params, rows), args)
    return EXIT_OK


def cmd_pmf(args) -> int:
    rho = parse_rational(args.rho)
    dist = ef_distribution(args.n, rho)
    rows = []
    for k, w in dist.pmf.items():
        row = {"k": k, "prob": str(w)}
        if args.float:
            row["prob_float"] = float(w)
        rows.append(row)
        line = f"k={k}: {w}"
        if args.float:
            line += f"  ({float(w):.12g})"
        print(line)
    _emit(OutputRecord("pmf", {"n": args.n, "rho": str(rho)}, rows), args)
    return EXIT_OK


def cmd_cdf(args) -> int:
    rho = parse_rational(args.rho)
    value = ef_cdf(args.n, rho, args.k)
    print(value)
    _emit(
        OutputRecord(
            "cdf",
            {"n": args.n, "rho": str(rho), "k": args.k},
            [{"k": args.k, "cdf": str(value)}],
        ),
        args,
    )
    return EXIT_OK


def cmd_moments(args) -> int:
    rho = parse_rational(args.rho)
    orders = [args.m] if args.m is not None else [1, 2, 3, 4]
    rows = []
    for m in orders:
        mom = ef_moment(args.n, rho, m)
        kum = ef_cumulant(args.n, rho, m)
        rows.append({"m": m, "moment": str(mom), "cumulant": str(kum)})
        print(f"m={m}: moment={mom}  cumulant={kum}")
    _emit(OutputRecord("moments", {"n": args.n, "rho": str(rho)}, rows), args)
    return EXIT_OK


def cmd_llt(args) -> int:
    rho = parse_rational(args.rho)
    rows = []
    max_err = 0.0
    for k in range(args.n + 1):
        exact = float(ef_pmf(args.n, rho, k))
        approx = llt_approx(args.n, k, float(rho), args.ell)
        err = abs(exact - approx)
        max_err = max(max_err, err)
        rows.append({"k": k, "exact": exact, "approx": approx, "abs_err": err})
        print(f"k={k}: exact={exact:.12g} approx={approx:.12g} abs_err={err:.3g}")
    print(f"max_abs_err={max_err:.6g}")
    _emit(
        OutputRecord(
            "llt", {"n": args.n, "rho": str(rho), "ell": args.ell}, rows
        ),
        args,
    )
    return EXIT_OK


def cmd_ldev(args) -> int:
    rho = parse_rational(args.rho)
    rows = []
    for k in range(args.n + 1):
        if not 0 < k + rho < args.n + 1:
            continue
        exact = float(ef_pmf(args.n, rho, k))
        approx = ldev_approx(args.n, k, float(rho))
        ratio = approx / exact if exact else math.inf
        rows.append({"k": k, "exact": exact, "approx": approx, "ratio": ratio})
        print(f"k={k}: exact={exact:.12g} approx={approx:.12g} ratio={ratio:.9g}")
    _emit(OutputRecord("ldev", {"n": args.n, "rho": str(rho)}, rows), args)
    return EXIT_OK


def _load_config(args) -> dict:
    config: dict = {}
    if args.config:
        with open(args.config) as fp:
            config = json.load(fp)
        if not isinstance(config, dict):
            raise ValueError("config file must hold a flat JSON object")
    for key in ("n", "rho", "gamma", "N", "samples", "seed", "streams", "p1"):
        value = getattr(args, key if key != "N" else "bigN", None)
        if value is not None:
            config[key] = value
    config.setdefault("samples", default_samples())
    config.setdefault("seed", 0)
    config.setdefault("streams", 1)
    return config


def cmd_simulate(args) -> int:
    config = _load_config(args)
    samples = int(config["samples"])
    seed = int(config["seed"])
    streams = int(config["streams"])
    rng = RngStream(seed)
    rows: list[dict] = []

    if args.kind == "round":
        n, rho = int(config["n"]), float(config["rho"])
        pmf = simulate_rounded_sum(n, rho, samples, rng, streams=streams)
        exact = ef_distribution(n, rho).pmf
        tv = pmf.tv_distance(exact)
        for k in sorted(set(pmf.support) | set(exact.support)):
            emp = float(pmf.prob(k))
            rows.append(
                {
                    "k": k,
                    "empirical": emp,
                    "theoretical": float(exact.prob(k)),
                    "stderr": math.sqrt(max(emp * (1 - emp), 0.0) / samples),
                }
            )
        print(f"tv_distance_to_exact={tv:.6g}")
    elif args.kind == "symmetric":
        n = int(config["n"])
        pmf = simulate_symmetric(n, samples, rng, streams=streams)
        exact = ef_distribution(n, Fraction(n + 1, 2)).pmf
        tv = pmf.tv_distance(exact)
        for k in sorted(set(pmf.support) | set(exact.support)):
            emp = float(pmf.prob(k))
            rows.append(
                {
                    "k": k,
                    "empirical": emp,
                    "theoretical": float(exact.prob(k)),
                    "stderr": math.sqrt(max(emp * (1 - emp), 0.0) / samples),
                }
            )
        print(f"tv_distance_to_exact={tv:.6g}")
    elif args.kind == "discrepancy":
        exp = DiscrepancyExperiment(
            n=int(config["n"]),
            rho=float(config["rho"]),
            gamma=float(config.get("gamma", 0.0)),
            N=int(config["N"]),
            samples=samples,
            seed=seed,
            streams=streams,
        )
        rows = discrepancy_records(exp)
        zero = next((r for r in rows if r["k"] == 0), None)
        if zero:
            print(f"P(delta=0)={zero['empirical']:.6g} (exact {zero['theoretical']:.6g})")
    elif args.kind == "seat-bias":
        n = int(config["n"])
        p1 = float(config["p1"])
        method = args.method
        per_n = simulate_seat_bias(n, p1, method, [int(config["N"])], samples, rng)
        rows = per_n[0]["rows"]
        for row in rows:
            print(
                f"k={row['k']}: empirical={row['empirical']:.6g} "
                f"theoretical={row['theoretical']:.6g}"
            )
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown simulation kind {args.kind}")

    params = {key: config[key] for key in sorted(config)}
    params["kind"] = args.kind
    if args.kind == "seat-bias":
        params["method"] = args.method
    _emit(OutputRecord("simulate", params, rows), args)
    return EXIT_OK


def cmd_apportion(args) -> int:
    votes = [float(v) for v in args.votes]
    try:
        if args.method == "hare":
            outcome = apportion_hare(votes, args.seats)
        elif args.method == "droop":
            outcome = apportion_droop(votes, args.seats)
        else:
            rho = parse_rational(args.rho) if args.rho is not None else Fraction(0)
            outcome = apportion_divisor(votes, args.seats, rho)
    except ApportionmentTieError as err:
        print(f"tie: {err}", file=sys.stderr)
        return EXIT_TIE
    print(" ".join(str(s) for s in outcome.seats))
    rows = [
        {"party": i, "votes": v, "seats": s}
        for i, (v, s) in enumerate(zip(votes, outcome.seats))
    ]
    params = {
        "method": outcome.method,
        "seats_total": args.seats,
        "divisor_or_quota": outcome.divisor_or_quota,
    }
    if outcome.rho is not None:
        params["rho"] = outcome.rho
    _emit(OutputRecord("apportion", params, rows), args)
    return EXIT_OK


# --- self-test ---------------------------------------------------------------


def _selftest_checks(n_max: int, seed: int):
    """Yield (name, passed, detail) for the exact identity suite."""
    rhos = [Fraction(0), Fraction(1, 7), Fraction(1, 2), Fraction(6, 7), Fraction(1)]
    rnd = random.Random(seed)

    def rand_rho() -> Fraction:
        return Fraction(rnd.randrange(0, 101), 100)

    ok = all(
        sum(ef_row(n, rho).values) == factorial(n)
        for n in range(n_max + 1)
        for rho in rhos + [rand_rho()]
    )
    yield "row sums equal n!", ok, ""

    ok = all(
        ef_number(n, n - k, rho) == ef_number(n, k, 1 - rho)
        for n in range(n_max + 1)
        for k in range(n + 1)
        for rho in rhos
    )
    yield "row symmetry under rho -> 1-rho", ok, ""

    ok = all(
        ef_number(n, k + 1, 0) == ef_number(n, k, 1)
        for n in range(1, n_max + 1)
        for k in range(-1, n + 1)
    )
    yield "unit shift between rho=0 and rho=1", ok, ""

    ok = all(
        ef_explicit(n, k, rho) == ef_number(n, k, rho)
        for n in range(1, n_max + 1)
        for k in range(n + 1)
        for rho in rhos
    )
    yield "alternating-sum formula matches recursion", ok, ""

    ok = True
    for n in range(1, min(n_max, 12) + 1):
        for k in range(n + 1):
            lhs = ef_number_poly(n, k).derivative()
            rhs = (ef_number_poly(n - 1, k) - ef_number_poly(n - 1, k - 1)) * n
            ok = ok and lhs == rhs
    yield "rho-derivative recursion", ok, ""

    ok = all(
        type_b(n, k) == 2**n * ef_number(n, k, Fraction(1, 2))
        for n in range(n_max + 1)
        for k in range(n + 1)
    )
    yield "type-B bridge", ok, ""

    ok = True
    for n in range(1, min(n_max, 10) + 1):
        x = Fraction(rnd.randrange(1, 50), 49)
        rho = rand_rho()
        order = n + 2
        one_minus_x = 1 - x
        numer = _powseries.scale(
            _powseries.exp_linear(rho * one_minus_x, order), one_minus_x
        )
        denom = [Fraction(1)] + [
            -x * c for c in _powseries.exp_linear(one_minus_x, order)[1:]
        ]
        denom[0] = 1 - x
        series = _powseries.mul(numer, _powseries.inverse(denom, order), order)
        row = ef_row(n, rho).values
        poly = sum(c * x**k for k, c in enumerate(row))
        ok = ok and series[n] * factorial(n) == poly
    yield "exponential generating function", ok, ""

    ok = True
    for n in range(2, min(n_max, 12) + 1):
        x = Fraction(rnd.randrange(1, n * 4), 4)
        ok = ok and pdf_via_ef(n, x) == irwin_hall_pdf(n, x)
        ok = ok and irwin_hall_pdf(n + 1, x) == irwin_hall_cdf(n, x) - irwin_hall_cdf(
            n, x - 1
        )
    yield "density bridges", ok, ""

    ok = True
    for n in range(2, min(n_max, 14) + 1):
        for m in range(2, n + 1):
            if ef_cumulant(n, Fraction(1, 3), m) != (n + 1) * bernoulli_number(m) / m:
                ok = False
    yield "cumulants from Bernoulli numbers", ok, ""

    order = 12
    sech = _powseries.inverse(_powseries.cosh_series(order), order)
    ok = all(
        euler_number(n) == factorial(n) * sech[n] for n in range(0, order + 1, 2)
    )
    yield "Euler numbers match sech series", ok, ""

    ok = True
    for m in range(1, 5):
        n = 2 * m - 1
        via_b = (
            (-1) ** (m - 1)
            * Fraction(2**(2 * m) * (2**(2 * m) - 1), 2 * m)
            * bernoulli_number(2 * m)
        )
        ok = ok and tangent_number(n) == via_b
    yield "tangent numbers match Bernoulli route", ok, ""

    ok = [geometric_moment(n, Fraction(1, 2)) for n in range(1, 5)] == [1, 3, 13, 75]
    yield "geometric moments (OEIS A000670)", ok, ""

    pmf = simulate_rounded_sum(3, 0.5, 10**5, RngStream(seed))
    exact = ef_distribution(3, Fraction(1, 2)).pmf
    tv = pmf.tv_distance(exact)
    yield "seeded rounding simulation", tv < 0.02, f"tv={tv:.4g}"


def cmd_selftest(args) -> int:
    n_max = 10 if args.quick else 25
    failures = 0
    for name, ok, detail in _selftest_checks(n_max, args.seed):
        status = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail else ""
        print(f"{status}: {name}{suffix}")
        if not ok:
            failures += 1
    print(f"{'OK' if failures == 0 else 'FAILED'}: {failures} failing check(s)")
    return EXIT_OK if failures == 0 else EXIT_SELFTEST


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eufro",
        description="Euler-Frobenius numbers, rounded uniform sums, and friends",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_output_flags(p):
        p.add_argument("--json", metavar="PATH", help="write a JSON record ('-' for stdout)")
        p.add_argument("--csv", metavar="PATH", help="write CSV rows ('-' for stdout)")

    p = sub.add_parser("table", help="triangle rows, symbolic or at a fixed rho")
    p.add_argument("n_max", type=int)
    p.add_argument("--rho", help="rational like 1/2; omit for symbolic rows")
    p.add_argument("--type-b", action="store_true", help="emit type-B integers")
    add_output_flags(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("pmf", help="exact pmf of the rounded uniform sum")
    p.add_argument("n", type=int)
    p.add_argument("rho")
    p.add_argument("--float", action="store_true", help="add binary64 column")
    add_output_flags(p)
    p.set_defaults(func=cmd_pmf)

    p = sub.add_parser("cdf", help="exact cdf value P(Z <= k)")
    p.add_argument("n", type=int)
    p.add_argument("rho")
    p.add_argument("k", type=int)
    add_output_flags(p)
    p.set_defaults(func=cmd_cdf)

    p = sub.add_parser("moments", help="exact moments and cumulants")
    p.add_argument("n", type=int)
    p.add_argument("rho")
    p.add_argument("-m", type=int, default=None, help="single order (default 1..4)")
    add_output_flags(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("llt", help="local limit approximation vs exact pmf")
    p.add_argument("n", type=int)
    p.add_argument("rho")
    p.add_argument("ell", type=int, nargs="?", default=0)
    add_output_flags(p)
    p.set_defaults(func=cmd_llt)

    p = sub.add_parser("ldev", help="saddle-point approximation vs exact pmf")
    p.add_argument("n", type=int)
    p.add_argument("rho")
    add_output_flags(p)
    p.set_defaults(func=cmd_ldev)

    p = sub.add_parser("simulate", help="seeded Monte Carlo experiments")
    p.add_argument("kind", choices=["round", "symmetric", "discrepancy", "seat-bias"])
    p.add_argument("--config", help="flat JSON config file")
    p.add_argument("-n", type=int, default=None)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--bigN", "-N", type=int, default=None, dest="bigN",
                   help="grand total / house size")
    p.add_argument("--p1", type=float, default=None)
    p.add_argument("--method", choices=["hare", "droop"], default="hare")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--streams", type=int, default=None)
    add_output_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("apportion", help="seat apportionment")
    p.add_argument("method", choices=["divisor", "hare", "droop"])
    p.add_argument("votes", nargs="+")
    p.add_argument("--seats", type=int, required=True)
    p.add_argument("--rho", default=None, help="rho for the divisor method")
    add_output_flags(p)
    p.set_defaults(func=cmd_apportion)

    p = sub.add_parser("selftest", help="run the exact identity suite")
    p.add_argument("--quick", action="store_true", help="subset with n <= 10")
    p.add_argument("--seed", type=int, default=12345)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
