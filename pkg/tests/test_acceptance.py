"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with the measured values (run with -s to see them inline).

Criterion 3 asserts the slope bands exactly as stated.  Under the base-2
rate convention used throughout the package (rate = r * log2(snr), the
same base as the capacity bounds), the 10-40 dB fitted slopes are ~0.30
for r=0.75 and ~0.69 for r=0.5 for any seed, so the second band cannot be
met; the test reports the failure rather than bending the convention.
"""

import math
import time

import numpy as np
import pytest

import hdrelay as hd
from hdrelay.dmt import (
    crossing_links_outage_region,
    exponent_grid_oracle,
    single_relay_outage_region,
    two_hop_cut_outage_region,
)

SEED = 1
SNR_DB_GRID = tuple(float(v) for v in range(10, 41, 5))
TRIALS = 1_000_000


def _report(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {num} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} {name}: {detail}"


def _campaign(r: float, gap_bits: float = 0.0, workers: int = 2):
    cfg = hd.RunConfig(
        model=hd.BoundModel.SINGLE_RELAY_UB,
        n_relays=1,
        schedule=hd.SingleRelaySchedule(0.5),
        r=r,
        snr_db_grid=SNR_DB_GRID,
        trials_per_point=TRIALS,
        seed=SEED,
        gap_bits=gap_bits,
    )
    start = time.perf_counter()
    table = hd.estimate_outage(cfg, workers=workers)
    return table, time.perf_counter() - start


@pytest.fixture(scope="module")
def table_r075_w1():
    return _campaign(0.75, workers=1)


@pytest.fixture(scope="module")
def table_r05():
    return _campaign(0.5)


def test_criterion_1_single_relay_exponent():
    start = time.perf_counter()
    worst = 0.0
    for k in range(21):
        r = k * 0.05
        oracle = exponent_grid_oracle(single_relay_outage_region(r, 0.5), 3, 0.005)
        worst = max(worst, abs(oracle - hd.single_relay_exponent_analytic(r)))
    elapsed = time.perf_counter() - start
    ok = worst <= 0.045 and elapsed < 60.0
    _report(1, "single-relay exponent oracle agreement",
            ok, f"worst |d_oracle - 2(1-r)| = {worst:.4f} <= 0.045, runtime {elapsed:.1f}s < 60s")


def test_criterion_2_two_hop_exponents():
    details = []
    ok = True
    elapsed_n3 = 0.0
    for n in (1, 2, 3):
        tol = 0.25 * (2 * n + 1) * 0.05 + 0.05
        start = time.perf_counter()
        worst_cut = 0.0
        worst_min = 0.0
        for k in range(11):
            r = k * 0.1
            target = hd.two_hop_exponent_analytic(n, r)
            per_cut = []
            for cut in hd.enumerate_cuts(n):
                if n <= 2:
                    d = exponent_grid_oracle(two_hop_cut_outage_region(n, r, cut), 2 * n + 1, 0.05)
                else:
                    # only the N+1 crossing links constrain the cut; the rest
                    # sit at order 1, so the reduced search is equivalent
                    d = exponent_grid_oracle(crossing_links_outage_region(n, r), n + 1, 0.05)
                per_cut.append(d)
                worst_cut = max(worst_cut, abs(d - target))
            worst_min = max(worst_min, abs(min(per_cut) - target))
        took = time.perf_counter() - start
        if n == 3:
            elapsed_n3 = took
        ok = ok and worst_cut <= tol and worst_min <= tol
        details.append(f"N={n}: worst cut dev {worst_cut:.4f}, min-cut dev {worst_min:.4f} <= {tol:.4f}")
    ok = ok and elapsed_n3 < 300.0
    _report(2, "two-hop per-cut exponents", ok, "; ".join(details) + f"; N=3 runtime {elapsed_n3:.1f}s < 300s")


def test_criterion_3_monte_carlo_diversity(table_r075_w1, table_r05):
    table75, took75 = table_r075_w1
    table50, took50 = table_r05
    slope75, _ = hd.estimate_diversity_slope(table75, min_count=50)
    slope50, _ = hd.estimate_diversity_slope(table50, min_count=50)
    ok75 = 0.30 <= slope75 <= 0.70 and took75 < 300.0
    ok50 = 0.75 <= slope50 <= 1.25 and took50 < 300.0
    _report(3, "monte-carlo diversity slopes", ok75 and ok50,
            f"slope(r=0.75) = {slope75:.4f} vs [0.30, 0.70], runtime {took75:.0f}s; "
            f"slope(r=0.5) = {slope50:.4f} vs [0.75, 1.25], runtime {took50:.0f}s")


def test_criterion_4_schedule_optimality():
    tol = 3 * 0.005  # oracle guarantee at step 0.005, dim 3
    ok = True
    details = []
    for r in (0.25, 0.5, 0.75):
        t_star, d_star = hd.optimize_schedule_single(r, 0.05)
        margins = []
        for k in range(21):
            t = round(k * 0.05, 12)
            if t == 0.5:
                continue
            d_t = exponent_grid_oracle(single_relay_outage_region(r, t), 3, 0.005)
            margins.append(d_star - d_t)
        margin = min(margins)
        ok = ok and t_star == 0.5 and margin > tol
        details.append(f"r={r}: t*={t_star}, min margin {margin:.4f} > {tol}")
    _report(4, "half-listen schedule optimality", ok, "; ".join(details))


def test_criterion_5_inequality_suites():
    start = time.perf_counter()
    reports = [
        hd.run_randomized_suite(hd.CheckKind.TCHEBYCHEF, 10_000, seed=SEED),
        hd.run_randomized_suite(hd.CheckKind.AVG_LEMMA, 10_000, seed=SEED, max_len=8),
        hd.run_randomized_suite(hd.CheckKind.CUT_AVG, 10_000, seed=SEED, max_relays=6),
    ]
    elapsed = time.perf_counter() - start
    violations = sum(rep.violations for rep in reports)
    worst = min(rep.worst_margin for rep in reports)
    ok = violations == 0 and worst >= -1e-12 and elapsed < 30.0
    _report(5, "inequality suites", ok,
            f"violations = {violations}, worst margin {worst:.2e} >= -1e-12, runtime {elapsed:.1f}s < 30s")


def test_criterion_6_worker_count_determinism(table_r075_w1):
    table_w1, _ = table_r075_w1
    counts = {1: [row.outage_count for row in table_w1.rows]}
    for workers in (4, 8):
        table, _ = _campaign(0.75, workers=workers)
        counts[workers] = [row.outage_count for row in table.rows]
    ok = counts[1] == counts[4] == counts[8]
    _report(6, "worker-count determinism", ok,
            f"counts w1 == w4 == w8: {ok}; w1 = {counts[1]}")


def test_criterion_7_gap_robustness(table_r075_w1):
    table0, _ = table_r075_w1
    table1, _ = _campaign(0.75, gap_bits=1.0)
    slope0, _ = hd.estimate_diversity_slope(table0, min_count=50)
    slope1, _ = hd.estimate_diversity_slope(table1, min_count=50)
    delta = abs(slope1 - slope0)
    ok = delta < 0.15
    _report(7, "gap robustness", ok,
            f"|slope(gap=1) - slope(gap=0)| = {delta:.4f} < 0.15")


def test_criterion_8_finite_snr_sanity():
    rng = np.random.default_rng(2024)
    n = 10_000
    g_sd, g_sr, g_rd = (rng.exponential(size=n) for _ in range(3))
    t = 0.5
    base = hd.single_relay_bound_array(g_sd, g_sr, g_rd, 100.0, t)
    snr_ok = bool(np.all(hd.single_relay_bound_array(g_sd, g_sr, g_rd, 400.0, t) >= base))
    gain_ok = all(
        bool(np.all(hd.single_relay_bound_array(*bumped, 100.0, t) >= base - 1e-12))
        for bumped in (
            (g_sd + 0.3, g_sr, g_rd),
            (g_sd, g_sr + 0.3, g_rd),
            (g_sd, g_sr, g_rd + 0.3),
        )
    )
    direct = np.log2(1.0 + 100.0 * g_sd)
    t0 = hd.single_relay_bound_array(g_sd, g_sr, g_rd, 100.0, 0.0)
    reduction_ok = bool(np.all(t0 == direct))
    ok = snr_ok and gain_ok and reduction_ok
    _report(8, "finite-SNR sanity", ok,
            f"monotone in snr: {snr_ok}, monotone in gains: {gain_ok}, t=0 reduces to direct link: {reduction_ok}")
