"""Seeded Monte Carlo estimation of outage probability across an SNR grid.

A channel is in outage when its capacity bound, minus an optional constant
gap, falls below the target rate r * log2(snr).  Trials are driven by
counter-based substreams keyed on (seed, snr point index, trial index), so
every count is a pure function of the configuration: reruns are bit
identical for any worker count or chunking, and campaigns that differ only
in rate or gap see exactly the same channel realizations (which makes the
monotonicity checks in the test suite exact rather than statistical).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from statistics import NormalDist
from typing import Any

import numpy as np

from ._version import __version__
from .channel import ChannelRealization, sample_gain_arrays
from .cutset import (
    SingleRelaySchedule,
    TwoHopSchedule,
    network_min_cut_lower_bound,
    single_relay_bound_array,
    single_relay_cutset_bits,
    two_hop_bound_array,
)
from .rng import GENERATOR_NAME

# stream index of trial k at SNR point i is i * SNR_STREAM_STRIDE + k
SNR_STREAM_STRIDE = 1 << 40

_CHUNK = 1 << 16  # trials per task; fixed so chunking never shows in results


class BoundModel(str, Enum):
    """Which capacity bound defines the outage event."""

    SINGLE_RELAY_UB = "single-relay-ub"
    TWO_HOP_ZLB = "two-hop-zlb"


@dataclass(frozen=True)
class RunConfig:
    """One outage campaign: bound model, schedule, rate, SNR grid, seeding."""

    model: BoundModel
    n_relays: int
    schedule: SingleRelaySchedule | TwoHopSchedule
    r: float
    snr_db_grid: tuple[float, ...]
    trials_per_point: int
    seed: int
    gap_bits: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "snr_db_grid", tuple(float(v) for v in self.snr_db_grid))
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"multiplexing gain r must lie in [0, 1], got {self.r!r}")
        if self.gap_bits < 0:
            raise ValueError(f"gap_bits must be >= 0, got {self.gap_bits!r}")
        if self.trials_per_point < 1:
            raise ValueError(f"trials_per_point must be >= 1, got {self.trials_per_point}")
        if self.trials_per_point >= SNR_STREAM_STRIDE:
            raise ValueError(f"trials_per_point must be < {SNR_STREAM_STRIDE}")
        if not self.snr_db_grid:
            raise ValueError("snr_db_grid must be non-empty")
        if any(b <= a for a, b in zip(self.snr_db_grid, self.snr_db_grid[1:])):
            raise ValueError("snr_db_grid must be strictly ascending")
        if self.model is BoundModel.SINGLE_RELAY_UB:
            if self.n_relays != 1:
                raise ValueError("single-relay-ub model requires n_relays == 1")
            if not isinstance(self.schedule, SingleRelaySchedule):
                raise ValueError("single-relay-ub model requires a SingleRelaySchedule")
        else:
            if not isinstance(self.schedule, TwoHopSchedule):
                raise ValueError("two-hop-zlb model requires a TwoHopSchedule")
            if self.schedule.n_relays != self.n_relays:
                raise ValueError(
                    f"schedule has {self.schedule.n_relays} relays, config has {self.n_relays}"
                )


@dataclass(frozen=True)
class OutageRow:
    """Result at one SNR point."""

    snr_db: float
    snr_linear: float
    rate_bits: float
    trials: int
    outage_count: int
    p_hat: float
    ci_low: float
    ci_high: float

    def __post_init__(self) -> None:
        if not 0 <= self.outage_count <= self.trials:
            raise ValueError("outage_count must lie in [0, trials]")
        if not 0.0 <= self.p_hat <= 1.0:
            raise ValueError("p_hat must lie in [0, 1]")
        if not self.ci_low <= self.p_hat <= self.ci_high:
            raise ValueError("confidence interval must bracket p_hat")


@dataclass(frozen=True)
class OutageTable:
    """Rows per SNR point plus the metadata needed to reproduce them."""

    rows: tuple[OutageRow, ...]
    metadata: dict[str, Any] = field(default_factory=dict)


def db_to_linear(snr_db):
    return 10.0 ** (np.asarray(snr_db, dtype=np.float64) / 10.0)


def outage_event(
    realization: ChannelRealization,
    snr: float,
    rate_bits: float,
    model: BoundModel,
    schedule: SingleRelaySchedule | TwoHopSchedule,
    gap_bits: float = 0.0,
) -> bool:
    """Whether the bound, reduced by the gap, falls below the target rate."""
    if gap_bits < 0:
        raise ValueError(f"gap_bits must be >= 0, got {gap_bits!r}")
    if model is BoundModel.SINGLE_RELAY_UB:
        if not isinstance(schedule, SingleRelaySchedule):
            raise ValueError("single-relay-ub model requires a SingleRelaySchedule")
        bound = single_relay_cutset_bits(realization, snr, schedule.t)
    else:
        if not isinstance(schedule, TwoHopSchedule):
            raise ValueError("two-hop-zlb model requires a TwoHopSchedule")
        bound = network_min_cut_lower_bound(realization, snr, schedule)
    return bound - gap_bits < rate_bits


def _count_outages(
    cfg: RunConfig, snr_index: int, snr: float, rate_bits: float, start: int, stop: int
) -> int:
    """Outage count over trials [start, stop) at one SNR point."""
    base = snr_index * SNR_STREAM_STRIDE
    idx = np.arange(base + start, base + stop, dtype=np.uint64)
    g_sd, g_sr, g_rd = sample_gain_arrays(cfg.n_relays, cfg.seed, idx)
    if cfg.model is BoundModel.SINGLE_RELAY_UB:
        assert isinstance(cfg.schedule, SingleRelaySchedule)
        bound = single_relay_bound_array(g_sd, g_sr[:, 0], g_rd[:, 0], snr, cfg.schedule.t)
    else:
        assert isinstance(cfg.schedule, TwoHopSchedule)
        bound = two_hop_bound_array(g_sd, g_sr, g_rd, snr, cfg.schedule)
    return int(np.count_nonzero(bound - cfg.gap_bits < rate_bits))


def _schedule_metadata(schedule: SingleRelaySchedule | TwoHopSchedule) -> dict[str, Any]:
    if isinstance(schedule, SingleRelaySchedule):
        return {"kind": "single-relay", "t": schedule.t}
    return {"kind": "two-hop", "weights": list(schedule.weights)}


def estimate_outage(cfg: RunConfig, workers: int = 1, level: float = 0.95) -> OutageTable:
    """Run the campaign and return one row per SNR point.

    `workers` only parallelizes the fixed-size trial chunks over threads;
    counts are integer sums of per-chunk counts, each a pure function of
    (seed, snr index, trial range), so the table is identical for any value.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    tasks = []
    points = []
    for i, snr_db in enumerate(cfg.snr_db_grid):
        snr = float(db_to_linear(snr_db))
        rate_bits = cfg.r * math.log2(snr)
        points.append((snr_db, snr, rate_bits))
        for start in range(0, cfg.trials_per_point, _CHUNK):
            stop = min(start + _CHUNK, cfg.trials_per_point)
            tasks.append((i, snr, rate_bits, start, stop))

    counts = [0] * len(cfg.snr_db_grid)
    if workers == 1:
        for i, snr, rate_bits, start, stop in tasks:
            counts[i] += _count_outages(cfg, i, snr, rate_bits, start, stop)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(
                lambda task: (task[0], _count_outages(cfg, task[0], task[1], task[2], task[3], task[4])),
                tasks,
            )
            for i, c in results:
                counts[i] += c

    rows = []
    for (snr_db, snr, rate_bits), count in zip(points, counts):
        p_hat = count / cfg.trials_per_point
        ci_low, ci_high = confidence_interval(count, cfg.trials_per_point, level)
        rows.append(
            OutageRow(
                snr_db=snr_db,
                snr_linear=snr,
                rate_bits=rate_bits,
                trials=cfg.trials_per_point,
                outage_count=count,
                p_hat=p_hat,
                ci_low=ci_low,
                ci_high=ci_high,
            )
        )
    metadata: dict[str, Any] = {
        "version": __version__,
        "generator": GENERATOR_NAME,
        "seed": cfg.seed,
        "model": cfg.model.value,
        "n_relays": cfg.n_relays,
        "schedule": _schedule_metadata(cfg.schedule),
        "r": cfg.r,
        "trials_per_point": cfg.trials_per_point,
        "gap_bits": cfg.gap_bits,
        "confidence_level": level,
    }
    return OutageTable(rows=tuple(rows), metadata=metadata)


def confidence_interval(successes: int, trials: int, level: float) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes must lie in [0, {trials}], got {successes}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level!r}")
    z = NormalDist().inv_cdf(0.5 + level / 2.0)
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials))
    low = 0.0 if successes == 0 else max(0.0, center - half)
    high = 1.0 if successes == trials else min(1.0, center + half)
    return low, high


def estimate_diversity_slope(table: OutageTable, min_count: int = 50) -> tuple[float, float]:
    """Least-squares slope of -log10(p_hat) against log10(snr).

    Rows with fewer than `min_count` outage events are excluded (their
    p_hat is too noisy to anchor a log fit).  Returns (slope, stderr);
    stderr is NaN when only two rows qualify.
    """
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    qualifying = [row for row in table.rows if row.outage_count >= min_count]
    if len(qualifying) < 2:
        raise ValueError(
            f"insufficient data: need >= 2 rows with outage_count >= {min_count}, "
            f"got {len(qualifying)}"
        )
    x = np.log10([row.snr_linear for row in qualifying])
    y = -np.log10([row.p_hat for row in qualifying])
    n = len(x)
    x_bar = x.mean()
    y_bar = y.mean()
    sxx = float(np.sum((x - x_bar) ** 2))
    slope = float(np.sum((x - x_bar) * (y - y_bar)) / sxx)
    if n == 2:
        return slope, math.nan
    residuals = y - (y_bar + slope * (x - x_bar))
    rss = float(np.sum(residuals**2))
    stderr = math.sqrt(rss / (n - 2) / sxx)
    return slope, stderr
