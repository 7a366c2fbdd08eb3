"""Diversity-multiplexing exponents: analytic curves and a grid oracle.

The outage exponent d(r) is the infimum of sum(1 - a_i) over per-link
exponential orders a in [0, 1]^dim that put the channel in outage at
multiplexing gain r.  Closed forms are implemented for the cases with known
answers (m x 1 MISO, the parallel channel, the single relay at any listen
fraction, and the two-hop N-relay network under uniform scheduling), and an
exhaustive grid minimizer provides an independent check of each closed form:
it evaluates the outage predicate on a uniform grid and is guaranteed to
land within dim*step of the true infimum for the piecewise-linear outage
regions used here, because rounding every coordinate of a feasible point
down to the grid keeps it feasible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channel import ExponentVector
from .cutset import Cut

DEFAULT_ORACLE_BUDGET = 1_000_000_000

# predicate values within this of each other are treated as exact ties
_TIE_TOL = 1e-9

RegionPredicate = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DmtCurve:
    """Sampled (multiplexing gain, diversity order) pairs, r strictly increasing."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        pts = tuple((float(r), float(d)) for r, d in self.points)
        object.__setattr__(self, "points", pts)
        for r, d in pts:
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"multiplexing gain must lie in [0, 1], got {r!r}")
            if d < 0.0:
                raise ValueError(f"diversity order must be >= 0, got {d!r}")
        rs = [r for r, _ in pts]
        if any(b <= a for a, b in zip(rs, rs[1:])):
            raise ValueError("multiplexing gains must be strictly increasing")

    @property
    def r(self) -> tuple[float, ...]:
        return tuple(r for r, _ in self.points)

    @property
    def d(self) -> tuple[float, ...]:
        return tuple(d for _, d in self.points)

    @classmethod
    def from_function(cls, r_values, fn: Callable[[float], float]) -> "DmtCurve":
        return cls(points=tuple((float(r), float(fn(r))) for r in r_values))


def _check_r(r: float) -> None:
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"multiplexing gain r must lie in [0, 1], got {r!r}")


def miso_dmt(m_antennas: int, r: float) -> float:
    """Diversity order m*(1-r) of the fully cooperative m x 1 channel."""
    if m_antennas < 1:
        raise ValueError(f"m_antennas must be >= 1, got {m_antennas}")
    _check_r(r)
    return m_antennas * (1.0 - r)


def parallel_channel_dmt(r: float) -> float:
    """Two independently faded parallel links, each carrying rate r: 2*(1-r)."""
    _check_r(r)
    return 2.0 * (1.0 - r)


def single_relay_exponent_analytic(r: float) -> float:
    """Exact single-relay exponent 2*(1-r) at listen fraction 0.5."""
    _check_r(r)
    return 2.0 * (1.0 - r)


def two_hop_exponent_analytic(n_relays: int, r: float) -> float:
    """Exact two-hop exponent (N+1)*(1-r) under the uniform schedule."""
    if n_relays < 1:
        raise ValueError(f"n_relays must be >= 1, got {n_relays}")
    _check_r(r)
    return (n_relays + 1) * (1.0 - r)


def single_relay_outage_predicate(orders: ExponentVector, r: float, t: float) -> bool:
    """Whether the single-relay cut-set order falls at or below r.

    The order is a_sd + min{t*(a_sr - a_sd)^+, (1-t)*(a_rd - a_sd)^+}; the
    outage set is taken closed so boundary points count as outage.
    """
    if orders.n_relays != 1:
        raise ValueError(f"expected exactly 1 relay, got {orders.n_relays}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"listen fraction t must lie in [0, 1], got {t!r}")
    a_sd = orders.a_sd
    lhs = a_sd + min(
        t * max(orders.a_sr[0] - a_sd, 0.0),
        (1.0 - t) * max(orders.a_rd[0] - a_sd, 0.0),
    )
    return lhs <= r


def two_hop_cut_outage_predicate(orders: ExponentVector, r: float, cut: Cut) -> bool:
    """Whether one cut of the two-hop network is in outage.

    The cut's N+1 crossing links (direct link, relay->destination for omega
    relays, source->relay for the rest) must together have order at most
    (N+1)*r.
    """
    if orders.n_relays != cut.n_relays:
        raise ValueError(
            f"dimension mismatch: orders have {orders.n_relays} relays, cut has {cut.n_relays}"
        )
    n = cut.n_relays
    total = orders.a_sd
    for j in range(n):
        total += orders.a_rd[j] if cut.contains(j) else orders.a_sr[j]
    return total <= (n + 1) * r


def single_relay_outage_region(r: float, t: float) -> RegionPredicate:
    """Vectorized single-relay outage predicate over (k, 3) arrays.

    Columns are (a_sd, a_sr, a_rd); returns a boolean row mask.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"listen fraction t must lie in [0, 1], got {t!r}")

    def predicate(alpha: np.ndarray) -> np.ndarray:
        a_sd = alpha[:, 0]
        relay_in = t * np.maximum(alpha[:, 1] - a_sd, 0.0)
        relay_out = (1.0 - t) * np.maximum(alpha[:, 2] - a_sd, 0.0)
        return a_sd + np.minimum(relay_in, relay_out) <= r

    return predicate


def two_hop_cut_outage_region(n_relays: int, r: float, cut: Cut) -> RegionPredicate:
    """Vectorized per-cut outage predicate over (k, 2N+1) arrays.

    Columns follow the ExponentVector layout (a_sd, a_sr[0..N-1],
    a_rd[0..N-1]); only the cut's crossing links enter the inequality.
    """
    if cut.n_relays != n_relays:
        raise ValueError(
            f"dimension mismatch: cut has {cut.n_relays} relays, expected {n_relays}"
        )
    cols = [0]
    cols += [1 + j for j in range(n_relays) if not cut.contains(j)]
    cols += [1 + n_relays + j for j in range(n_relays) if cut.contains(j)]
    threshold = (n_relays + 1) * r

    def predicate(alpha: np.ndarray) -> np.ndarray:
        return alpha[:, cols].sum(axis=1) <= threshold

    return predicate


def crossing_links_outage_region(n_relays: int, r: float) -> RegionPredicate:
    """Reduced per-cut predicate over just the N+1 crossing-link orders.

    Links not crossing the cut never enter the inequality and sit at order 1
    in the optimum, so minimizing over these N+1 coordinates gives the same
    exponent as the full-dimensional search.
    """
    if n_relays < 1:
        raise ValueError(f"n_relays must be >= 1, got {n_relays}")
    threshold = (n_relays + 1) * r

    def predicate(alpha: np.ndarray) -> np.ndarray:
        return alpha.sum(axis=1) <= threshold

    return predicate


def _unit_grid(step: float) -> np.ndarray:
    """Grid {0, step, 2*step, ...} capped at 1, endpoint-exact when possible."""
    levels = int(math.floor(1.0 / step + 1e-9)) + 1
    if abs((levels - 1) * step - 1.0) < 1e-9:
        return np.linspace(0.0, 1.0, levels)
    return np.arange(levels) * step


def exponent_grid_oracle(
    predicate: RegionPredicate,
    dim: int,
    step: float,
    budget: int = DEFAULT_ORACLE_BUDGET,
    chunk_size: int = 1 << 20,
) -> float:
    """Brute-force min of sum(1 - a_i) over grid points in the outage set.

    `predicate` receives a (k, dim) block of candidate order vectors and
    returns a boolean mask.  Returns +inf when no grid point satisfies the
    predicate ("no outage at this rate").  Work is bounded by `budget`
    predicate-coordinate evaluations (dim * number of grid points); an
    oversized request raises instead of crawling.  Chunking is a memory
    measure only: the minimum is order-independent.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if not 0.0 < step <= 0.25:
        raise ValueError(f"step must lie in (0, 0.25], got {step!r}")
    coords = _unit_grid(step)
    levels = len(coords)
    total = levels**dim
    if dim * total > budget:
        raise ValueError(
            f"budget exceeded: {dim} * {levels}^{dim} = {dim * total} evaluations > {budget}"
        )
    strides = [levels ** (dim - 1 - k) for k in range(dim)]
    best_sum = -math.inf
    for start in range(0, total, chunk_size):
        idx = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
        alpha = np.empty((idx.shape[0], dim), dtype=np.float64)
        for k, stride in enumerate(strides):
            alpha[:, k] = coords[(idx // stride) % levels]
        mask = predicate(alpha)
        if np.any(mask):
            best_sum = max(best_sum, float(alpha[mask].sum(axis=1).max()))
    if best_sum == -math.inf:
        return math.inf
    return dim - best_sum


def optimize_schedule_single(
    r: float,
    t_step: float,
    oracle_step: float = 0.005,
    budget: int = DEFAULT_ORACLE_BUDGET,
) -> tuple[float, float]:
    """Best listen fraction on the grid {0, t_step, ..., 1} by oracle exponent.

    Evaluates the grid oracle of the single-relay outage region at every t
    and returns (t_star, d_star).  Exponent ties (within 1e-9) are broken
    toward the t closest to 0.5, then toward the smaller t.
    """
    _check_r(r)
    if not 0.0 < t_step <= 0.25:
        raise ValueError(f"t_step must lie in (0, 0.25], got {t_step!r}")
    t_grid = _unit_grid(t_step)
    exponents = [
        exponent_grid_oracle(single_relay_outage_region(r, float(t)), 3, oracle_step, budget)
        for t in t_grid
    ]
    d_star = max(exponents)
    tied = [float(t) for t, d in zip(t_grid, exponents) if d >= d_star - _TIE_TOL]
    t_star = min(tied, key=lambda t: (abs(t - 0.5), t))
    return t_star, d_star
