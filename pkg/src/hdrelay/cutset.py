"""Finite-SNR cut-set bounds for half-duplex relay networks.

Two bound families are implemented:

* the closed-form upper bound on the capacity of the single-relay channel
  under a fixed listen fraction t (minimum of the broadcast cut {S} and
  the cooperation cut {S,R}), and
* an achievability-side lower bound for two-hop networks of N
  non-interfering relays, obtained by reducing each cut in each
  listen/transmit state to a two-user Z-channel and averaging the
  resulting log-det flows over the schedule.

All capacities are in bits per symbol (base-2 logs).  The single-relay
expression is an upper bound while the multi-relay expression is a lower
bound; the two coincide in diversity-multiplexing behaviour, which is what
the rest of the package extracts from them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, ExponentVector

MAX_RELAYS = 12  # min-cut evaluation walks 2^N cuts x 2^N states

WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class SingleRelaySchedule:
    """Listen fraction t: the relay listens t of the time, transmits 1-t."""

    t: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"listen fraction t must lie in [0, 1], got {self.t!r}")


@dataclass(frozen=True)
class TwoHopSchedule:
    """Time fractions over the 2^N listen/transmit states of N relays.

    ``weights[m]`` is the fraction of time spent in state m, where bit j of
    m set means relay j listens.  Weights are nonnegative and sum to 1.
    """

    n_relays: int
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n_relays <= MAX_RELAYS:
            raise ValueError(f"n_relays must lie in [1, {MAX_RELAYS}], got {self.n_relays}")
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.weights) != 1 << self.n_relays:
            raise ValueError(
                f"need 2^{self.n_relays} weights, got {len(self.weights)}"
            )
        if any(w < 0 for w in self.weights):
            raise ValueError("schedule weights must be >= 0")
        total = math.fsum(self.weights)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"schedule weights must sum to 1, got {total!r}")

    @classmethod
    def uniform(cls, n_relays: int) -> "TwoHopSchedule":
        """Equal time 2^-N in every state."""
        m = 1 << n_relays
        return cls(n_relays=n_relays, weights=(1.0 / m,) * m)


Schedule = SingleRelaySchedule | TwoHopSchedule


@dataclass(frozen=True)
class NetworkState:
    """One listen/transmit assignment: bit j set means relay j listens."""

    listening_mask: int
    n_relays: int

    def __post_init__(self) -> None:
        if not 0 <= self.listening_mask < (1 << self.n_relays):
            raise ValueError(
                f"listening_mask {self.listening_mask} out of range for {self.n_relays} relays"
            )

    def listens(self, relay: int) -> bool:
        return bool(self.listening_mask >> relay & 1)


@dataclass(frozen=True)
class Cut:
    """Node partition: bit j of omega_mask set means relay j sits with the source.

    The source is implicitly on the omega side, the destination on the
    complement.  In a given state m, the relays that matter are those whose
    cut-crossing link is active: omega relays that transmit (relay ->
    destination crosses) and complement relays that listen (source -> relay
    crosses).
    """

    omega_mask: int
    n_relays: int

    def __post_init__(self) -> None:
        if not 0 <= self.omega_mask < (1 << self.n_relays):
            raise ValueError(
                f"omega_mask {self.omega_mask} out of range for {self.n_relays} relays"
            )

    def contains(self, relay: int) -> bool:
        return bool(self.omega_mask >> relay & 1)


def link_capacity_bits(g, snr):
    """Point-to-point capacity log2(1 + snr * g) of a link with gain g."""
    return np.log2(1.0 + snr * np.asarray(g, dtype=np.float64))


def single_relay_bound_array(g_sd, g_sr, g_rd, snr: float, t: float) -> np.ndarray:
    """Vectorized single-relay cut-set upper bound over gain arrays.

    Broadcast cut: the relay listens a fraction t, during which the source
    reaches relay and destination jointly (power sum of gains); the rest of
    the time only the direct link carries information.  Cooperation cut:
    while the relay transmits (fraction 1-t) the relay and source amplitudes
    add coherently toward the destination; while it listens only the direct
    link crosses.  The bound is the minimum of the two cuts.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"listen fraction t must lie in [0, 1], got {t!r}")
    if snr <= 0:
        raise ValueError(f"snr must be > 0, got {snr!r}")
    g_sd = np.asarray(g_sd, dtype=np.float64)
    g_sr = np.asarray(g_sr, dtype=np.float64)
    g_rd = np.asarray(g_rd, dtype=np.float64)
    direct = link_capacity_bits(g_sd, snr)
    broadcast_cut = t * link_capacity_bits(g_sr + g_sd, snr) + (1.0 - t) * direct
    miso_gain = (np.sqrt(g_rd) + np.sqrt(g_sd)) ** 2
    cooperation_cut = (1.0 - t) * link_capacity_bits(miso_gain, snr) + t * direct
    return np.minimum(broadcast_cut, cooperation_cut)


def single_relay_cutset_bits(realization: ChannelRealization, snr: float, t: float) -> float:
    """Cut-set upper bound in bits/symbol for a single-relay realization."""
    if realization.n_relays != 1:
        raise ValueError(f"expected exactly 1 relay, got {realization.n_relays}")
    return float(
        single_relay_bound_array(
            realization.g_sd, realization.g_sr[0], realization.g_rd[0], snr, t
        )
    )


def highsnr_cutset_order(orders: ExponentVector, t: float) -> float:
    """High-SNR exponential order of the single-relay cut-set bound.

    Normalizing the bound by log2(snr) and letting snr grow, power sums and
    coherent amplitude sums both collapse to the per-link maximum, leaving

        min{ a_sd + t*(a_sr - a_sd)^+ , a_sd + (1-t)*(a_rd - a_sd)^+ }.
    """
    if orders.n_relays != 1:
        raise ValueError(f"expected exactly 1 relay, got {orders.n_relays}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"listen fraction t must lie in [0, 1], got {t!r}")
    a_sd = orders.a_sd
    gain_sr = max(orders.a_sr[0] - a_sd, 0.0)
    gain_rd = max(orders.a_rd[0] - a_sd, 0.0)
    return a_sd + min(t * gain_sr, (1.0 - t) * gain_rd)


def z_channel_flow_bits(g_sd, g_sr_best, g_rd_best, snr: float):
    """Log-det flow of the upper-triangular two-user sub-channel.

    For the 2x2 matrix with rows (h_rd*, h_sd) and (0, h_sr*) the
    determinant of I + snr*H*H^T expands to

        1 + snr*(g_rd* + g_sd + g_sr*) + snr^2 * g_rd* * g_sr*,

    whose log2 dominates both the direct link alone and the product of the
    two relay hops.
    """
    if snr <= 0:
        raise ValueError(f"snr must be > 0, got {snr!r}")
    g_sd = np.asarray(g_sd, dtype=np.float64)
    g_sr = np.asarray(g_sr_best, dtype=np.float64)
    g_rd = np.asarray(g_rd_best, dtype=np.float64)
    if np.any(g_sd < 0) or np.any(g_sr < 0) or np.any(g_rd < 0):
        raise ValueError("gains must be >= 0")
    det = 1.0 + snr * (g_rd + g_sd + g_sr) + snr * snr * g_rd * g_sr
    out = np.log2(det)
    if out.ndim == 0:
        return float(out)
    return out


def enumerate_states(n_relays: int) -> list[NetworkState]:
    """All 2^N listen/transmit states, masks ascending."""
    if not 1 <= n_relays <= MAX_RELAYS:
        raise ValueError(f"n_relays must lie in [1, {MAX_RELAYS}], got {n_relays}")
    return [NetworkState(m, n_relays) for m in range(1 << n_relays)]


def enumerate_cuts(n_relays: int) -> list[Cut]:
    """All 2^N source-side relay subsets, masks ascending."""
    if not 1 <= n_relays <= MAX_RELAYS:
        raise ValueError(f"n_relays must lie in [1, {MAX_RELAYS}], got {n_relays}")
    return [Cut(m, n_relays) for m in range(1 << n_relays)]


def _check_dims(realization: ChannelRealization, n_relays: int, what: str) -> None:
    if realization.n_relays != n_relays:
        raise ValueError(
            f"dimension mismatch: realization has {realization.n_relays} relays, {what} has {n_relays}"
        )


def cut_flow_lower_bound(
    realization: ChannelRealization,
    snr: float,
    schedule: TwoHopSchedule,
    cut: Cut,
) -> float:
    """Schedule-weighted Z-channel flow across one cut, in bits/symbol.

    Per state, the flow is max{n_sd, best relay->destination link among
    omega relays currently transmitting + best source->relay link among
    complement relays currently listening}; a side with no active relay
    contributes 0, so the state degrades to the surviving terms.
    """
    _check_dims(realization, schedule.n_relays, "schedule")
    if cut.n_relays != schedule.n_relays:
        raise ValueError(
            f"dimension mismatch: cut has {cut.n_relays} relays, schedule has {schedule.n_relays}"
        )
    n = schedule.n_relays
    snr = float(snr)
    n_sd = float(link_capacity_bits(realization.g_sd, snr))
    n_sr = [float(link_capacity_bits(g, snr)) for g in realization.g_sr]
    n_rd = [float(link_capacity_bits(g, snr)) for g in realization.g_rd]
    total = 0.0
    for state_mask, weight in enumerate(schedule.weights):
        if weight == 0.0:
            continue
        # omega relays transmitting in this state
        v_mask = cut.omega_mask & ~state_mask
        # complement relays listening in this state
        w_mask = ~cut.omega_mask & state_mask & ((1 << n) - 1)
        best_rd = max((n_rd[j] for j in range(n) if v_mask >> j & 1), default=0.0)
        best_sr = max((n_sr[j] for j in range(n) if w_mask >> j & 1), default=0.0)
        total += weight * max(n_sd, best_rd + best_sr)
    return total


def network_min_cut_lower_bound(
    realization: ChannelRealization, snr: float, schedule: TwoHopSchedule
) -> float:
    """Capacity lower bound: minimum cut flow over all 2^N cuts."""
    return min(
        cut_flow_lower_bound(realization, snr, schedule, cut)
        for cut in enumerate_cuts(schedule.n_relays)
    )


def cut_average_lower_bound(realization: ChannelRealization, snr: float, cut: Cut) -> float:
    """Average capacity of the N+1 links crossing the cut.

    Crossing links are source->destination, relay->destination for omega
    relays, and source->relay for complement relays.  Under the uniform
    schedule the cut flow is never below this average.
    """
    _check_dims(realization, cut.n_relays, "cut")
    n = cut.n_relays
    snr = float(snr)
    total = float(link_capacity_bits(realization.g_sd, snr))
    for j in range(n):
        if cut.contains(j):
            total += float(link_capacity_bits(realization.g_rd[j], snr))
        else:
            total += float(link_capacity_bits(realization.g_sr[j], snr))
    return total / (n + 1)


def two_hop_bound_array(
    g_sd: np.ndarray,
    g_sr: np.ndarray,
    g_rd: np.ndarray,
    snr: float,
    schedule: TwoHopSchedule,
) -> np.ndarray:
    """Vectorized min-cut lower bound over a batch of realizations.

    g_sd has shape (T,), g_sr and g_rd shape (T, N).  Row i equals
    ``network_min_cut_lower_bound`` on realization i; the implementation is
    independent of the scalar one (masked column maxima instead of per-state
    python loops over relays), which the tests exploit as a cross-check.
    """
    n = schedule.n_relays
    g_sr = np.asarray(g_sr, dtype=np.float64)
    g_rd = np.asarray(g_rd, dtype=np.float64)
    if g_sr.shape[1] != n or g_rd.shape[1] != n:
        raise ValueError(
            f"dimension mismatch: gain arrays have {g_sr.shape[1]} relays, schedule has {n}"
        )
    if snr <= 0:
        raise ValueError(f"snr must be > 0, got {snr!r}")
    trials = g_sr.shape[0]
    n_sd = link_capacity_bits(np.asarray(g_sd, dtype=np.float64), snr)
    n_sr = link_capacity_bits(g_sr, snr)
    n_rd = link_capacity_bits(g_rd, snr)
    zeros = np.zeros(trials, dtype=np.float64)

    def masked_max(table: np.ndarray, mask: int) -> np.ndarray:
        cols = [j for j in range(n) if mask >> j & 1]
        if not cols:
            return zeros
        return table[:, cols].max(axis=1)

    full = (1 << n) - 1
    best: np.ndarray | None = None
    for omega in range(1 << n):
        value = np.zeros(trials, dtype=np.float64)
        for state, weight in enumerate(schedule.weights):
            if weight == 0.0:
                continue
            flow = masked_max(n_rd, omega & ~state) + masked_max(n_sr, ~omega & state & full)
            value += weight * np.maximum(n_sd, flow)
        best = value if best is None else np.minimum(best, value)
    assert best is not None
    return best
