"""Half-duplex relay channel analysis: cut-set bounds, outage Monte Carlo,
and diversity-multiplexing exponents."""

from ._version import __version__
from .channel import (
    ChannelRealization,
    ExponentVector,
    exponential_order,
    orders_from_realization,
    sample_gain_arrays,
    sample_realization,
)
from .cutset import (
    Cut,
    NetworkState,
    Schedule,
    SingleRelaySchedule,
    TwoHopSchedule,
    cut_average_lower_bound,
    cut_flow_lower_bound,
    enumerate_cuts,
    enumerate_states,
    highsnr_cutset_order,
    link_capacity_bits,
    network_min_cut_lower_bound,
    single_relay_bound_array,
    single_relay_cutset_bits,
    two_hop_bound_array,
    z_channel_flow_bits,
)
from .dmt import (
    DmtCurve,
    crossing_links_outage_region,
    exponent_grid_oracle,
    miso_dmt,
    optimize_schedule_single,
    parallel_channel_dmt,
    single_relay_exponent_analytic,
    single_relay_outage_predicate,
    single_relay_outage_region,
    two_hop_cut_outage_predicate,
    two_hop_cut_outage_region,
    two_hop_exponent_analytic,
)
from .lemmas import (
    CheckKind,
    VerificationReport,
    check_avg_lemma,
    check_cut_avg_consistency,
    check_tchebychef,
    run_randomized_suite,
)
from .montecarlo import (
    BoundModel,
    OutageRow,
    OutageTable,
    RunConfig,
    confidence_interval,
    db_to_linear,
    estimate_diversity_slope,
    estimate_outage,
    outage_event,
)
from .rng import GENERATOR_NAME, RandomStream

__all__ = [
    "__version__",
    "GENERATOR_NAME",
    "RandomStream",
    "ChannelRealization",
    "ExponentVector",
    "exponential_order",
    "orders_from_realization",
    "sample_gain_arrays",
    "sample_realization",
    "Cut",
    "NetworkState",
    "Schedule",
    "SingleRelaySchedule",
    "TwoHopSchedule",
    "cut_average_lower_bound",
    "cut_flow_lower_bound",
    "enumerate_cuts",
    "enumerate_states",
    "highsnr_cutset_order",
    "link_capacity_bits",
    "network_min_cut_lower_bound",
    "single_relay_bound_array",
    "single_relay_cutset_bits",
    "two_hop_bound_array",
    "z_channel_flow_bits",
    "DmtCurve",
    "crossing_links_outage_region",
    "exponent_grid_oracle",
    "miso_dmt",
    "optimize_schedule_single",
    "parallel_channel_dmt",
    "single_relay_exponent_analytic",
    "single_relay_outage_predicate",
    "single_relay_outage_region",
    "two_hop_cut_outage_predicate",
    "two_hop_cut_outage_region",
    "two_hop_exponent_analytic",
    "CheckKind",
    "VerificationReport",
    "check_avg_lemma",
    "check_cut_avg_consistency",
    "check_tchebychef",
    "run_randomized_suite",
    "BoundModel",
    "OutageRow",
    "OutageTable",
    "RunConfig",
    "confidence_interval",
    "db_to_linear",
    "estimate_diversity_slope",
    "estimate_outage",
    "outage_event",
]
