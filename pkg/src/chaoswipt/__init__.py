"""Chaotic-waveform SWIPT link toolkit.

Generates DCSK-family chaotic frames, pushes them through a
frequency-selective Nakagami-m channel into a multi-antenna receiver that
splits its antennas between information detection and energy harvesting,
and cross-checks the closed-form BER / harvested-DC / trade-off-region
analysis by Monte Carlo.
"""

from .analysis import (
    LinkBudget,
    QuadratureError,
    RegionPoint,
    RegionResult,
    ber_awgn,
    ber_fading,
    channel_factors,
    decision_moments,
    divisors,
    gaps,
    lambda_factor,
    phi_opt,
    region,
    required_antennas,
    zdc_repeated,
    zdc_srdcsk,
    zdc_unmodulated,
)
from .channel import ChannelConfig, ChannelRealization, nakagami_moment, propagate, sample_channel
from .chaos import (
    ChaoticSequence,
    chaotic_moment,
    generate_sequence,
    invariant_cdf,
    invariant_pdf,
    iterate_map,
)
from .montecarlo import (
    EhChannelMode,
    Estimate,
    SimConfig,
    simulate_ber,
    simulate_zdc,
)
from .receiver import (
    EhCircuit,
    ReceiverSplit,
    egc_detect,
    eh_correlate,
    it_decision_statistic,
    rectify,
)
from .waveform import SampleFrame, WaveformKind, WaveformSpec, bit_energy, build_frame

__version__ = "0.1.0"
