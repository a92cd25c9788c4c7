"""End-to-end stochastic verification of the closed-form link analysis.

Two estimators: the bit error rate of the information branch (build frame,
fade, add noise, partially correlate, equal-gain combine, slice) and the
harvested DC of the energy branch (build frame, fade, serialize, analog
correlate, rectify).

Reproducibility contract: all randomness comes from counter-based Philox
streams keyed by (master_seed, batch_index), work is split into batches
whose sizes depend only on the trial count, and per-batch results are
reduced in batch order.  Estimates are therefore bit-identical for a given
master seed regardless of the worker count.
"""

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .chaos import BURNIN, draw_initial_values
from .channel import ChannelConfig
from .receiver import EhCircuit, ReceiverSplit
from .waveform import MODULATED_KINDS, WaveformKind, WaveformSpec

# Consecutive iterates of the cubic chip map carry a third-moment coupling
# (E{x_k^3 x_{k+1}} = 1/8) that inflates fourth-order statistics of frame
# sums relative to the independent-chip moments used by the closed forms.
# Emitting every second iterate removes all mixed chip moments up to fourth
# order while keeping the chips on a genuine chaotic orbit.
CHIP_STRIDE = 2

# Batches are capped so the harvested-DC standard error can be formed from
# batch means over at least this many batches.
MIN_EH_BATCHES = 30

HARD_BIT_CAP = 10**9


class EhChannelMode(enum.Enum):
    """Whether the K harvesting antennas share one channel draw or fade
    independently.  The closed-form harvested DC factorizes exactly only in
    the common case; the independent mode exists to measure that gap."""

    COMMON_ACROSS_ANTENNAS = "common"
    INDEPENDENT = "independent"


@dataclass
class SimConfig:
    """Everything one simulation run needs, including its master seed."""

    waveform: WaveformSpec
    channel: ChannelConfig
    split: ReceiverSplit
    circuit: EhCircuit
    n_bits: int | None = None
    n_frames: int | None = None
    master_seed: int = 0
    eh_channel_mode: EhChannelMode = EhChannelMode.COMMON_ACROSS_ANTENNAS
    eh_noise: bool = False
    target_relative_ci: float | None = None
    n_workers: int = 1
    batch_size: int = 8192


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    n_trials: int
    ci95: tuple

    def __post_init__(self):
        lo, hi = self.ci95
        if not (lo <= self.value <= hi) or self.stderr < 0:
            raise ValueError("inconsistent estimate")


def philox_stream(master_seed, index):
    """Independent counter-based stream for one batch of trials."""
    key = ((int(master_seed) & 0xFFFFFFFFFFFFFFFF) << 64) | (int(index) & 0xFFFFFFFFFFFFFFFF)
    return np.random.Generator(np.random.Philox(key=key))


def _run_ordered(worker, n_batches, n_workers):
    """Yield worker(0..n_batches-1) results in index order.

    With several workers, batches run concurrently but are consumed in
    order, so any early-stop decision sees the same prefix as a serial run.
    """
    if n_workers <= 1:
        for b in range(n_batches):
            yield worker(b)
        return
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        pending = {}
        submitted = 0
        for b in range(n_batches):
            while submitted < n_batches and len(pending) < 2 * n_workers:
                pending[submitted] = pool.submit(worker, submitted)
                submitted += 1
            yield pending.pop(b).result()


def _draw_chips(rng, n_frames, n_chips):
    x0 = draw_initial_values(rng, n_frames)
    return kernels.chebyshev_orbit(x0, BURNIN, n_chips, CHIP_STRIDE)


def _assemble_frames(spec, chips, bits):
    """Batch frame assembly; rows match waveform.build_frame layouts."""
    if spec.kind is WaveformKind.UNMODULATED:
        return chips
    if spec.kind is WaveformKind.REPEATED:
        return np.repeat(chips, spec.beta + 1, axis=1)
    if spec.kind is WaveformKind.WPT_OPT_SRDCSK:
        data = bits[:, None] * np.repeat(chips, spec.beta, axis=1)
        return np.ascontiguousarray(np.concatenate((chips, data), axis=1))
    data = bits[:, None] * np.tile(chips, (1, spec.zeta))
    return np.ascontiguousarray(np.concatenate((chips, data), axis=1))


def _fading_draw(rng, cfg, size):
    """alpha coefficients of shape size + (L,): sqrt of scaled Gamma power."""
    g = np.asarray(cfg.gains, dtype=float)
    power = rng.gamma(cfg.m, 1.0, size=size + (cfg.n_paths,)) * (g / cfg.m)
    return np.sqrt(power)


def _check_common(config):
    if config.waveform.chip_duration != 1.0:
        raise ValueError("simulations assume a unit chip duration")
    if config.channel.delay_vector().max(initial=0) >= config.waveform.frame_length:
        raise ValueError("path delay exceeds the frame length")


def simulate_ber(config):
    """Monte Carlo BER estimate with binomial standard error.

    Per bit: draw the data bit, build the frame from fresh chips, draw the
    channel (fresh per frame, independent across the IT antennas),
    propagate with noise, form the per-antenna decision statistics,
    equal-gain combine, slice and compare.

    Runs exactly n_bits trials, or until the relative CI target is met
    when one is set (n_bits then acts as the budget, capped at 10^9 bits;
    an unmet target at the cap is an error).

    Multipath note: the closed-form fading BER models paths that
    decorrelate at the correlator, which needs a delay profile with
    distinct chip delays (e.g. (0, 1)); an all-zero profile makes the
    paths add coherently into a single amplitude, which the closed form
    does not describe.
    """
    spec = config.waveform
    cfg = config.channel
    if spec.kind not in MODULATED_KINDS:
        raise ValueError("BER simulation needs a data-bearing waveform")
    if config.split.n_it < 1:
        raise ValueError("BER simulation needs at least one IT antenna")
    _check_common(config)

    budget = config.n_bits if config.target_relative_ci is None else (
        config.n_bits or HARD_BIT_CAP
    )
    if budget is None or budget < 1:
        raise ValueError("n_bits must be a positive trial count")
    budget = min(budget, HARD_BIT_CAP)

    m_ant = config.split.n_it
    phi_eff = spec.reference_length
    zeta = spec.zeta
    frame_len = spec.frame_length
    amp = np.sqrt(spec.transmit_power * cfg.path_gain)
    noise_scale = np.sqrt(cfg.noise_psd / 2.0)
    use_noise = cfg.noise_psd > 0
    delays = cfg.delay_vector() if cfg.fading else np.zeros(1, dtype=np.int64)

    n_batches = -(-budget // config.batch_size)
    dummy = np.zeros((1, 1, 1))

    def worker(b):
        count = min(config.batch_size, budget - b * config.batch_size)
        rng = philox_stream(config.master_seed, b)
        bits = rng.integers(0, 2, count) * 2.0 - 1.0
        chips = _draw_chips(rng, count, phi_eff)
        frames = _assemble_frames(spec, chips, bits)
        if cfg.fading:
            alphas = _fading_draw(rng, cfg, (count, m_ant))
        else:
            alphas = np.ones((count, m_ant, 1))
        noise = (
            rng.standard_normal((count, m_ant, frame_len)) * noise_scale
            if use_noise
            else dummy
        )
        delta = kernels.ber_delta_chain(
            frames, alphas, delays, amp, noise, use_noise, phi_eff, zeta
        )
        decided = np.where(delta.sum(axis=1) >= 0.0, 1.0, -1.0)
        return count, int(np.count_nonzero(decided != bits))

    trials = 0
    errors = 0
    target = config.target_relative_ci
    for count, errs in _run_ordered(worker, n_batches, config.n_workers):
        trials += count
        errors += errs
        if target is not None and errors > 0:
            p = errors / trials
            se = np.sqrt(p * (1.0 - p) / trials)
            if se / p <= target:
                break
    else:
        if target is not None:
            p = errors / trials if trials else 0.0
            se = np.sqrt(p * (1.0 - p) / trials) if trials else np.inf
            if errors == 0 or se / p > target:
                raise RuntimeError(
                    f"relative CI target {target} not reached within {trials} bits"
                )

    p = errors / trials
    se = float(np.sqrt(p * (1.0 - p) / trials))
    lo = max(0.0, p - 1.96 * se)
    hi = min(1.0, p + 1.96 * se)
    return Estimate(value=p, stderr=se, n_trials=trials, ci95=(lo, hi))


def simulate_zdc(config):
    """Monte Carlo harvested-DC estimate via the full receive chain.

    Per frame: draw the data bit (modulated families only), build the
    frame, draw the channel per the EH channel mode, propagate (noiseless
    by default: the harvester's noise pickup is negligible and off unless
    eh_noise is set), sum every received chip across the K antennas, and
    accumulate second and fourth moments of that correlator output.  The
    final value plugs the empirical moments into the rectifier polynomial;
    the standard error comes from batch means over >= 30 batches.
    """
    spec = config.waveform
    cfg = config.channel
    circuit = config.circuit
    if config.split.n_eh < 1:
        raise ValueError("harvesting simulation needs at least one EH antenna")
    if config.n_frames is None or config.n_frames < 1:
        raise ValueError("n_frames must be a positive trial count")
    if config.n_frames < MIN_EH_BATCHES:
        raise ValueError(f"need at least {MIN_EH_BATCHES} frames for batch means")
    _check_common(config)

    k_ant = config.split.n_eh
    modulated = spec.kind in MODULATED_KINDS
    n_chips = spec.fresh_chips_per_frame
    frame_len = spec.frame_length
    amp = np.sqrt(spec.transmit_power * cfg.path_gain)
    noise_scale = np.sqrt(cfg.noise_psd / 2.0)
    use_noise = bool(config.eh_noise) and cfg.noise_psd > 0
    delays = cfg.delay_vector() if cfg.fading else np.zeros(1, dtype=np.int64)

    n = config.n_frames
    n_batches = max(MIN_EH_BATCHES, -(-n // config.batch_size))
    base, extra = divmod(n, n_batches)
    counts = [base + 1] * extra + [base] * (n_batches - extra)
    dummy = np.zeros((1, 1, 1))

    def worker(b):
        count = counts[b]
        rng = philox_stream(config.master_seed, b)
        bits = rng.integers(0, 2, count) * 2.0 - 1.0 if modulated else None
        chips = _draw_chips(rng, count, n_chips)
        frames = _assemble_frames(spec, chips, bits)
        if not cfg.fading:
            alphas = np.ones((count, k_ant, 1))
        elif config.eh_channel_mode is EhChannelMode.COMMON_ACROSS_ANTENNAS:
            alphas = np.repeat(_fading_draw(rng, cfg, (count, 1)), k_ant, axis=1)
        else:
            alphas = _fading_draw(rng, cfg, (count, k_ant))
        noise = (
            rng.standard_normal((count, k_ant, frame_len)) * noise_scale
            if use_noise
            else dummy
        )
        s_ac = kernels.eh_correlate_chain(frames, alphas, delays, amp, noise, use_noise)
        return count, float(np.sum(s_ac**2)), float(np.sum(s_ac**4))

    total = 0
    sum2 = 0.0
    sum4 = 0.0
    batch_z = []
    for count, s2, s4 in _run_ordered(worker, n_batches, config.n_workers):
        total += count
        sum2 += s2
        sum4 += s4
        batch_z.append(
            circuit.k2 * circuit.r_ant * s2 / count
            + circuit.k4 * circuit.r_ant**2 * s4 / count
        )

    value = (
        circuit.k2 * circuit.r_ant * sum2 / total
        + circuit.k4 * circuit.r_ant**2 * sum4 / total
    )
    se = float(np.std(batch_z, ddof=1) / np.sqrt(len(batch_z)))
    return Estimate(
        value=float(value),
        stderr=se,
        n_trials=total,
        ci95=(value - 1.96 * se, value + 1.96 * se),
    )
