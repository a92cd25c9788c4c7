"""Frequency-selective Nakagami-m channel: sampling and propagation.

Each of the L paths at each antenna fades independently with a Nakagami-m
amplitude of power gain Omega_i (the gains sum to one); the link also has
r^-a large-scale loss and real AWGN of variance N0/2 per chip.  With the
default all-zero delay profile the paths add coherently into a single
amplitude gain per antenna; with a nonzero profile each path contributes a
chip-shifted copy of the frame (zero-padded head).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln


@dataclass(frozen=True)
class ChannelConfig:
    """Fading statistics plus link geometry and noise level."""

    m: float = 1.0
    gains: tuple = (1.0,)
    distance: float = 1.0
    pathloss_exp: float = 2.0
    noise_psd: float = 0.0
    delays: tuple | None = None
    fading: bool = True

    def __post_init__(self):
        if self.fading and self.m < 1.0:
            raise ValueError("fading severity m must be >= 1")
        g = np.asarray(self.gains, dtype=float)
        if g.ndim != 1 or g.size < 1 or (g < 0).any():
            raise ValueError("gains must be a nonempty vector of nonnegative reals")
        if abs(g.sum() - 1.0) > 1e-12:
            raise ValueError("path power gains must sum to 1")
        if self.distance <= 0 or self.pathloss_exp <= 0:
            raise ValueError("distance and pathloss exponent must be > 0")
        if self.noise_psd < 0:
            raise ValueError("noise PSD must be >= 0")
        if self.delays is not None:
            d = np.asarray(self.delays, dtype=int)
            if d.size != g.size:
                raise ValueError("delays must have one entry per path")
            if d[0] != 0 or (np.diff(d) < 0).any():
                raise ValueError("delays must be nondecreasing with the first one 0")

    @classmethod
    def awgn(cls, distance=1.0, pathloss_exp=2.0, noise_psd=0.0):
        """Pure-AWGN link: single unit path, no fading."""
        return cls(
            m=1.0,
            gains=(1.0,),
            distance=distance,
            pathloss_exp=pathloss_exp,
            noise_psd=noise_psd,
            fading=False,
        )

    @property
    def n_paths(self):
        return len(self.gains)

    @property
    def path_gain(self):
        """Large-scale received-power factor r^-a."""
        return self.distance**-self.pathloss_exp

    def delay_vector(self):
        if self.delays is None:
            return np.zeros(self.n_paths, dtype=np.int64)
        return np.asarray(self.delays, dtype=np.int64)


@dataclass(frozen=True)
class ChannelRealization:
    """One drawn coefficient matrix, shape (L paths, N antennas)."""

    alpha: np.ndarray

    @property
    def n_antennas(self):
        return self.alpha.shape[1]


def nakagami_moment(n, m, omega):
    """n-th raw moment of a Nakagami-m amplitude with power gain omega.

    Gamma(m + n/2) / Gamma(m) * (omega/m)^(n/2); evaluated through
    log-gamma so large m stays finite.
    """
    if m < 1.0:
        raise ValueError("m must be >= 1")
    if omega <= 0:
        raise ValueError("omega must be > 0")
    return float(np.exp(gammaln(m + n / 2.0) - gammaln(m)) * (omega / m) ** (n / 2.0))


def sample_channel(config, n_antennas, rng):
    """Draw one channel realization for ``n_antennas`` antennas.

    Each coefficient is sqrt of a Gamma(m, Omega_i/m) variate, which is
    exactly Nakagami(m, Omega_i); the Gamma sampler handles non-integer
    shapes.  Without fading every coefficient is 1 on a single path.
    """
    if n_antennas < 1:
        raise ValueError("need at least one antenna")
    if not config.fading:
        return ChannelRealization(alpha=np.ones((1, n_antennas)))
    g = np.asarray(config.gains, dtype=float)
    power = rng.gamma(config.m, 1.0, size=(config.n_paths, n_antennas))
    power *= (g / config.m)[:, None]
    return ChannelRealization(alpha=np.sqrt(power))


def propagate(frame, realization, config, rng, noise_enabled=True, transmit_power=1.0):
    """Push one frame through the channel; returns (N antennas, chips).

    With all-zero delays every antenna sees the frame scaled by
    sqrt(P_t * r^-a) times its coherent path-amplitude sum; nonzero delays
    produce per-path chip-shifted copies with a zero-padded head.  AWGN of
    variance N0/2 per chip is added per antenna when enabled.
    """
    samples = getattr(frame, "samples", frame)
    samples = np.asarray(samples, dtype=float)
    n_chips = samples.shape[0]
    delays = config.delay_vector()
    if config.fading and delays.size != config.n_paths:
        raise ValueError("delay profile does not match the path count")
    if delays.size != realization.alpha.shape[0]:
        # no-fading realizations collapse to a single unit path
        delays = np.zeros(realization.alpha.shape[0], dtype=np.int64)
    if (delays >= n_chips).any():
        raise ValueError("path delay exceeds the frame length")

    amp = np.sqrt(transmit_power * config.path_gain)
    received = np.zeros((realization.n_antennas, n_chips))
    for i, tau in enumerate(delays):
        if tau == 0:
            shifted = samples
        else:
            shifted = np.zeros_like(samples)
            shifted[tau:] = samples[: n_chips - tau]
        received += realization.alpha[i][:, None] * shifted[None, :]
    received *= amp
    if noise_enabled and config.noise_psd > 0:
        received += rng.standard_normal(received.shape) * np.sqrt(config.noise_psd / 2.0)
    return received
