"""Transmit frame construction for every waveform family.

Five frame layouts are supported, all built from chaotic chips:

* DCSK            reference of beta chips, then the same beta chips times
                  the data bit (frame length 2*beta);
* SRDCSK          short reference of phi chips, then zeta = beta/phi tiled
                  copies of it times the data bit (length phi+beta);
* WPT_OPT_SRDCSK  the harvesting-optimal special case phi=1, zeta=beta
                  (length beta+1);
* UNMODULATED     beta+1 fresh chips, no data (length fixed to beta+1 for
                  a fair energy comparison with the other families);
* REPEATED        one chip copied beta+1 times, no data.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .chaos import chaotic_moment


class WaveformKind(enum.Enum):
    DCSK = "dcsk"
    SRDCSK = "srdcsk"
    WPT_OPT_SRDCSK = "wpt-opt-srdcsk"
    UNMODULATED = "unmodulated"
    REPEATED = "repeated"


MODULATED_KINDS = frozenset(
    {WaveformKind.DCSK, WaveformKind.SRDCSK, WaveformKind.WPT_OPT_SRDCSK}
)


@dataclass(frozen=True)
class WaveformSpec:
    """Frame-family parameters: spreading factor, reference length, power."""

    kind: WaveformKind
    beta: int
    phi: int | None = None
    transmit_power: float = 1.0
    chip_duration: float = 1.0

    def __post_init__(self):
        if self.beta < 1:
            raise ValueError("beta must be a positive integer")
        if self.transmit_power < 0:
            raise ValueError("transmit_power must be >= 0")
        if self.chip_duration <= 0:
            raise ValueError("chip_duration must be > 0")
        if self.kind is WaveformKind.SRDCSK:
            if self.phi is None:
                raise ValueError("SRDCSK requires a reference length phi")
            if not (1 <= self.phi <= self.beta):
                raise ValueError("SRDCSK requires 1 <= phi <= beta")
            if self.beta % self.phi != 0:
                raise ValueError("SRDCSK requires phi to divide beta")
        elif self.kind is WaveformKind.WPT_OPT_SRDCSK:
            if self.phi not in (None, 1):
                raise ValueError("WPT_OPT_SRDCSK fixes phi = 1")
        elif self.phi is not None and self.kind is WaveformKind.DCSK:
            if self.phi != self.beta:
                raise ValueError("DCSK has an implicit reference length of beta")

    @property
    def reference_length(self):
        """Chips in the unmodulated frame head (None for data-free frames)."""
        if self.kind is WaveformKind.DCSK:
            return self.beta
        if self.kind is WaveformKind.SRDCSK:
            return self.phi
        if self.kind is WaveformKind.WPT_OPT_SRDCSK:
            return 1
        return None

    @property
    def zeta(self):
        """Number of data replicas of the reference block."""
        ref = self.reference_length
        if ref is None:
            raise ValueError(f"{self.kind.name} frames carry no data replicas")
        return self.beta // ref

    @property
    def frame_length(self):
        if self.kind is WaveformKind.DCSK:
            return 2 * self.beta
        if self.kind is WaveformKind.SRDCSK:
            return self.phi + self.beta
        return self.beta + 1

    @property
    def fresh_chips_per_frame(self):
        """Chips consumed from the chaotic basis by one frame."""
        if self.kind is WaveformKind.UNMODULATED:
            return self.beta + 1
        if self.kind in (WaveformKind.REPEATED, WaveformKind.WPT_OPT_SRDCSK):
            return 1
        return self.reference_length


@dataclass(frozen=True)
class SampleFrame:
    """One realized transmit frame."""

    samples: np.ndarray
    data_bit: int | None
    frame_index: int


def build_frame(spec, data_bit, basis, frame_index=0):
    """Assemble one transmit frame from the chaotic basis.

    Frame ``l`` reads its fresh chips from the basis window starting at
    ``l * frame_length`` (one long basis per transmission, fresh chaos for
    every frame).  ``data_bit`` must be +-1 for the modulated families and
    None otherwise.
    """
    modulated = spec.kind in MODULATED_KINDS
    if modulated:
        if data_bit not in (-1, 1):
            raise ValueError(f"{spec.kind.name} needs a data bit of +1 or -1")
    elif data_bit is not None:
        raise ValueError(f"{spec.kind.name} carries no data bit")

    samples = getattr(basis, "samples", basis)
    samples = np.asarray(samples, dtype=float)
    start = frame_index * spec.frame_length
    need = spec.fresh_chips_per_frame
    if start + need > samples.shape[0]:
        raise ValueError(
            f"basis too short: frame {frame_index} needs chips "
            f"[{start}, {start + need}) of {samples.shape[0]}"
        )
    chips = samples[start : start + need]

    if spec.kind is WaveformKind.UNMODULATED:
        frame = chips.copy()
    elif spec.kind is WaveformKind.REPEATED:
        frame = np.full(spec.beta + 1, chips[0])
    elif spec.kind is WaveformKind.WPT_OPT_SRDCSK:
        frame = np.concatenate(([chips[0]], np.full(spec.beta, data_bit * chips[0])))
    else:  # DCSK or SRDCSK: reference head then tiled modulated copies
        frame = np.concatenate((chips, data_bit * np.tile(chips, spec.zeta)))
    return SampleFrame(samples=frame, data_bit=data_bit, frame_index=frame_index)


def bit_energy(spec):
    """Average transmitted energy per information bit.

    Equals transmit power times chip duration times the frame length times
    the chip second moment.  Defined only for the data-bearing families.
    """
    if spec.kind not in MODULATED_KINDS:
        raise ValueError(f"{spec.kind.name} carries no information bits")
    return (
        spec.transmit_power * spec.chip_duration * spec.frame_length * chaotic_moment(2)
    )
