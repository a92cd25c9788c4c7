"""Receiver-side processing for both antenna modes.

Information branch: each antenna partially correlates the zeta data blocks
of a frame against its reference head, the per-antenna statistics are
equal-gain combined, and the sign decides the bit.  Harvesting branch: the
selected antennas feed a lossless serializer into an analog correlator
(one long sum over all chips and antennas) whose output drives a
polynomial rectifier.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ReceiverSplit:
    """How the N antennas divide between information (M) and harvesting (K)."""

    n_total: int
    n_it: int
    n_eh: int

    def __post_init__(self):
        if self.n_total < 1 or self.n_it < 0 or self.n_eh < 0:
            raise ValueError("antenna counts must be nonnegative with N >= 1")
        if self.n_it + self.n_eh != self.n_total:
            raise ValueError("antenna split must satisfy M + K = N")


@dataclass(frozen=True)
class EhCircuit:
    """Rectifier constants: quadratic and quartic terms, antenna resistance.

    k4 = 0 selects the conventional linear harvester model.
    """

    k2: float
    k4: float
    r_ant: float

    def __post_init__(self):
        if self.k2 <= 0 or self.r_ant <= 0:
            raise ValueError("k2 and r_ant must be > 0")
        if self.k4 < 0:
            raise ValueError("k4 must be >= 0")


def it_decision_statistic(received, phi, beta):
    """Decision statistic of one information antenna for one frame.

    Sums, over the zeta = beta/phi data blocks, the correlation of each
    block with the shared reference head: the reference noise is common to
    all partial correlations, as the frame layout dictates.
    """
    r = np.asarray(received, dtype=float)
    if phi < 1 or beta % phi != 0:
        raise ValueError("phi must divide beta")
    if r.shape[0] != phi + beta:
        raise ValueError(f"expected {phi + beta} samples, got {r.shape[0]}")
    zeta = beta // phi
    ref = r[:phi]
    data = r[phi:].reshape(zeta, phi)
    return float((data * ref).sum())


def egc_detect(stats):
    """Equal-gain combine per-antenna statistics and slice the bit.

    Returns sign of the sum; an exact zero resolves to +1 (measure-zero
    under continuous noise, fixed for reproducibility).
    """
    s = np.asarray(stats, dtype=float)
    if s.size == 0:
        raise ValueError("need at least one decision statistic")
    return 1 if s.sum() >= 0.0 else -1


def eh_correlate(received):
    """Analog-correlator output: sum of every chip across the EH antennas.

    ``received`` is (K, frame_length); the serializer is modeled as a
    lossless concatenation, so the correlator length is K*(frame length).
    """
    rows = [np.asarray(r, dtype=float) for r in received]
    if len(rows) == 0:
        raise ValueError("need at least one harvesting antenna")
    width = rows[0].shape[0]
    if any(r.ndim != 1 or r.shape[0] != width for r in rows):
        raise ValueError("antenna sample vectors must all have the same length")
    return float(np.sum(rows))


def rectify(correlator_outputs, circuit):
    """Harvested DC from an ensemble of analog-correlator outputs.

    Plugs the empirical second and fourth moments into the polynomial
    rectifier model; the expectation runs over channel, data and chips, so
    the input should cover many frames.
    """
    s = np.asarray(correlator_outputs, dtype=float)
    if s.size == 0:
        raise ValueError("need at least one correlator output")
    m2 = float(np.mean(s**2))
    m4 = float(np.mean(s**4))
    return circuit.k2 * circuit.r_ant * m2 + circuit.k4 * circuit.r_ant**2 * m4
