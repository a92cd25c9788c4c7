"""Chebyshev chaotic sequences and their invariant statistics.

The signal basis for every waveform in the package is the third-order
Chebyshev map x -> 4x^3 - 3x on (-1, 1).  Its invariant density is the
arcsine law, which fixes the chip moments used throughout the closed-form
analysis (second moment 1/2, fourth moment 3/8).
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from . import kernels

# Map applications discarded before a sequence is emitted.  The initial
# value is uniform, not arcsine-distributed; the map mixes exponentially
# fast, so 64 iterations are ample to forget the initial law.
BURNIN = 64

# Initial values this close to a fixed point {-1, 0, 1} are redrawn: the
# orbit would freeze there.
FIXED_POINT_TOL = 1e-12

_MAX_MOMENT_ORDER = 8


@dataclass(frozen=True)
class ChaoticSequence:
    """One realized chaotic orbit plus the seed that produced it."""

    samples: np.ndarray
    seed: int
    initial_value: float

    def __len__(self):
        return self.samples.shape[0]


def draw_initial_values(rng, n):
    """Draw n orbit starting points uniformly on (-1, 1), avoiding fixed points."""
    x = rng.uniform(-1.0, 1.0, n)
    bad = (np.abs(x) < FIXED_POINT_TOL) | (np.abs(np.abs(x) - 1.0) < FIXED_POINT_TOL)
    while bad.any():
        x[bad] = rng.uniform(-1.0, 1.0, int(bad.sum()))
        bad = (np.abs(x) < FIXED_POINT_TOL) | (np.abs(np.abs(x) - 1.0) < FIXED_POINT_TOL)
    return x


def iterate_map(x0, length, burnin=0, stride=1):
    """Orbit of the map from a forced initial value (no seed, no redraw).

    The first emitted sample is the state reached after ``burnin`` map
    applications (so with burnin=0 it is x0 itself).
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    return kernels.chebyshev_orbit(np.array([float(x0)]), burnin, length, stride)[0]


def generate_sequence(seed, length):
    """Generate a chaotic sequence of the given length.

    The initial value is drawn uniformly on (-1, 1) from ``seed`` (redrawn
    if it lands on a fixed point), a burn-in prefix of ``BURNIN`` iterations
    is discarded, and ``length`` consecutive iterates are returned.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = np.random.default_rng(seed)
    x0 = float(draw_initial_values(rng, 1)[0])
    samples = kernels.chebyshev_orbit(np.array([x0]), BURNIN, int(length), 1)[0]
    return ChaoticSequence(samples=samples, seed=int(seed), initial_value=x0)


def invariant_pdf(x):
    """Arcsine invariant density 1/(pi*sqrt(1-x^2)) on |x| < 1, else 0.

    Defined as 0 at |x| = 1 to keep the function total; quadrature against
    it should use open rules.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = 1.0 / (np.pi * np.sqrt(1.0 - x[inside] ** 2))
    if out.ndim == 0:
        return float(out)
    return out


def invariant_cdf(x):
    """CDF of the arcsine law on (-1, 1): (2/pi) * arcsin(sqrt((x+1)/2))."""
    x = np.clip(np.asarray(x, dtype=float), -1.0, 1.0)
    out = (2.0 / np.pi) * np.arcsin(np.sqrt((x + 1.0) / 2.0))
    if out.ndim == 0:
        return float(out)
    return out


def chaotic_moment(order):
    """Exact moment E{x^order} of the arcsine law.

    Odd orders vanish; even order 2n equals C(2n, n) / 4^n.  Tabulated up
    to order 8 only.
    """
    if not isinstance(order, (int, np.integer)):
        raise TypeError("order must be an integer")
    if order < 0 or order > _MAX_MOMENT_ORDER:
        raise ValueError(f"order must be in [0, {_MAX_MOMENT_ORDER}]")
    if order % 2 == 1:
        return 0.0
    n = order // 2
    return comb(2 * n, n) / 4.0**n
