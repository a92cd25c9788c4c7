"""Pure-numpy implementations of the hot simulation kernels.

These are the fallback versions of the numba kernels in
``numba_backend``; both expose the same signatures and, for the
chaotic-orbit kernel, produce bit-identical output (the per-element
arithmetic is ordered the same way in both backends).
"""

import numpy as np


def chebyshev_orbit(x0, burnin, n_out, stride):
    """Iterate x -> 4x^3 - 3x elementwise and collect samples.

    Each row of the output is an independent orbit started from the
    matching entry of ``x0``.  ``burnin`` map applications are discarded,
    after which the current state is emitted and the map advanced
    ``stride`` times between consecutive emitted samples.
    """
    x = np.array(x0, dtype=np.float64, copy=True).ravel()
    n_orbits = x.shape[0]
    if n_orbits == 1:
        # scalar loop: long single orbits are much faster on plain floats
        xs = float(x[0])
        for _ in range(burnin):
            w = xs * xs
            w = w * xs
            xs = 4.0 * w - 3.0 * xs
        out = np.empty((1, n_out))
        for j in range(n_out):
            out[0, j] = xs
            for _ in range(stride):
                w = xs * xs
                w = w * xs
                xs = 4.0 * w - 3.0 * xs
        return out
    for _ in range(burnin):
        w = x * x
        w = w * x
        x = 4.0 * w - 3.0 * x
    out = np.empty((n_orbits, n_out))
    for j in range(n_out):
        out[:, j] = x
        for _ in range(stride):
            w = x * x
            w = w * x
            x = 4.0 * w - 3.0 * x
    return out


def _received_batch(frames, alphas, delays, amp, noise, use_noise):
    """Per-antenna received samples for a batch of frames.

    frames: (B, T), alphas: (B, N, L), delays: (L,) chip shifts with
    zero-padded heads.  Returns (B, N, T).
    """
    n_frames, n_chips = frames.shape
    recv = np.zeros((n_frames, alphas.shape[1], n_chips))
    for i, tau in enumerate(delays):
        if tau == 0:
            shifted = frames
        else:
            shifted = np.zeros_like(frames)
            shifted[:, tau:] = frames[:, : n_chips - tau]
        recv += alphas[:, :, i, None] * shifted[:, None, :]
    recv *= amp
    if use_noise:
        recv = recv + noise
    return recv


def ber_delta_chain(frames, alphas, delays, amp, noise, use_noise, phi, zeta):
    """Propagate frames and compute the per-antenna decision statistics.

    Returns (B, M): each entry is the sum over the zeta data blocks of the
    partial correlation of that block against the frame's reference head.
    """
    n_frames = frames.shape[0]
    n_ant = alphas.shape[1]
    recv = _received_batch(frames, alphas, delays, amp, noise, use_noise)
    ref = recv[:, :, :phi]
    data = recv[:, :, phi:].reshape(n_frames, n_ant, zeta, phi)
    return (data.sum(axis=2) * ref).sum(axis=2)


def eh_correlate_chain(frames, alphas, delays, amp, noise, use_noise):
    """Propagate frames to the harvesting antennas and sum every chip.

    Returns (B,): the analog-correlator output per frame, i.e. the plain
    sum of all received samples across antennas and chips.
    """
    recv = _received_batch(frames, alphas, delays, amp, noise, use_noise)
    return recv.sum(axis=(1, 2))
