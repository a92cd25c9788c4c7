"""Numba-compiled implementations of the hot simulation kernels.

Same signatures and semantics as ``numpy_backend``; the chaotic-orbit
kernel is arithmetic-identical (same operation order per element), so the
two backends generate bit-identical chip streams.
"""

import numba as nb
import numpy as np


@nb.njit(cache=True, nogil=True)
def chebyshev_orbit(x0, burnin, n_out, stride):
    n_orbits = x0.shape[0]
    out = np.empty((n_orbits, n_out))
    for b in range(n_orbits):
        x = x0[b]
        for _ in range(burnin):
            w = x * x
            w = w * x
            x = 4.0 * w - 3.0 * x
        for j in range(n_out):
            out[b, j] = x
            for _ in range(stride):
                w = x * x
                w = w * x
                x = 4.0 * w - 3.0 * x
    return out


@nb.njit(cache=True, nogil=True)
def ber_delta_chain(frames, alphas, delays, amp, noise, use_noise, phi, zeta):
    n_frames, n_chips = frames.shape
    n_ant = alphas.shape[1]
    n_paths = alphas.shape[2]
    delta = np.zeros((n_frames, n_ant))
    y = np.empty(n_chips)
    for b in range(n_frames):
        for n in range(n_ant):
            for k in range(n_chips):
                acc = 0.0
                for i in range(n_paths):
                    tau = delays[i]
                    if k >= tau:
                        acc += alphas[b, n, i] * frames[b, k - tau]
                acc *= amp
                if use_noise:
                    acc += noise[b, n, k]
                y[k] = acc
            d = 0.0
            for p in range(1, zeta + 1):
                for q in range(phi):
                    d += y[p * phi + q] * y[q]
            delta[b, n] = d
    return delta


@nb.njit(cache=True, nogil=True)
def eh_correlate_chain(frames, alphas, delays, amp, noise, use_noise):
    n_frames, n_chips = frames.shape
    n_ant = alphas.shape[1]
    n_paths = alphas.shape[2]
    out = np.zeros(n_frames)
    for b in range(n_frames):
        total = 0.0
        for n in range(n_ant):
            for k in range(n_chips):
                acc = 0.0
                for i in range(n_paths):
                    tau = delays[i]
                    if k >= tau:
                        acc += alphas[b, n, i] * frames[b, k - tau]
                acc *= amp
                if use_noise:
                    acc += noise[b, n, k]
                total += acc
        out[b] = total
    return out
