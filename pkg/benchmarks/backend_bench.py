#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the three hot kernels (chaotic orbit generation, the BER decision
chain, the harvesting correlator chain) and one end-to-end BER run on both
backends, checks that they agree, and prints a speedup table.

Run:
    python benchmarks/backend_bench.py [--frames 20000] [--repeat 3]

The packaged simulators pick their backend from CHAOSWIPT_BACKEND
(numba | numpy | auto); this script imports both backends directly and is
unaffected by the flag except for the end-to-end rows.
"""

import argparse
import os
import time

import numpy as np


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--frames", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    from chaoswipt.kernels import numpy_backend

    try:
        from chaoswipt.kernels import numba_backend
    except ImportError:
        raise SystemExit("numba not importable; nothing to compare")

    backends = {"numpy": numpy_backend, "numba": numba_backend}
    rng = np.random.default_rng(0)

    n_frames = args.frames
    phi, beta, m_ant = 20, 80, 2
    zeta = beta // phi
    frame_len = phi + beta

    x0 = rng.uniform(-1, 1, n_frames)
    frames = rng.uniform(-1, 1, (n_frames, frame_len))
    alphas = np.sqrt(rng.gamma(4.0, 0.25, (n_frames, m_ant, 2)))
    delays = np.array([0, 1], dtype=np.int64)
    noise = rng.standard_normal((n_frames, m_ant, frame_len))
    eh_alphas = alphas[:, :1, :].copy()

    long_x0 = rng.uniform(-1, 1, 1)
    cases = {
        "chebyshev_orbit (batched)": lambda impl: impl.chebyshev_orbit(x0, 64, phi, 2),
        "chebyshev_orbit (1 x 2e5)": lambda impl: impl.chebyshev_orbit(
            long_x0, 64, 200_000, 1
        ),
        "ber_delta_chain": lambda impl: impl.ber_delta_chain(
            frames, alphas, delays, 0.9, noise, True, phi, zeta
        ),
        "eh_correlate_chain": lambda impl: impl.eh_correlate_chain(
            frames, eh_alphas, delays, 0.9, noise[:, :1, :], False
        ),
    }

    print(f"kernel benchmark, {n_frames} frames, best of {args.repeat}")
    print(f"{'kernel':<28} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}")
    for label, call in cases.items():
        ref = {}
        for name, impl in backends.items():
            call(impl)  # warm up / JIT compile
            ref[name] = call(impl)
        np.testing.assert_allclose(ref["numpy"], ref["numba"], rtol=1e-9, atol=1e-12)
        t_np = best_of(lambda: call(numpy_backend), args.repeat)
        t_nb = best_of(lambda: call(numba_backend), args.repeat)
        print(f"{label:<28} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")

    # end-to-end BER point on both backends via fresh interpreters would be
    # cleaner, but swapping the dispatch module works for a benchmark
    import chaoswipt.kernels as kernels
    from chaoswipt.channel import ChannelConfig
    from chaoswipt.montecarlo import SimConfig, simulate_ber
    from chaoswipt.receiver import EhCircuit, ReceiverSplit
    from chaoswipt.waveform import WaveformKind, WaveformSpec, bit_energy

    spec = WaveformSpec(WaveformKind.SRDCSK, beta=80, phi=20)
    n0 = bit_energy(spec) / 10**1.2
    cfg = SimConfig(
        waveform=spec,
        channel=ChannelConfig.awgn(noise_psd=n0),
        split=ReceiverSplit(1, 1, 0),
        circuit=EhCircuit(k2=1.0, k4=1.0, r_ant=1.0),
        n_bits=n_frames,
        master_seed=1,
    )

    results = {}
    print(f"\nend-to-end BER run, {n_frames} bits")
    print(f"{'backend':<28} {'time [s]':>10} {'BER':>12}")
    saved = (kernels.chebyshev_orbit, kernels.ber_delta_chain, kernels.eh_correlate_chain)
    try:
        for name, impl in backends.items():
            kernels.chebyshev_orbit = impl.chebyshev_orbit
            kernels.ber_delta_chain = impl.ber_delta_chain
            kernels.eh_correlate_chain = impl.eh_correlate_chain
            simulate_ber(cfg)  # warm up
            t = best_of(lambda: results.__setitem__(name, simulate_ber(cfg)), args.repeat)
            print(f"{name:<28} {t:>10.4f} {results[name].value:>12.6f}")
    finally:
        kernels.chebyshev_orbit, kernels.ber_delta_chain, kernels.eh_correlate_chain = saved

    spread = abs(results["numpy"].value - results["numba"].value)
    tol = 4 * max(results["numpy"].stderr, 1e-12)
    print(f"\nbackend BER agreement: |diff| = {spread:.2e} (tolerance {tol:.2e})")
    if spread > tol:
        raise SystemExit("backends disagree beyond Monte Carlo resolution")
    print("ok")


if __name__ == "__main__":
    main()
