"""Configuration-driven experiment runner.

Every subcommand evaluates a parameter sweep and writes one CSV row per
sweep point (inputs echoed, outputs appended).  Parameters come from
``--config FILE`` (flat ``key = value`` lines, ``#`` comments) overridden
by command-line flags; keys use the symbol names beta, phi, gamma0_db, m,
L, omega, N, M, K, k2, k4, r_ant, pt_dbm, r, a.  dB-to-linear conversion
happens here and only here.

Stochastic rows carry a status column; a failed row (quadrature failure,
unreachable CI target) records the error and the run continues.  The
header comment block includes a timestamp unless --no-timestamp is given,
so reruns with the same seed are byte-identical.
"""

import argparse
import datetime
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analysis
from .channel import ChannelConfig
from .montecarlo import EhChannelMode, SimConfig, simulate_ber, simulate_zdc
from .receiver import EhCircuit, ReceiverSplit
from .waveform import WaveformKind, WaveformSpec, bit_energy

# Harvesting-circuit and link defaults used when a sweep does not override
# them: k2/k4/r_ant from the rectifier model fit, 30 dBm transmit power,
# 20 m link, pathloss exponent 4.
DEFAULTS = {
    "k2": 0.0034,
    "k4": 0.3829,
    "r_ant": 50.0,
    "pt_dbm": 30.0,
    "r": 20.0,
    "a": 4.0,
}

SEED_ENV_VAR = "CHAOSWIPT_SEED"

_WAVEFORM_NAMES = {
    "dcsk": WaveformKind.DCSK,
    "srdcsk": WaveformKind.SRDCSK,
    "wpt-opt": WaveformKind.WPT_OPT_SRDCSK,
    "unmodulated": WaveformKind.UNMODULATED,
    "repeated": WaveformKind.REPEATED,
}


class CliError(Exception):
    pass


@dataclass
class ExperimentSpec:
    """One resolved experiment: command plus merged parameter strings."""

    command: str
    params: dict = field(default_factory=dict)
    out: str | None = None
    no_timestamp: bool = False

    def get(self, key, default=None):
        value = self.params.get(key)
        return default if value in (None, "") else value

    def require(self, key):
        value = self.get(key)
        if value is None:
            raise CliError(f"missing required parameter '{key}'")
        return value

    def get_float(self, key, default=None):
        value = self.get(key)
        if value is None:
            return default
        try:
            return float(value)
        except ValueError:
            raise CliError(f"parameter '{key}' must be a number, got {value!r}")

    def get_int(self, key, default=None):
        value = self.get(key)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError:
            raise CliError(f"parameter '{key}' must be an integer, got {value!r}")

    def require_int_list(self, key):
        return _int_list(key, self.require(key))

    def require_float_list(self, key):
        return _float_list(key, self.require(key))

    def seed(self):
        value = self.get("seed", os.environ.get(SEED_ENV_VAR))
        return int(value) if value not in (None, "") else 0

    def workers(self):
        return self.get_int("workers", 1)


def _int_list(key, text):
    try:
        return [int(tok) for tok in str(text).split(",") if tok.strip() != ""]
    except ValueError:
        raise CliError(f"parameter '{key}' must be a comma list of integers")


def _float_list(key, text):
    try:
        return [float(tok) for tok in str(text).split(",") if tok.strip() != ""]
    except ValueError:
        raise CliError(f"parameter '{key}' must be a comma list of numbers")


def _omega(spec, default=(1.0,)):
    raw = spec.get("omega")
    if raw is None:
        return tuple(default)
    return tuple(_float_list("omega", raw))


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _default_circuit(spec):
    return EhCircuit(
        k2=spec.get_float("k2", DEFAULTS["k2"]),
        k4=spec.get_float("k4", DEFAULTS["k4"]),
        r_ant=spec.get_float("r_ant", DEFAULTS["r_ant"]),
    )


def _default_link(spec):
    """(P_t watts, distance, pathloss exponent) from params or defaults."""
    return (
        dbm_to_watts(spec.get_float("pt_dbm", DEFAULTS["pt_dbm"])),
        spec.get_float("r", DEFAULTS["r"]),
        spec.get_float("a", DEFAULTS["a"]),
    )


def _nus(spec):
    pt, r, a = _default_link(spec)
    circuit = _default_circuit(spec)
    nu1 = r**-a * circuit.k2 * circuit.r_ant * pt
    nu2 = r ** (-2 * a) * circuit.k4 * circuit.r_ant**2 * pt**2
    return nu1, nu2, circuit, pt, r, a


def _ber_sim_estimate(phi, beta, gamma0, m_it, n_bits, seed, workers, m=None,
                      n_paths=None, omega=None, delays=None, target_ci=None):
    """One BER point through the physical chain.

    Noise is derived from the SNR target as N0 = eps_b / gamma0 with unit
    transmit power and unit distance (the BER depends on the link only
    through gamma0).  Fading runs default to one-chip-spaced path delays,
    matching the decorrelated-path regime the closed forms describe.
    """
    spec = WaveformSpec(WaveformKind.SRDCSK, beta=beta, phi=phi)
    n0 = bit_energy(spec) / gamma0
    if m is None:
        channel = ChannelConfig.awgn(noise_psd=n0)
    else:
        n_paths = n_paths or (len(omega) if omega else 2)
        omega = tuple(omega) if omega else tuple([1.0 / n_paths] * n_paths)
        delays = tuple(delays) if delays is not None else tuple(range(len(omega)))
        channel = ChannelConfig(
            m=m, gains=omega, noise_psd=n0, delays=delays
        )
    cfg = SimConfig(
        waveform=spec,
        channel=channel,
        split=ReceiverSplit(m_it, m_it, 0),
        circuit=EhCircuit(k2=1.0, k4=1.0, r_ant=1.0),
        n_bits=n_bits,
        master_seed=seed,
        n_workers=workers,
        target_relative_ci=target_ci,
    )
    return simulate_ber(cfg)


def _zdc_sim_estimate(kind, beta, phi, k_eh, n_frames, seed, workers, circuit,
                      pt, r, a, m=None, omega=(1.0,), mode=None, eh_noise=False):
    """One harvested-DC point through the full transmit-receive chain."""
    spec = WaveformSpec(kind, beta=beta, phi=phi, transmit_power=pt)
    if m is None:
        channel = ChannelConfig.awgn(distance=r, pathloss_exp=a)
    else:
        channel = ChannelConfig(m=m, gains=tuple(omega), distance=r, pathloss_exp=a)
    cfg = SimConfig(
        waveform=spec,
        channel=channel,
        split=ReceiverSplit(k_eh, 0, k_eh),
        circuit=circuit,
        n_frames=n_frames,
        master_seed=seed,
        n_workers=workers,
        eh_channel_mode=mode or EhChannelMode.COMMON_ACROSS_ANTENNAS,
        eh_noise=eh_noise,
    )
    return simulate_zdc(cfg)


# --------------------------------------------------------------------------
# subcommand handlers: each returns (columns, rows, comment_lines)
# --------------------------------------------------------------------------


def _cmd_phi_opt(spec):
    betas = spec.require_int_list("beta")
    gammas_db = spec.require_float_list("gamma0_db")
    rows = []
    for beta in betas:
        for gdb in gammas_db:
            real, adm = analysis.phi_opt(beta, db_to_linear(gdb))
            rows.append([beta, gdb, real, adm])
    return ["beta", "gamma0_db", "phi_real", "phi_admissible"], rows, []


def _cmd_ber_analytic(spec):
    betas = spec.require_int_list("beta")
    phis = spec.require_int_list("phi")
    gammas_db = spec.require_float_list("gamma0_db")
    m_its = spec.require_int_list("M")
    m = spec.get_float("m")
    n_paths = spec.get_int("L", 2 if m is not None else None)
    rows = []
    for beta in betas:
        for phi in phis:
            for gdb in gammas_db:
                for m_it in m_its:
                    status, value = "ok", None
                    try:
                        if m is None:
                            value = analysis.ber_awgn(m_it, phi, beta, db_to_linear(gdb))
                        else:
                            value = analysis.ber_fading(
                                m_it, phi, beta, db_to_linear(gdb), m, n_paths
                            )
                    except (ValueError, analysis.QuadratureError) as exc:
                        status = f"error: {exc}"
                    rows.append([beta, phi, gdb, m_it, m, n_paths, value, status])
    cols = ["beta", "phi", "gamma0_db", "M", "m", "L", "ber", "status"]
    return cols, rows, []


def _cmd_ber_sim(spec):
    betas = spec.require_int_list("beta")
    phis = spec.require_int_list("phi")
    gammas_db = spec.require_float_list("gamma0_db")
    m_its = spec.require_int_list("M")
    n_bits = spec.get_int("bits", 100_000)
    m = spec.get_float("m")
    omega = _omega(spec, default=()) or None
    n_paths = spec.get_int("L", len(omega) if omega else 2) if m is not None else None
    delays = _int_list("delays", spec.get("delays")) if spec.get("delays") else None
    target_ci = spec.get_float("target_ci")
    seed, workers = spec.seed(), spec.workers()
    comments = [
        "noise derived from the SNR target: N0 = eps_b / gamma0 (P_t = 1, r = 1)",
    ]
    if m is not None:
        comments.append(
            "fading path delays default to 0,1,...,L-1 chips (decorrelated paths)"
        )
    rows = []
    for beta in betas:
        for phi in phis:
            for gdb in gammas_db:
                for m_it in m_its:
                    status, est = "ok", None
                    try:
                        est = _ber_sim_estimate(
                            phi, beta, db_to_linear(gdb), m_it, n_bits, seed,
                            workers, m=m, n_paths=n_paths, omega=omega,
                            delays=delays, target_ci=target_ci,
                        )
                    except (ValueError, RuntimeError) as exc:
                        status = f"error: {exc}"
                    rows.append(
                        [beta, phi, gdb, m_it, m,
                         est.value if est else None,
                         est.stderr if est else None,
                         est.ci95[0] if est else None,
                         est.ci95[1] if est else None,
                         est.n_trials if est else None,
                         status]
                    )
    cols = ["beta", "phi", "gamma0_db", "M", "m", "ber_sim", "stderr",
            "ci_lo", "ci_hi", "n_bits", "status"]
    return cols, rows, comments


def _waveform_kind(spec):
    name = str(spec.require("waveform")).lower()
    if name not in _WAVEFORM_NAMES:
        raise CliError(
            f"unknown waveform '{name}'; use one of {sorted(_WAVEFORM_NAMES)}"
        )
    return _WAVEFORM_NAMES[name]


def _zdc_analytic_value(kind, k_eh, phi, beta, nu1, nu2, ups1, ups2):
    if kind in (WaveformKind.SRDCSK, WaveformKind.DCSK):
        phi_eff = beta if kind is WaveformKind.DCSK else phi
        return analysis.zdc_srdcsk(k_eh, phi_eff, beta, nu1, nu2, ups1, ups2)
    if kind is WaveformKind.WPT_OPT_SRDCSK:
        return analysis.zdc_srdcsk(k_eh, 1, beta, nu1, nu2, ups1, ups2)
    if kind is WaveformKind.UNMODULATED:
        return analysis.zdc_unmodulated(k_eh, beta, nu1, nu2, ups1, ups2)
    return analysis.zdc_repeated(k_eh, beta, nu1, nu2, ups1, ups2)


def _cmd_zdc_analytic(spec):
    kind = _waveform_kind(spec)
    betas = spec.require_int_list("beta")
    k_list = _int_list("K", spec.get("K") or spec.get("N") or "1")
    phis = spec.require_int_list("phi") if kind is WaveformKind.SRDCSK else [None]
    m = spec.get_float("m")
    omega = _omega(spec)
    nu1, nu2, _, _, _, _ = _nus(spec)
    if m is None:
        ups1 = ups2 = 1.0  # no-fading limit
    else:
        ups1, ups2 = analysis.channel_factors(m, omega)
    comments = [f"nu1 = {_fmt(nu1)}, nu2 = {_fmt(nu2)} from circuit and link settings"]
    rows = []
    for beta in betas:
        for phi in phis:
            for k_eh in k_list:
                value = _zdc_analytic_value(kind, k_eh, phi, beta, nu1, nu2, ups1, ups2)
                rows.append(
                    [kind.value, beta, phi, k_eh, m, "/".join(map(str, omega)), value]
                )
    cols = ["waveform", "beta", "phi", "K", "m", "omega", "zdc"]
    return cols, rows, comments


def _cmd_zdc_sim(spec):
    kind = _waveform_kind(spec)
    betas = spec.require_int_list("beta")
    k_list = _int_list("K", spec.get("K") or spec.get("N") or "1")
    phis = spec.require_int_list("phi") if kind is WaveformKind.SRDCSK else [None]
    n_frames = spec.get_int("frames", 50_000)
    m = spec.get_float("m")
    omega = _omega(spec)
    mode = (
        EhChannelMode.INDEPENDENT
        if str(spec.get("eh_channel_mode", "common")).lower().startswith("indep")
        else EhChannelMode.COMMON_ACROSS_ANTENNAS
    )
    eh_noise = str(spec.get("eh_noise", "false")).lower() in ("1", "true", "yes")
    nu1, nu2, circuit, pt, r, a = _nus(spec)
    seed, workers = spec.seed(), spec.workers()
    comments = [
        f"circuit k2={circuit.k2} k4={circuit.k4} r_ant={circuit.r_ant}, "
        f"P_t={_fmt(pt)} W, r={r} m, a={a}",
        f"eh_channel_mode={mode.value}, eh_noise={eh_noise}",
    ]
    rows = []
    for beta in betas:
        for phi in phis:
            for k_eh in k_list:
                status, est = "ok", None
                try:
                    est = _zdc_sim_estimate(
                        kind, beta, phi, k_eh, n_frames, seed, workers,
                        circuit, pt, r, a, m=m, omega=omega, mode=mode,
                        eh_noise=eh_noise,
                    )
                except (ValueError, RuntimeError) as exc:
                    status = f"error: {exc}"
                rows.append(
                    [kind.value, beta, phi, k_eh, m, "/".join(map(str, omega)),
                     est.value if est else None,
                     est.stderr if est else None,
                     est.ci95[0] if est else None,
                     est.ci95[1] if est else None,
                     status]
                )
    cols = ["waveform", "beta", "phi", "K", "m", "omega", "zdc_sim", "stderr",
            "ci_lo", "ci_hi", "status"]
    return cols, rows, comments


def _cmd_region(spec):
    n_ant = int(spec.require("N"))
    beta = int(spec.require("beta"))
    gdb = spec.get_float("gamma0_db")
    if gdb is None:
        raise CliError("missing required parameter 'gamma0_db'")
    m = spec.get_float("m", 1.0)
    omega = _omega(spec)
    nu1, nu2, _, _, _, _ = _nus(spec)
    res = analysis.region(n_ant, beta, db_to_linear(gdb), m, omega, nu1, nu2)
    frontier = {(p.phi, p.m_it) for p in res.pareto}
    rows = [
        [p.phi, p.m_it, p.k_eh, p.sr, p.zdc, int((p.phi, p.m_it) in frontier)]
        for p in res.points
    ]
    cols = ["phi", "M", "K", "sr", "zdc", "pareto"]
    comments = [f"N={n_ant} beta={beta} gamma0_db={gdb} m={_fmt(m)} omega={omega}"]
    return cols, rows, comments


def _cmd_gap(spec):
    betas = spec.require_int_list("beta")
    n_list = _int_list("N", spec.get("N") or "1")
    m = spec.get_float("m", 4.0)
    omega = _omega(spec, default=(0.6, 0.4))
    nu1, nu2, _, _, _, _ = _nus(spec)
    ups1, ups2 = analysis.channel_factors(m, omega)
    rows = []
    for n_ant in n_list:
        for beta in betas:
            xi1, xi2 = analysis.gaps(n_ant, beta, nu1, nu2, ups1, ups2)
            rows.append(
                [n_ant, beta,
                 analysis.zdc_unmodulated(n_ant, beta, nu1, nu2, ups1, ups2),
                 analysis.zdc_srdcsk(n_ant, 1, beta, nu1, nu2, ups1, ups2),
                 analysis.zdc_repeated(n_ant, beta, nu1, nu2, ups1, ups2),
                 xi1, xi2]
            )
    cols = ["N", "beta", "zdc_unmodulated", "zdc_wpt_opt", "zdc_repeated", "xi1", "xi2"]
    return cols, rows, []


# --------------------------------------------------------------------------
# figure presets
# --------------------------------------------------------------------------


def _fig3(spec):
    """BER against reference length, AWGN, beta=80, 12 dB, M in 1..4."""
    beta, gdb = 80, 12.0
    gamma0 = db_to_linear(gdb)
    n_bits = spec.get_int("bits", 200_000)
    seed, workers = spec.seed(), spec.workers()
    rows = []
    for phi in analysis.divisors(beta):
        for m_it in (1, 2, 3, 4):
            ber_th = analysis.ber_awgn(m_it, phi, beta, gamma0)
            status, est = "ok", None
            try:
                est = _ber_sim_estimate(phi, beta, gamma0, m_it, n_bits, seed, workers)
            except (ValueError, RuntimeError) as exc:
                status = f"error: {exc}"
            rows.append(
                [phi, m_it, ber_th,
                 est.value if est else None,
                 est.stderr if est else None,
                 status]
            )
    cols = ["phi", "M", "ber_analytic", "ber_sim", "stderr", "status"]
    comments = [
        f"beta={beta}, gamma0={gdb} dB, AWGN, {n_bits} bits per point",
        "noise derived from the SNR target: N0 = eps_b / gamma0 (P_t = 1, r = 1)",
    ]
    return cols, rows, comments


def _fig4(spec):
    """BER against SNR, beta=80, phi=20, AWGN and two fading severities."""
    beta, phi = 80, 20
    n_bits = spec.get_int("bits", 100_000)
    seed, workers = spec.seed(), spec.workers()
    omega = (0.5, 0.5)
    channels = [("awgn", None), ("nakagami", 1.0), ("nakagami", 4.0)]
    rows = []
    for label, m in channels:
        for m_it in (1, 2, 3):
            for gdb in np.arange(0.0, 20.5, 2.0):
                gamma0 = db_to_linear(float(gdb))
                status, ber_th, est = "ok", None, None
                try:
                    if m is None:
                        ber_th = analysis.ber_awgn(m_it, phi, beta, gamma0)
                    else:
                        ber_th = analysis.ber_fading(m_it, phi, beta, gamma0, m, 2)
                    est = _ber_sim_estimate(
                        phi, beta, gamma0, m_it, n_bits, seed, workers,
                        m=m, omega=omega if m is not None else None,
                    )
                except (ValueError, RuntimeError, analysis.QuadratureError) as exc:
                    status = f"error: {exc}"
                rows.append(
                    [label, m, m_it, float(gdb), ber_th,
                     est.value if est else None,
                     est.stderr if est else None,
                     status]
                )
    cols = ["channel", "m", "M", "gamma0_db", "ber_analytic", "ber_sim", "stderr", "status"]
    comments = [
        f"beta={beta}, phi={phi}, {n_bits} bits per point, fading omega={omega}, L=2",
        "fading path delays 0,1 chips (decorrelated paths)",
    ]
    return cols, rows, comments


def _fig5(spec):
    """Harvested DC against reference length, beta=60, m=4, K in 1..3."""
    beta, m = 60, 4.0
    n_frames = spec.get_int("frames", 50_000)
    seed, workers = spec.seed(), spec.workers()
    nu1, nu2, circuit, pt, r, a = _nus(spec)
    rows = []
    for label, omega in (("flat", (1.0,)), ("selective", (0.6, 0.4))):
        ups1, ups2 = analysis.channel_factors(m, omega)
        for k_eh in (1, 2, 3):
            for phi in analysis.divisors(beta):
                zdc_th = analysis.zdc_srdcsk(k_eh, phi, beta, nu1, nu2, ups1, ups2)
                status, est = "ok", None
                try:
                    est = _zdc_sim_estimate(
                        WaveformKind.SRDCSK, beta, phi, k_eh, n_frames, seed,
                        workers, circuit, pt, r, a, m=m, omega=omega,
                    )
                except (ValueError, RuntimeError) as exc:
                    status = f"error: {exc}"
                rows.append(
                    [label, k_eh, phi, zdc_th,
                     est.value if est else None,
                     est.stderr if est else None,
                     status]
                )
    cols = ["channel", "K", "phi", "zdc_analytic", "zdc_sim", "stderr", "status"]
    comments = [
        f"beta={beta}, m={m}, {n_frames} frames per point, common channel across EH antennas",
        f"nu1={_fmt(nu1)}, nu2={_fmt(nu2)}",
    ]
    return cols, rows, comments


def _fig6a(spec):
    """Region: channel effect at N=3, M=2, K=1, beta=60, 12 dB."""
    nu1, nu2, _, _, _, _ = _nus(spec)
    gamma0 = db_to_linear(12.0)
    rows = []
    for m in (1.0, 24.0):
        for label, omega in (("flat", (1.0,)), ("selective", (0.6, 0.4))):
            ups1, ups2 = analysis.channel_factors(m, omega)
            _, phi_adm = analysis.phi_opt(60, gamma0)
            for phi in (p for p in analysis.divisors(60) if p <= phi_adm):
                sr = 1.0 - analysis.ber_awgn(2, phi, 60, gamma0)
                zdc = analysis.zdc_srdcsk(1, phi, 60, nu1, nu2, ups1, ups2)
                rows.append([m, label, phi, sr, zdc])
    cols = ["m", "channel", "phi", "sr", "zdc"]
    return cols, rows, ["N=3, M=2, K=1, beta=60, gamma0=12 dB"]


def _fig6b(spec):
    """Region: antenna-split effect at N=4, m=6, omega=(0.8, 0.2)."""
    nu1, nu2, _, _, _, _ = _nus(spec)
    rows = []
    for gdb in (8.0, 12.0):
        res = analysis.region(4, 60, db_to_linear(gdb), 6.0, (0.8, 0.2), nu1, nu2)
        for p in res.points:
            rows.append([gdb, p.m_it, p.k_eh, p.phi, p.sr, p.zdc])
    cols = ["gamma0_db", "M", "K", "phi", "sr", "zdc"]
    return cols, rows, ["N=4, beta=60, m=6, omega=(0.8, 0.2)"]


def _fig7(spec):
    """Harvested-DC gaps against beta for N in 1..3, m=4, omega=(0.6, 0.4)."""
    m, omega = 4.0, (0.6, 0.4)
    n_frames = spec.get_int("frames", 20_000)
    seed, workers = spec.seed(), spec.workers()
    nu1, nu2, circuit, pt, r, a = _nus(spec)
    ups1, ups2 = analysis.channel_factors(m, omega)
    rows = []
    for n_ant in (1, 2, 3):
        for beta in range(10, 101, 10):
            xi1, xi2 = analysis.gaps(n_ant, beta, nu1, nu2, ups1, ups2)
            status = "ok"
            sims = {}
            try:
                for kind in (WaveformKind.REPEATED, WaveformKind.UNMODULATED,
                             WaveformKind.WPT_OPT_SRDCSK):
                    sims[kind] = _zdc_sim_estimate(
                        kind, beta, None, n_ant, n_frames, seed, workers,
                        circuit, pt, r, a, m=m, omega=omega,
                    )
            except (ValueError, RuntimeError) as exc:
                status = f"error: {exc}"
            if sims:
                pt_est = sims[WaveformKind.REPEATED]
                um_est = sims[WaveformKind.UNMODULATED]
                opt_est = sims[WaveformKind.WPT_OPT_SRDCSK]
                xi1_sim = pt_est.value - um_est.value
                xi2_sim = pt_est.value - opt_est.value
                se1 = float(np.hypot(pt_est.stderr, um_est.stderr))
                se2 = float(np.hypot(pt_est.stderr, opt_est.stderr))
            else:
                xi1_sim = xi2_sim = se1 = se2 = None
            rows.append([n_ant, beta, xi1, xi2, xi1_sim, xi2_sim, se1, se2, status])
    cols = ["N", "beta", "xi1_analytic", "xi2_analytic", "xi1_sim", "xi2_sim",
            "stderr_xi1", "stderr_xi2", "status"]
    comments = [f"m={m}, omega={omega}, K=N, {n_frames} frames per waveform and point"]
    return cols, rows, comments


_FIGURES = {
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6a": _fig6a,
    "fig6b": _fig6b,
    "fig7": _fig7,
}


def _cmd_reproduce_figure(spec):
    name = str(spec.require("figure")).lower()
    if name not in _FIGURES:
        raise CliError(f"unknown figure '{name}'; use one of {sorted(_FIGURES)}")
    return _FIGURES[name](spec)


_COMMANDS = {
    "phi-opt": _cmd_phi_opt,
    "ber-analytic": _cmd_ber_analytic,
    "ber-sim": _cmd_ber_sim,
    "zdc-analytic": _cmd_zdc_analytic,
    "zdc-sim": _cmd_zdc_sim,
    "region": _cmd_region,
    "gap": _cmd_gap,
    "reproduce-figure": _cmd_reproduce_figure,
}


def run(spec):
    """Execute one experiment spec; returns the process exit status."""
    handler = _COMMANDS[spec.command]
    cols, rows, comments = handler(spec)
    lines = [f"# chaoswipt {spec.command}"]
    if not spec.no_timestamp:
        lines.append(f"# generated {datetime.datetime.now().isoformat()}")
    lines += [f"# {c}" for c in comments]
    lines.append(f"# seed={spec.seed()}")
    lines.append(",".join(cols))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if spec.out:
        with open(spec.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def read_config_file(path):
    """Flat key = value parameter file; '#' starts a comment."""
    params = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise CliError(f"{path}:{lineno}: expected 'key = value'")
                key, value = line.split("=", 1)
                params[key.strip()] = value.strip()
    except OSError as exc:
        raise CliError(f"cannot read config file {path}: {exc}")
    return params


_PARAM_FLAGS = [
    "beta", "phi", "gamma0_db", "m", "L", "omega", "N", "M", "K",
    "k2", "k4", "r_ant", "pt_dbm", "r", "a",
    "bits", "frames", "seed", "workers", "waveform", "delays",
    "eh_channel_mode", "eh_noise", "target_ci",
]


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="chaoswipt",
        description="Chaotic-waveform SWIPT link analysis and simulation runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name, help=f"{name} sweep")
        if name == "reproduce-figure":
            p.add_argument("figure", help="one of " + ", ".join(sorted(_FIGURES)))
        p.add_argument("--config", help="flat key = value parameter file")
        p.add_argument("--out", help="output CSV path (default: stdout)")
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp comment for byte-identical reruns")
        for key in _PARAM_FLAGS:
            p.add_argument("--" + key.replace("_", "-"), dest=key)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        params = {}
        if args.config:
            params.update(read_config_file(args.config))
        for key in _PARAM_FLAGS:
            value = getattr(args, key, None)
            if value is not None:
                params[key] = value
        if args.command == "reproduce-figure":
            params["figure"] = args.figure
        spec = ExperimentSpec(
            command=args.command,
            params=params,
            out=args.out,
            no_timestamp=args.no_timestamp,
        )
        return run(spec)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
