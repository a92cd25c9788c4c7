"""Closed-form link analysis: BER, optimal reference length, harvested DC,
and the success-rate / harvested-DC trade-off region.

All operations take linear (not dB) SNR; dB conversion belongs to the CLI.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy.integrate import quad
from scipy.special import erfc, erfcinv, gammaincinv, gammaln


class QuadratureError(RuntimeError):
    """Raised when the fading-BER integral fails to converge."""


@dataclass(frozen=True)
class LinkBudget:
    """Link-level constants: SNR per bit and the two rectifier prefactors."""

    gamma0: float
    nu1: float
    nu2: float

    def __post_init__(self):
        if self.gamma0 <= 0 or self.nu1 <= 0 or self.nu2 < 0:
            raise ValueError("link budget terms must be positive")

    @classmethod
    def from_system(cls, *, transmit_power, distance, pathloss_exp, noise_psd, circuit,
                    phi, beta, chip_duration=1.0):
        """Derive (gamma0, nu1, nu2) from physical link parameters."""
        path = distance**-pathloss_exp
        eps_b = transmit_power * chip_duration * (phi + beta) * 0.5
        return cls(
            gamma0=path * eps_b / noise_psd,
            nu1=path * circuit.k2 * circuit.r_ant * transmit_power,
            nu2=path**2 * circuit.k4 * circuit.r_ant**2 * transmit_power**2,
        )


@dataclass(frozen=True)
class RegionPoint:
    """One achievable (success rate, harvested DC) operating point."""

    sr: float
    zdc: float
    phi: int
    m_it: int
    k_eh: int


def divisors(n):
    """Positive divisors of n, ascending."""
    return [d for d in range(1, n + 1) if n % d == 0]


def lambda_factor(phi, beta, gamma0):
    """Inverse squared deflection of the decision statistic per IT antenna.

    (phi+beta)^2 / (beta*gamma0) * (1/(2*gamma0) + 1/phi); the BER is
    erfc(sqrt(M/Lambda))/2, so smaller is better.  Unimodal in phi with a
    single interior minimum.
    """
    if phi <= 0 or beta <= 0 or gamma0 <= 0:
        raise ValueError("phi, beta and gamma0 must be positive")
    return (phi + beta) ** 2 / (beta * gamma0) * (1.0 / (2.0 * gamma0) + 1.0 / phi)


def ber_awgn(m_it, phi, beta, gamma0):
    """Closed-form BER of the M-antenna EGC receiver on the AWGN link."""
    if m_it < 1:
        raise ValueError("need at least one IT antenna")
    if not (1 <= phi <= beta) or beta % phi != 0:
        raise ValueError("phi must divide beta with 1 <= phi <= beta")
    return 0.5 * erfc(np.sqrt(m_it / lambda_factor(phi, beta, gamma0)))


def phi_opt(beta, gamma0):
    """Optimal reference length: unconstrained real optimum and the
    admissible divisor of beta closest to it (ties go to the smaller
    divisor, which harvests more at equal BER distance)."""
    if beta < 1 or gamma0 <= 0:
        raise ValueError("beta must be >= 1 and gamma0 > 0")
    phi_real = 0.5 * gamma0 * (np.sqrt(1.0 + 4.0 * beta / gamma0) - 1.0)
    admissible = min(divisors(beta), key=lambda d: (abs(d - phi_real), d))
    return float(phi_real), int(admissible)


def _kappa_logpdf(kappa, shape, scale):
    return (
        (shape - 1.0) * np.log(kappa)
        - kappa / scale
        - gammaln(shape)
        - shape * np.log(scale)
    )


def ber_fading(m_it, phi, beta, gamma0, m, n_paths):
    """BER under frequency-selective Nakagami-m fading, by quadrature.

    The aggregate channel power kappa over the M antennas and L paths is
    Gamma(M*m*L, 1/(m*L)) distributed (path gains summing to one enter
    only through that law); the conditional BER is integrated against it
    on a quantile-truncated support with adaptive Gauss-Kronrod refinement
    to 1e-8 relative error.
    """
    if m < 1 or n_paths < 1:
        raise ValueError("m must be >= 1 and n_paths >= 1")
    if m_it < 1:
        raise ValueError("need at least one IT antenna")
    if not (1 <= phi <= beta) or beta % phi != 0:
        raise ValueError("phi must divide beta with 1 <= phi <= beta")
    zeta = beta // phi
    shape = m_it * m * n_paths
    scale = 1.0 / (m * n_paths)
    lo = gammaincinv(shape, 1e-12) * scale
    hi = gammaincinv(shape, 1.0 - 1e-12) * scale

    c_sq = m_it * (phi + beta) ** 2 / (2.0 * beta * gamma0**2)
    c_lin = (zeta + 1.0) / zeta * (phi + beta) / (phi * gamma0)

    def integrand(kappa):
        arg = (c_sq / kappa**2 + c_lin / kappa) ** -0.5
        return 0.5 * erfc(arg) * np.exp(_kappa_logpdf(kappa, shape, scale))

    out = quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-8, limit=200, full_output=1)
    if len(out) > 3:
        raise QuadratureError(f"fading BER quadrature did not converge: {out[3]}")
    value, abserr = out[0], out[1]
    if value > 0 and abserr > 1e-6 * value:
        raise QuadratureError(
            f"fading BER quadrature error {abserr:.2e} too large for value {value:.2e}"
        )
    return float(value)


def decision_moments(d, kappa, m_it, phi, beta, *, eps_b, distance, pathloss_exp,
                     noise_psd):
    """Mean and variance of the combined decision statistic given the
    aggregate channel power kappa (noise-conditional, chip-averaged)."""
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    path = distance**-pathloss_exp
    zeta = beta // phi
    mean = beta * path * d * eps_b * kappa / (phi + beta)
    var = (beta * noise_psd / 2.0) * (
        m_it * noise_psd / 2.0 + path * eps_b * (zeta + 1.0) * kappa / (phi + beta)
    )
    return float(mean), float(var)


def _compositions(total, parts):
    """All weak compositions of ``total`` into ``parts`` ordered slots."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def channel_factors(m, gains):
    """Second and fourth moments of the summed path amplitudes.

    First factor: 1 + (2/m) * (Gamma(m+1/2)/Gamma(m))^2 * sum over distinct
    path pairs of sqrt(Omega_i * Omega_j) -- exactly E{(sum_i alpha_i)^2}.
    Second factor: the multinomial sum over weak compositions of 4 into L
    parts of the per-path amplitude moments -- exactly E{(sum_i alpha_i)^4}.
    """
    g = np.asarray(gains, dtype=float)
    if abs(g.sum() - 1.0) > 1e-9:
        raise ValueError("path power gains must sum to 1")
    if m < 1:
        raise ValueError("m must be >= 1")
    n_paths = g.size

    half_ratio_sq = np.exp(2.0 * (gammaln(m + 0.5) - gammaln(m)))
    pair_sum = sum(
        np.sqrt(g[i] * g[j]) for i in range(n_paths) for j in range(i + 1, n_paths)
    )
    ups1 = 1.0 + (2.0 / m) * half_ratio_sq * pair_sum

    ups2 = 0.0
    for ks in _compositions(4, n_paths):
        coef = 24  # 4!
        term = 1.0
        for kj, gj in zip(ks, g):
            coef //= factorial(kj)
            if kj:
                term *= np.exp(gammaln(m + kj / 2.0) - gammaln(m)) * (gj / m) ** (
                    kj / 2.0
                )
        ups2 += coef * term
    return float(ups1), float(ups2)


def zdc_srdcsk(k_eh, phi, beta, nu1, nu2, upsilon1, upsilon2):
    """Harvested DC for short-reference frames on K harvesting antennas."""
    if beta % phi != 0:
        raise ValueError("phi must divide beta")
    zeta = beta // phi
    quad_term = nu1 * upsilon1 * k_eh**2 * phi * (1.0 + zeta**2) / 2.0
    quart_term = (
        3.0
        * nu2
        * upsilon2
        * k_eh**4
        * (1.0 + 6.0 * zeta**2 + zeta**4)
        * (2.0 * phi**2 - phi)
        / 8.0
    )
    return quad_term + quart_term


def zdc_unmodulated(n_ant, beta, nu1, nu2, upsilon1, upsilon2):
    """Harvested DC for the data-free fresh-chip frame on all N antennas."""
    return (
        nu1 * upsilon1 * n_ant**2 * (beta + 1.0) / 2.0
        + 3.0 * nu2 * upsilon2 * n_ant**4 * (2.0 * beta**2 + 3.0 * beta + 1.0) / 8.0
    )


def zdc_repeated(n_ant, beta, nu1, nu2, upsilon1, upsilon2):
    """Harvested DC for the fully repeated single-chip frame (power-transfer
    optimal: maximal intra-frame correlation)."""
    return (
        nu1 * upsilon1 * n_ant**2 * (beta + 1.0) ** 2 / 2.0
        + 3.0 * nu2 * upsilon2 * n_ant**4 * (beta + 1.0) ** 4 / 8.0
    )


def gaps(n_ant, beta, nu1, nu2, upsilon1, upsilon2):
    """Harvested-DC gaps of the repeated frame over the unmodulated frame
    (first) and over the harvesting-optimal modulated frame (second)."""
    xi1 = (
        nu1 * upsilon1 * n_ant**2 * (beta**2 + beta) / 2.0
        + 3.0
        * nu2
        * upsilon2
        * n_ant**4
        * (beta**4 + 4.0 * beta**3 + 4.0 * beta**2 + beta)
        / 8.0
    )
    xi2 = nu1 * upsilon1 * n_ant**2 * beta + 3.0 * nu2 * upsilon2 * n_ant**4 * (
        beta**3 + beta
    ) / 2.0
    return float(xi1), float(xi2)


def required_antennas(sr_target, beta, gamma0):
    """Real-valued antenna count achieving a target success rate in AWGN.

    Inverts the closed-form BER at the unconstrained optimal reference
    length; callers ceil the result to an integer antenna count.
    """
    if not (0.5 < sr_target < 1.0):
        raise ValueError("sr_target must lie in (0.5, 1)")
    phi_real, _ = phi_opt(beta, gamma0)
    return float(
        erfcinv(2.0 * (1.0 - sr_target)) ** 2 * lambda_factor(phi_real, beta, gamma0)
    )


@dataclass(frozen=True)
class RegionResult:
    points: list
    pareto: list


def region(n_ant, beta, gamma0, m, gains, nu1, nu2):
    """Enumerate the achievable (SR, z_DC) cloud and its Pareto frontier.

    Sweeps the reference length over the divisors of beta up to the
    admissible optimum and the antenna split over M in [1, N-1], K = N-M.
    SR uses the AWGN closed form (the region is defined through it), while
    the harvested DC uses the full fading factors -- that asymmetry is part
    of the region's definition.
    """
    if n_ant < 2:
        raise ValueError("need N >= 2 for a nontrivial antenna split")
    ups1, ups2 = channel_factors(m, gains)
    _, phi_adm = phi_opt(beta, gamma0)
    phis = [d for d in divisors(beta) if d <= phi_adm]
    if not phis:
        raise ValueError("no admissible reference length in the sweep")
    points = []
    for phi in phis:
        for m_it in range(1, n_ant):
            k_eh = n_ant - m_it
            points.append(
                RegionPoint(
                    sr=1.0 - ber_awgn(m_it, phi, beta, gamma0),
                    zdc=zdc_srdcsk(k_eh, phi, beta, nu1, nu2, ups1, ups2),
                    phi=phi,
                    m_it=m_it,
                    k_eh=k_eh,
                )
            )
    pareto = [
        p
        for p in points
        if not any(
            (q.sr >= p.sr and q.zdc >= p.zdc and (q.sr > p.sr or q.zdc > p.zdc))
            for q in points
        )
    ]
    return RegionResult(points=points, pareto=pareto)
