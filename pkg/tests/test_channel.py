import numpy as np
import pytest
from scipy.special import gammaln
from scipy.stats import gamma as gamma_dist
from scipy.stats import kstest

from chaoswipt.channel import (
    ChannelConfig,
    ChannelRealization,
    nakagami_moment,
    propagate,
    sample_channel,
)


def test_config_validation():
    with pytest.raises(ValueError):
        ChannelConfig(m=0.5, gains=(1.0,))
    with pytest.raises(ValueError):
        ChannelConfig(gains=(0.6, 0.3))  # does not sum to 1
    with pytest.raises(ValueError):
        ChannelConfig(gains=(0.5, 0.5), delays=(1, 2))  # first delay nonzero
    with pytest.raises(ValueError):
        ChannelConfig(gains=(0.5, 0.5), delays=(0, 2, 3))  # wrong length
    with pytest.raises(ValueError):
        ChannelConfig(gains=(1.0,), distance=0.0)


def test_no_fading_limit_large_m():
    rng = np.random.default_rng(0)
    cfg = ChannelConfig(m=1e6, gains=(1.0,))
    real = sample_channel(cfg, 4, rng)
    assert np.all(np.abs(real.alpha - 1.0) < 0.01)


def test_rayleigh_mean_amplitude():
    rng = np.random.default_rng(1)
    cfg = ChannelConfig(m=1.0, gains=(1.0,))
    draws = np.concatenate(
        [sample_channel(cfg, 1000, rng).alpha.ravel() for _ in range(1000)]
    )
    assert draws.size == 1_000_000
    assert abs(draws.mean() - np.sqrt(np.pi) / 2.0) < 0.003


def test_per_path_power_matches_gains():
    rng = np.random.default_rng(2)
    cfg = ChannelConfig(m=4.0, gains=(0.6, 0.4))
    alpha = sample_channel(cfg, 500_000, rng).alpha
    assert abs(np.mean(alpha[0] ** 2) / 0.6 - 1.0) < 0.01
    assert abs(np.mean(alpha[1] ** 2) / 0.4 - 1.0) < 0.01


@pytest.mark.parametrize(
    "n,m,omega,expected",
    [
        (2, 3.7, 0.7, 0.7),
        (4, 1.0, 1.0, 2.0),
        (1, 2.0, 1.0, np.exp(gammaln(2.5) - gammaln(2.0)) * 0.5**0.5),
    ],
)
def test_nakagami_moment_closed_form(n, m, omega, expected):
    assert nakagami_moment(n, m, omega) == pytest.approx(expected, rel=1e-12)


def test_sampled_moments_match_nakagami_moment():
    rng = np.random.default_rng(3)
    m, omega = 2.5, 0.8
    cfg = ChannelConfig(m=m, gains=(0.8, 0.2))
    alpha = sample_channel(cfg, 400_000, rng).alpha[0]
    for order in (2, 4):
        samples = alpha**order
        se = samples.std(ddof=1) / np.sqrt(samples.size)
        assert abs(samples.mean() - nakagami_moment(order, m, omega)) < 3 * se


def test_identity_channel_passthrough():
    rng = np.random.default_rng(4)
    cfg = ChannelConfig(gains=(1.0,), distance=1.0, pathloss_exp=2.0, fading=False)
    real = ChannelRealization(alpha=np.ones((1, 1)))
    frame = rng.uniform(-1, 1, 32)
    out = propagate(frame, real, cfg, rng, noise_enabled=False)
    np.testing.assert_allclose(out[0], frame)


def test_coherent_path_sum_with_zero_delays():
    rng = np.random.default_rng(5)
    cfg = ChannelConfig(m=1.0, gains=(0.5, 0.5), distance=1.0, pathloss_exp=2.0)
    real = ChannelRealization(alpha=np.array([[0.6], [0.8]]))
    frame = rng.uniform(-1, 1, 16)
    out = propagate(frame, real, cfg, rng, noise_enabled=False)
    np.testing.assert_allclose(out[0], 1.4 * frame)


def test_delayed_path_shifts_with_zero_padded_head():
    cfg = ChannelConfig(m=1.0, gains=(0.5, 0.5), delays=(0, 2))
    real = ChannelRealization(alpha=np.array([[1.0], [2.0]]))
    frame = np.array([1.0, 2.0, 3.0, 4.0])
    rng = np.random.default_rng(0)
    out = propagate(frame, real, cfg, rng, noise_enabled=False)
    np.testing.assert_allclose(out[0], [1.0, 2.0, 3.0 + 2.0, 4.0 + 4.0])


def test_delay_and_zero_delay_agree_when_profile_is_zero():
    rng = np.random.default_rng(6)
    frame = rng.uniform(-1, 1, 24)
    real = ChannelRealization(alpha=np.array([[0.3], [1.1]]))
    base = ChannelConfig(m=2.0, gains=(0.5, 0.5))
    explicit = ChannelConfig(m=2.0, gains=(0.5, 0.5), delays=(0, 0))
    out_a = propagate(frame, real, base, rng, noise_enabled=False)
    out_b = propagate(frame, real, explicit, rng, noise_enabled=False)
    np.testing.assert_array_equal(out_a, out_b)


def test_delay_beyond_frame_rejected():
    cfg = ChannelConfig(m=1.0, gains=(0.5, 0.5), delays=(0, 40))
    real = ChannelRealization(alpha=np.ones((2, 1)))
    with pytest.raises(ValueError):
        propagate(np.zeros(8), real, cfg, np.random.default_rng(0))


def test_noise_variance():
    rng = np.random.default_rng(7)
    n0 = 0.8
    cfg = ChannelConfig(gains=(1.0,), noise_psd=n0, fading=False)
    real = ChannelRealization(alpha=np.zeros((1, 1)))
    samples = np.concatenate(
        [propagate(np.zeros(1000), real, cfg, rng)[0] for _ in range(1000)]
    )
    assert samples.size == 1_000_000
    assert abs(samples.var() / (n0 / 2.0) - 1.0) < 0.01


def test_aggregate_power_fits_gamma_law():
    # kappa = sum over antennas and paths of alpha^2 follows
    # Gamma(M*m*L, 1/(m*L)) when the gains split evenly; the law is used
    # as-is for mildly uneven gains too
    rng = np.random.default_rng(8)
    m, m_ant = 1.0, 2
    cfg = ChannelConfig(m=m, gains=(0.6, 0.4))
    kappas = np.empty(1_000_000)
    chunk = 100_000
    for i in range(0, kappas.size, chunk):
        alpha = sample_channel(cfg, m_ant * chunk, rng).alpha
        kappas[i : i + chunk] = (alpha**2).sum(axis=0).reshape(chunk, m_ant).sum(axis=1)
    shape, scale = m_ant * m * cfg.n_paths, 1.0 / (m * cfg.n_paths)
    stat = kstest(kappas, lambda x: gamma_dist.cdf(x, shape, scale=scale)).statistic
    assert stat < 0.01


def test_awgn_factory():
    cfg = ChannelConfig.awgn(distance=20.0, pathloss_exp=4.0, noise_psd=0.1)
    assert not cfg.fading
    assert cfg.path_gain == pytest.approx(20.0**-4)
