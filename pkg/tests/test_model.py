import math

import numpy as np
import pytest
from scipy.special import zeta as hurwitz_zeta

from zetalab.errors import CacheError, ConfigError
from zetalab.model import (ModelConfig, model_samples, moment_oracle_small, read_cache,
                           sample_log_zeta, sample_log_zeta_batch, sample_R, sample_R_batch,
                           tail_variance, write_cache)
from zetalab.primes import prime_power_arrays, table_for, prime_zeta_tail


def test_config_validation():
    for bad in (dict(sigma=0.5), dict(sigma=1.1), dict(sigma=0.7, prime_cutoff=1),
                dict(sigma=0.7, tail_mode="other")):
        with pytest.raises(ConfigError):
            ModelConfig(**bad)


def test_single_prime_bound():
    cfg = ModelConfig(0.75, prime_cutoff=2, tail_mode="drop")
    x = sample_log_zeta_batch(cfg, 0, 5000)
    assert np.all(np.abs(x[:, 0]) <= -math.log(1 - 2 ** -0.75) + 1e-15)
    # one factor: -Log(1 - e^{i theta} 2^-sigma) has |arg| < pi/2
    assert np.all(np.abs(x[:, 1]) < math.pi / 2)


def test_determinism_and_stream_addressing():
    cfg = ModelConfig(0.75, master_seed=99)
    a = sample_log_zeta_batch(cfg, 0, 1000)
    b = sample_log_zeta_batch(cfg, 500, 500)
    assert np.array_equal(a[500:], b)
    s = sample_log_zeta(cfg, 123)
    assert (s.log_modulus, s.argument) == tuple(a[123])


def test_common_random_numbers_across_sigma():
    cfg = ModelConfig(0.75, tail_mode="drop")
    both = sample_log_zeta_batch(cfg, 0, 100, sigmas=[0.7, 0.75])
    assert np.array_equal(both[1], sample_log_zeta_batch(cfg, 0, 100))
    assert np.array_equal(both[0], sample_log_zeta_batch(cfg.with_sigma(0.7), 0, 100))


def test_zero_mean_and_second_moment():
    cfg = ModelConfig(0.75)
    x = model_samples(cfg, 10**6)
    lm = x[:, 0]
    assert abs(lm.mean()) < 3 * lm.std() / math.sqrt(len(lm))
    sq = np.exp(2 * lm)
    assert abs(sq.mean() - hurwitz_zeta(1.5, 1)) < 3 * sq.std() / math.sqrt(len(sq))


def test_tail_variance_linear_terms():
    v = tail_variance(0.75, 1000, prime_powers=False)
    assert v == pytest.approx(0.5 * prime_zeta_tail(1.5, 1000), rel=1e-15)
    assert tail_variance(0.75, 1000) > v
    assert ModelConfig(0.75).truncation_sd == pytest.approx(math.sqrt(v), rel=1e-15)


def test_R_single_term():
    cfg = ModelConfig(0.75)
    r = sample_R_batch(cfg, 2, 0, 1000)
    assert np.allclose(np.hypot(r[:, 0], r[:, 1]), 2 ** -0.75, rtol=0, atol=1e-15)


def test_R_second_moment():
    cfg = ModelConfig(0.75)
    r = sample_R_batch(cfg, 100, 0, 10**6)
    a2 = r[:, 0] ** 2 + r[:, 1] ** 2
    _, n, v, _ = prime_power_arrays(table_for(100), 100)
    exact = float(np.sum(1.0 / (n**2 * v.astype(float) ** 1.5)))
    assert abs(a2.mean() - exact) < 3 * a2.std() / math.sqrt(len(a2))
    s = sample_R(cfg, 100, 17)
    assert (s.log_modulus, s.argument) == tuple(r[17])


def test_R_rejects_Y_above_cutoff():
    with pytest.raises(ConfigError):
        sample_R_batch(ModelConfig(0.75, prime_cutoff=100), 1000, 0, 1)


def test_oracle_small():
    s = 0.75
    w = [p ** (-2 * s) for p in (2, 3, 5)]
    assert moment_oracle_small([2, 3, 5], s, 1) == pytest.approx(sum(w), rel=1e-15)
    S4 = sum(p ** (-4 * s) for p in (2, 3, 5))
    assert moment_oracle_small([2, 3, 5], s, 2) == pytest.approx(2 * sum(w) ** 2 - S4, rel=1e-14)
    # one prime: only the tuple (p, p) pairs with itself
    assert moment_oracle_small([2], s, 2) == pytest.approx(2 ** (-4 * s), rel=1e-15)
    with pytest.raises(ConfigError):
        moment_oracle_small([2, 3, 5, 7, 11, 13, 17], s, 1)


def test_oracle_against_monte_carlo():
    cfg = ModelConfig(0.75, prime_cutoff=5, tail_mode="drop")
    # with Y = 3 there are no prime powers, so R_Y is the linear sum over {2, 3}
    r = sample_R_batch(cfg, 3, 0, 10**6)
    m4 = (r[:, 0] ** 2 + r[:, 1] ** 2) ** 2
    exact = moment_oracle_small([2, 3], 0.75, 2)
    assert abs(m4.mean() - exact) < 4 * m4.std() / math.sqrt(len(m4))


def test_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("ZETALAB_CACHE_DIR", str(tmp_path))
    cfg = ModelConfig(0.8, master_seed=5)
    a = model_samples(cfg, 1000)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    b = model_samples(cfg, 1000)
    assert np.array_equal(a, b)
    sigma, P, seed, rec = read_cache(files[0])
    assert (sigma, P, seed) == (0.8, 1000, 5) and np.array_equal(rec, a)


def test_cache_header_mismatch(tmp_path):
    p = tmp_path / "x.zrmc"
    write_cache(p, 0.8, 1000, 1, np.zeros((3, 2)))
    raw = bytearray(p.read_bytes())
    p.write_bytes(bytes(raw[:-4]))
    with pytest.raises(CacheError):
        read_cache(p)
