import math

import numpy as np
import pytest
from scipy import special as sp

from zetalab.errors import ConfigError, RangeError
from zetalab.model import ModelConfig, model_samples
from zetalab.moments import (M, M_arg, asymptotic_constants, cumulants, g2_from_g1, log_moment,
                             phi_rand, prime_factor)
from zetalab.primes import prime_zeta


def test_prime_factor_geometric_identity():
    # E|1 - X w|^{-2} = sum_n w^{2n} = 1/(1 - w^2)
    s = 0.75
    f = prime_factor(2, s, 2.0)
    assert f.values[0].real == pytest.approx(1 / (1 - 2 ** (-2 * s)), rel=1e-12)
    assert prime_factor(3, s, 0.0).values[0] == pytest.approx(1.0)
    assert abs(prime_factor(3, s, 0.0, weights=(0, 1)).values[1]) < 1e-15


def test_prime_factor_bessel_regime():
    s = 0.75
    for k in (2.0, 10.0, 50.0):
        for p in (10007, 1000003):
            if p**s <= k:
                continue
            v = prime_factor(p, s, k).values[0].real
            r = v / sp.i0(k / p**s)
            assert abs(r - 1) <= 10 * k * p ** (-2 * s)


def test_moment_basic_identities():
    for s in (0.6, 0.75, 0.9, 1.0):
        assert M(s, 0.0).M == 0.0
        assert abs(M(s, 2.0).M - math.log(sp.zeta(2 * s, 1))) < 1e-10
    r = M(0.75, 3.0)
    assert r.tail_bound < 1e-10 and math.isfinite(r.M)


def test_second_cumulant_at_zero():
    # M''(0) = (1/2) sum_p sum_n p^{-2 n sigma} / n^2 = (1/2) sum_n P(2 n sigma) / n^2
    s = 0.75
    direct = 0.5 * sum(prime_zeta(2 * n * s) / n**2 for n in range(1, 80))
    assert cumulants(s, 0.0).M2 == pytest.approx(direct, rel=1e-10)


def test_cumulant_positivity_and_zero_mean():
    for k in (0.0, 1.0, 10.0, 100.0):
        assert cumulants(0.75, k).M2 > 0
    assert abs(cumulants(0.75, 0.0).M1) < 1e-12


def test_euler_transformation_symmetry():
    # log F(z) - log F(2 - z) = (1 - z) sum_p log(1 - p^{-2 sigma}), so M'' is symmetric about 1
    for d in (0.3, 0.7):
        assert cumulants(0.75, 1 + d).M2 == pytest.approx(cumulants(0.75, 1 - d).M2, rel=1e-10)
    assert abs(cumulants(0.75, 1.0).M3) < 1e-14


def _growth_ratio(s, k):
    return M(s, k).M * math.log(k) / k ** (1 / s)


@pytest.mark.xfail(strict=True, reason="ratio still rising at k = 200..1e3; the "
                   "1/log k correction only turns it toward g0 beyond k ~ 1e3")
def test_large_k_growth_toward_g0_desk_pair():
    g0 = asymptotic_constants(0.75).g0
    r = [_growth_ratio(0.75, k) for k in (200.0, 400.0)]
    assert abs(r[1] - g0) < abs(r[0] - g0)


def test_large_k_growth_toward_g0():
    g0 = asymptotic_constants(0.75).g0
    r = [_growth_ratio(0.75, 10.0**j) for j in (4, 5, 6, 7, 8, 9)]
    assert all(g0 < b < a for a, b in zip(r, r[1:]))


def test_complex_z_and_monte_carlo():
    s = 0.75
    x = model_samples(ModelConfig(s), 10**6)
    z = 1.0 + 0.5j
    mc = np.exp(z * x[:, 0])
    val = np.exp(M(s, z).M)
    assert abs(mc.mean() - val) < 4 * np.abs(mc - mc.mean()).std() / math.sqrt(len(mc)) + 1e-3


def test_argument_moment_symmetries():
    s = 0.75
    assert M_arg(s, 0.0).M == 0.0
    assert M_arg(s, 1.5).M == pytest.approx(M_arg(s, -1.5).M, rel=1e-12)
    # Re and Im of each Log factor have equal variance
    assert cumulants(s, 0.0, "argument").M2 == pytest.approx(cumulants(s, 0.0).M2, rel=1e-10)


def test_phi_rand_properties():
    s = 0.75
    assert phi_rand(s, 0, 0).value == 1
    a, b = phi_rand(s, 1.2, -0.7).value, phi_rand(s, -1.2, 0.7).value
    assert abs(a - np.conj(b)) < 1e-14
    assert abs(phi_rand(s, 60, 0).value) <= math.exp(-60 / (5 * math.log(60)))


def test_phi_rand_monte_carlo():
    s = 0.75
    x = model_samples(ModelConfig(s), 10**6)
    for u, v in ((1.0, 0.0), (0.5, 1.0)):
        e = np.exp(1j * (u * x[:, 0] + v * x[:, 1]))
        se = np.abs(e - e.mean()).std() / math.sqrt(len(e))
        assert abs(e.mean() - phi_rand(s, u, v).value) < 4 * se


def test_phi_rand_truncated():
    r = phi_rand(0.75, 1.0, 1.0, Y=1000)
    assert r.truncation_bound == pytest.approx(10 * 2 / 1000**0.25)
    assert abs(r.value - phi_rand(0.75, 1.0, 1.0).value) < r.truncation_bound


def test_ranges():
    with pytest.raises(ConfigError):
        M(0.5, 1.0)
    with pytest.raises(RangeError):
        log_moment(0.75, 2e9)
    with pytest.raises(RangeError):
        phi_rand(0.75, 2e3, 0)


# g0, g1 at sigma = 0.6 and 0.75 by mpmath: tanh-sinh on the middle range with
# besseli, the substitution u = w^3 at the singular lower end and u = H / w^3
# on the slowly decaying upper tail (asymptotic series of log I0 beyond 1e6)
G1_MPMATH = {0.6: 2.6266742744275287, 0.75: 3.2956327383193822, 0.9: 9.0270009253646638}
G0_MPMATH_075 = 2.471724553309586


def test_g_constants_against_mpmath():
    for s, g1 in G1_MPMATH.items():
        c = asymptotic_constants(s)
        # the oracle's own accuracy degrades near sigma = 1 (tail singularity w^{3q-4})
        assert c.g1 == pytest.approx(g1, rel=1e-12 if s < 0.8 else 1e-8)
        assert c.g0 == pytest.approx(s * c.g1, rel=1e-13)
    assert asymptotic_constants(0.75).g0 == pytest.approx(G0_MPMATH_075, rel=1e-9)


def _composite_g0(sigma, n=10**6):
    """Composite Simpson in x = log u over [1e-3, 1e8] with scipy's i0e, closed
    by the two-term Taylor integral below and the asymptotic integral above."""
    q = 1 / sigma
    lo, hi = 1e-3, 1e8
    x = np.linspace(math.log(lo), math.log(hi), n + 1)
    u = np.exp(x)
    f = (u + np.log(sp.i0e(u))) * np.exp(-q * x)
    h = x[1] - x[0]
    mid = h / 3 * (f[0] + f[-1] + 4 * f[1:-1:2].sum() + 2 * f[2:-1:2].sum())
    low = lo ** (2 - q) / (4 * (2 - q)) - lo ** (4 - q) / (64 * (4 - q))
    Hq = hi**-q
    high = (hi * Hq / (q - 1) - 0.5 * math.log(2 * math.pi) * Hq / q
            - 0.5 * Hq * (math.log(hi) / q + 1 / q**2) + Hq / hi / (8 * (q + 1)))
    return low + mid + high


def test_g0_composite_oracle():
    assert asymptotic_constants(0.75).g0 == pytest.approx(_composite_g0(0.75), rel=1e-8)


def test_g2_identity():
    c = asymptotic_constants(0.75)
    assert c.g0 > 0 and c.g1 > 0
    assert abs(c.g2 - g2_from_g1(0.75, c.g1)) < 1e-10
    assert c.g2_residual < 1e-10


def test_constants_domain():
    with pytest.raises(ConfigError):
        asymptotic_constants(1.0)
