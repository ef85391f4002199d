import math

import numpy as np
import pytest
from scipy import special as sp

from zetalab.errors import ConfigError, QuadratureError
from zetalab.special import (QuadratureSpec, bessel_I0, bessel_i0e, bessel_J0, integrate,
                             log_I0, log_I0_derivs, periodic_trapezoid)

X = np.concatenate([[0.0, 1e-8, 1e-3, 0.5, 1, 5, 19.9, 20, 20.1, 30, 100], np.logspace(3, 8, 6)])


def test_i0e_against_scipy():
    assert np.max(np.abs(bessel_i0e(X) / sp.i0e(X) - 1)) < 2e-15


def test_I0_small_and_j0():
    x = np.linspace(0, 30, 301)
    assert np.max(np.abs(bessel_I0(x) / sp.i0(x) - 1)) < 2e-15
    assert np.max(np.abs(bessel_J0(x) - sp.j0(x))) < 1e-14


def test_log_I0_large_argument():
    # log I0(x) = x + log i0e(x), no overflow at 1e8
    assert log_I0(1e8) == pytest.approx(1e8 + math.log(sp.i0e(1e8)), rel=1e-15)


def test_log_I0_derivatives_by_differences():
    for u in (0.3, 4.0, 19.9, 20.1, 60.0, 1e4):
        d = log_I0_derivs(u, 3)
        h = 1e-4 * max(u, 1)
        for k in range(1, 4):
            num = (log_I0_derivs(u + h, k - 1)[k - 1] - log_I0_derivs(u - h, k - 1)[k - 1]) / (2 * h)
            assert num == pytest.approx(d[k], rel=1e-6, abs=1e-12)


def test_first_derivative_is_bessel_ratio():
    for u in (0.1, 2.0, 25.0, 500.0):
        assert log_I0_derivs(u, 1)[1] == pytest.approx(sp.i1e(u) / sp.i0e(u), rel=1e-14)


def test_periodic_trapezoid_spectral():
    # int_0^1 exp(cos 2 pi x) dx = I0(1)
    v, err = periodic_trapezoid(lambda x: np.exp(np.cos(2 * np.pi * x)), 0.0, 1.0)
    assert abs(v - sp.i0(1.0)) < 1e-14


def test_periodic_trapezoid_budget():
    with pytest.raises(QuadratureError):
        periodic_trapezoid(lambda x: np.abs(x - 0.3) ** 0.5, 0.0, 1.0, abs_tol=1e-15, max_nodes=64)


def test_integrate_rules():
    v, _ = integrate(lambda x: math.exp(-x * x), QuadratureSpec("transformed-semi-infinite"), (0, math.inf))
    assert v == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-13)
    v, _ = integrate(math.sin, QuadratureSpec(), (0, math.pi))
    assert v == pytest.approx(2.0, rel=1e-14)


def test_quadrature_spec_validation():
    with pytest.raises(ConfigError):
        QuadratureSpec("simpson")
    with pytest.raises(ConfigError):
        QuadratureSpec(abs_tol=0)
