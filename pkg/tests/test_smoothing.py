import math
import random

import numpy as np
import pytest

from zetalab.errors import ConfigError
from zetalab.smoothing import (PerronKernelSpec, Rectangle, f_alpha_beta, fejer,
                               fejer_identity_check, interval_approx, perron_bracket_check,
                               perron_kernel, perron_sup_on_line, rect_W, selberg_G,
                               sgn_approx)


def test_selberg_values():
    assert selberg_G(0.0) == 2 / math.pi
    assert selberg_G(0.5) == pytest.approx(1 / math.pi, abs=1e-16)
    assert selberg_G(1.0) == 0.0
    g = selberg_G(np.linspace(0, 1, 10**4))
    assert np.all(g >= 0) and np.all(g <= 2 / math.pi + 1e-15)


def test_sgn_approx():
    for L in (4.0, 16.0):
        assert sgn_approx(0.0, L) == 0.0
        for x in (0.1, 1.0, 3.7):
            for sx in (x, -x):
                err = abs(sgn_approx(sx, L) - math.copysign(1, sx))
                assert err <= 5 * fejer(sx, L) + 1e-10
            assert sgn_approx(-x, L) == pytest.approx(-sgn_approx(x, L), abs=1e-14)


def test_rectangle():
    with pytest.raises(ConfigError):
        Rectangle(1, 0, 0, 1)
    r = Rectangle(-1, 1, -1, 1)
    assert list(r.contains([0, 2, 0.5 + 0.5j])) == [True, False, True]


def test_rect_W():
    r = Rectangle(-1, 1, -1, 1)
    assert abs(rect_W(0j, r, 32) - 1) < 0.05
    assert abs(rect_W(10 + 10j, r, 32)) < 0.05
    # the factorised form is the product of two one-dimensional approximations
    z = 0.3 - 0.8j
    assert rect_W(z, r, 8) == pytest.approx(
        interval_approx(z.real, -1, 1, 8) * interval_approx(z.imag, -1, 1, 8), abs=1e-12)


def test_f_alpha_beta_bound():
    u = np.linspace(0, 20, 2001)
    for a, b in ((-1, 1), (0.2, 0.3), (-3, 5)):
        assert np.all(np.abs(f_alpha_beta(u, a, b)) <= math.pi * u * abs(b - a) + 1e-15)


def test_fejer_identity():
    for x, L in ((0.3, 5.0), (2.0, 1.0), (1e-9, 3.0)):
        lhs, rhs = fejer_identity_check(x, L)
        assert abs(lhs - rhs) < 1e-10
    rng = random.Random(11)
    for _ in range(20):
        lhs, rhs = fejer_identity_check(rng.uniform(-5, 5), rng.uniform(0.1, 50))
        assert abs(lhs - rhs) < 1e-10


def test_perron_kernel():
    spec = PerronKernelSpec(0.01, 10)
    assert perron_kernel(0j, spec) == 1
    assert abs(perron_kernel(1e-9 + 1e-9j, spec) - 1) < 1e-9
    assert perron_kernel(5.0, PerronKernelSpec(0.05, 1)).real > 1
    assert perron_sup_on_line(spec) <= 3**10


def test_perron_spec_validation():
    with pytest.raises(ConfigError):
        PerronKernelSpec(0.6, 2, 1.0)
    with pytest.raises(ConfigError):
        PerronKernelSpec(0.1, 0)


def test_perron_bracket():
    spec = PerronKernelSpec(0.01, 10)
    lo, hi = perron_bracket_check(2.0, spec)
    assert abs(lo - 1) < 0.02 and abs(hi - 1) < 0.02
    lo, hi = perron_bracket_check(0.5, spec)
    assert abs(lo) < 0.02 and abs(hi) < 0.02
    for y in (math.exp(-0.08), math.exp(-0.03)):
        lo, hi = perron_bracket_check(y, spec)
        assert lo <= hi + 1e-12
