import math

import pytest

from zetalab.errors import ConfigError
from zetalab.moments import ARGUMENT, asymptotic_constants, cumulants, M
from zetalab.tails import (arg_tail_saddle, correction_scale, solve_saddle, tail_compare,
                           tail_probability_mc, tail_probability_saddle)


def test_round_trip():
    tau = cumulants(0.75, 2.0).M1
    assert solve_saddle(0.75, tau).kappa == pytest.approx(2.0, abs=1e-8)


def test_monotone_kappa():
    assert solve_saddle(0.75, 2.0).kappa > solve_saddle(0.75, 1.0).kappa


def test_kappa_growth_constant():
    s, tau = 0.75, 50.0
    g2 = asymptotic_constants(s).g2
    e = s / (1 - s)
    ratio = solve_saddle(s, tau).kappa / (tau * math.log(tau)) ** e
    assert abs(ratio / g2 - 1) < 0.25


def test_legendre_derivative():
    def dual(t):
        k = solve_saddle(0.75, t).kappa
        return t * k - M(0.75, k).M
    for t in (2.0, 5.0, 10.0):
        h = 1e-4 * t
        fd = (dual(t + h) - dual(t - h)) / (2 * h)
        assert fd == pytest.approx(solve_saddle(0.75, t).kappa, rel=1e-4)


def test_saddle_decreasing():
    p = [tail_probability_saddle(0.75, t).p_saddle for t in (1.0, 1.5, 2.0, 3.0)]
    assert all(b < a for a, b in zip(p, p[1:]))
    q = [arg_tail_saddle(0.75, t).p_saddle for t in (1.0, 1.5, 2.0, 3.0)]
    assert all(b < a for a, b in zip(q, q[1:]))


def test_saddle_domain():
    with pytest.raises(ConfigError):
        tail_probability_saddle(0.75, 0.5)
    with pytest.raises(ConfigError):
        tail_probability_mc(0.75, 1.0, 0)


def test_mc_certain_events():
    assert tail_probability_mc(0.75, -1e6, 1000).p_mc == 1.0
    assert tail_probability_mc(0.75, 1e6, 1000).p_mc == 0.0


def test_mc_seed_consistency():
    a = tail_probability_mc(0.75, 1.0, 10**6, seed=0)
    assert tail_probability_mc(0.75, 1.0, 10**6, seed=0).p_mc == a.p_mc
    b = tail_probability_mc(0.75, 1.0, 10**6, seed=1)
    assert abs(a.p_mc - b.p_mc) < 6 * math.hypot(a.mc_stderr, b.mc_stderr)


def test_saddle_against_mc():
    e = tail_compare(0.75, 1.5, 10**6)
    assert abs(e.p_saddle - e.p_mc) <= max(3 * e.mc_stderr, 0.3 * e.p_mc)


def test_arg_tail():
    up = tail_probability_mc(0.75, 1.5, 10**6, kind=ARGUMENT)
    lo = tail_probability_mc(0.75, -1.5, 10**6, kind=ARGUMENT, lower=True)
    assert abs(up.p_mc - lo.p_mc) < 6 * math.hypot(up.mc_stderr, lo.mc_stderr)
    sad = arg_tail_saddle(0.75, 1.5).p_saddle
    assert abs(sad - up.p_mc) <= max(3 * up.mc_stderr, 0.3 * up.p_mc)


def test_compare_skips_rare_events():
    e = tail_compare(0.75, 3.0, 1000)
    assert e.p_mc is None and e.p_saddle > 0


def test_correction_scale_and_curvature_envelope():
    assert correction_scale(0.75, math.e) == pytest.approx(math.e ** (-1 / 3))
    vals = [cumulants(0.75, k).M2 * math.log(k) / k ** (1 / 0.75 - 2) for k in (50.0, 150.0, 500.0)]
    assert max(vals) / min(vals) < 5
