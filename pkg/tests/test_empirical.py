import math

import numpy as np
import pytest

from zetalab.errors import ConfigError, DegenerateError
from zetalab.empirical import (LineWindow, approximation_gap, charfun_compare, default_Y, ecdf,
                               phi_empirical, prop_complex_check, sample_abscissae, sample_line,
                               second_moment, secondary_term)
from zetalab.moments import phi_rand
from zetalab.smoothing import Rectangle
from zetalab.zeta import dirichlet_R


def test_window_validation():
    for bad in (dict(sigma=0.5), dict(T=50), dict(sample_count=10), dict(sampler="x"),
                dict(backend="x"), dict(T=6e6)):
        args = dict(sigma=0.75, T=1e4, sample_count=1000) | bad
        with pytest.raises(ConfigError):
            LineWindow(**args)


def test_stratified_coverage():
    w = LineWindow(0.75, 1e4, 1000)
    t = sample_abscissae(w)
    assert t.min() >= 1e4 and t.max() <= 2e4
    gaps = np.diff(np.concatenate([[1e4], t, [2e4]]))
    assert gaps.max() <= 2 * 1e4 / 1000
    u = sample_abscissae(LineWindow(0.75, 1e4, 1000, "uniform-random"))
    assert np.all((u >= 1e4) & (u <= 2e4))


def test_mean_log_modulus():
    s = sample_line(LineWindow(0.9, 1e4, 1000))
    assert abs(s.log_modulus.mean()) < 3 * s.log_modulus.std() / math.sqrt(len(s))


def test_determinism_and_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("ZETALAB_CACHE_DIR", str(tmp_path))
    w = LineWindow(0.8, 1e3, 200, seed=4)
    a = sample_line(w)
    assert len(list(tmp_path.glob("line_*"))) == 1
    b = sample_line(w)
    assert np.array_equal(a.records(), b.records())
    monkeypatch.delenv("ZETALAB_CACHE_DIR")
    c = sample_line(w)
    assert np.array_equal(a.records(), c.records())


def test_surrogate_close_to_full():
    T = 1e5
    Y = default_Y(T)
    s = sample_line(LineWindow(0.75, T, 200, seed=9))
    R = dirichlet_R(0.75, s.t, Y)
    gap = np.abs(s.log_modulus + 1j * s.argument - R)
    thr = Y ** (-(0.75 - 0.5) / 2) * math.log(T) ** 3
    assert np.mean(gap <= thr) >= 0.99


def test_phi_empirical():
    s = sample_line(LineWindow(0.75, 1e3, 500))
    assert phi_empirical(s, 0, 0).value == 1
    a, b = phi_empirical(s, 1.3, -0.4).value, phi_empirical(s, -1.3, 0.4).value
    assert abs(a - np.conj(b)) < 1e-15
    with pytest.raises(ConfigError):
        phi_empirical(s, 2e3, 0)


def test_charfun_on_surrogate():
    s = sample_line(LineWindow(0.75, 1e6, 10**4, backend="dirichlet-RY"))
    c = charfun_compare(s, 1.0, 1.0)
    assert c.phi_rand == phi_rand(0.75, 1.0, 1.0, Y=default_Y(1e6)).value
    assert c.ok
    # Fourier decay carries over to the line
    e = phi_empirical(s, 40.0, 0.0)
    assert abs(e.value) <= math.exp(-40 / (5 * math.log(40))) + 3 * e.stderr


def test_secondary_term():
    assert abs(secondary_term(0.9, 1e4)) < abs(secondary_term(0.6, 1e4))
    assert secondary_term(1.0, 1e4) == pytest.approx(-0.5 * math.log(2) * (2 * math.pi) / 1e4)


def test_second_moment_small():
    r = second_moment(0.75, 1e3, 2000)
    assert r.count + r.excluded_count == 2000
    assert abs(r.mean_sq - r.prediction) < 4 * r.stderr + abs(r.secondary_term)


def test_approximation_gap_small():
    gaps, thr, frac = approximation_gap(0.75, 1e4, 500)
    assert len(gaps) <= 500 and thr > 0 and frac >= 0.99


def test_prop_complex():
    with pytest.raises(DegenerateError):
        prop_complex_check(0.75, 1e6, 1 + 1j, 0, 1000)
    r = prop_complex_check(0.75, 1e6, 0, 0, 1000, allow_degenerate=True)
    assert r.lhs == 1 and r.rhs == 1
    r = prop_complex_check(0.75, 1e6, 0.5 + 0.5j, 0.5 - 0.5j, 1000, allow_degenerate=True)
    assert abs(r.lhs.imag) < 1e-12 and abs(r.rhs.imag) < 1e-12
    assert abs(r.lhs_T) <= abs(r.lhs) + 1e-15


def test_ecdf_rectangles():
    s = sample_line(LineWindow(0.75, 1e3, 500))
    e = ecdf(s)
    inf = float("inf")
    assert e.rectangle_prob(Rectangle(-inf, inf, -inf, inf)) == 1.0
    small, big = Rectangle(-0.5, 0.5, -0.5, 0.5), Rectangle(-1, 1, -1, 1)
    assert e.rectangle_prob(small) <= e.rectangle_prob(big)
