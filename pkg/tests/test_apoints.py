import json
import math

import numpy as np
import pytest

from zetalab.apoints import (block_edges, census, count_blocks, density_c, f_a,
                             littlewood_check, moment_shadow, polish_roots, winding_count,
                             winding_detail, write_census_csv, write_census_json)
from zetalab.errors import ConfigError
from zetalab.zeta import zeta, zeta_batch


def test_empty_region():
    # grid scan: |zeta - 5| stays far from 0 on the closed rectangle
    s, t = np.meshgrid(np.linspace(0.9, 0.91, 21), np.linspace(100, 101, 201))
    assert np.abs(zeta_batch(s, t) - 5).min() > 1
    assert winding_count(5, 0.90, 0.91, 100, 101) == 0


def test_validation():
    with pytest.raises(ConfigError):
        winding_count(0, 0.6, 0.9, 100, 110)
    with pytest.raises(ConfigError):
        winding_count(2, 0.5, 0.9, 100, 110)
    with pytest.raises(ConfigError):
        density_c(2, 0.55, 0.95, h=0.1, n=100)


def test_residual_and_partition():
    w = winding_detail(2, 0.55, 0.95, 100, 200)
    assert w.residual < 0.1
    parts = [winding_count(2, 0.55, 0.95, lo, lo + 25) for lo in (100, 125, 150, 175)]
    assert sum(parts) == w.count
    split = winding_count(2, 0.55, 0.75, 100, 200) + winding_count(2, 0.75, 0.95, 100, 200)
    assert split == w.count


def test_polished_roots():
    n = winding_count(2, 0.55, 0.95, 100, 150)
    roots = polish_roots(2, 0.55, 0.95, 100, 150)
    assert len(roots) == n > 0
    for r in roots:
        assert 0.55 <= r.s.real < 0.95 and 100 <= r.s.imag < 150
        assert abs(zeta(r.s) - 2) < 1e-10


def test_monotone_in_strip():
    counts = [winding_count(2, s1, 0.95, 100, 200) for s1 in (0.8, 0.7, 0.6, 0.55)]
    assert all(b >= a for a, b in zip(counts, counts[1:]))


def test_block_edges():
    e = block_edges(1e3)
    assert e[0] == 1e3 and e[-1] == 2e3 and len(e) == 11
    blocks = count_blocks(2, 0.55, 0.95, 150)
    assert [b.t_lo for b in blocks] == [150.0, 250.0]
    assert blocks[-1].t_hi >= 300.0
    assert sum(b.count for b in blocks) == winding_count(2, 0.55, 0.95, 150, blocks[-1].t_hi)


def test_f_a_large_a():
    # E zeta^k = 1 for every k >= 1, so when |zeta| < |a| the mean of
    # log|zeta - a| is log|a| - Re sum_k a^{-k}/k = log|a - 1|
    v, se = f_a(0.75, 1e6, n=10**5)
    assert abs(v - math.log(1e6 - 1)) < 3 * se
    assert abs(v - math.log(1e6)) < 2e-6


def test_f_a_conjugate():
    v1, s1 = f_a(0.75, 1 + 1j, n=10**5)
    v2, s2 = f_a(0.75, 1 - 1j, n=10**5, seed=1)
    assert abs(v1 - v2) < 3 * math.hypot(s1, s2)


def test_density_positive_and_additive():
    n = 10**5
    c, se = density_c(2, 0.6, 0.8, n=n)
    assert c > 3 * se
    c1, se1 = density_c(2, 0.6, 0.7, n=n)
    c2, se2 = density_c(2, 0.7, 0.8, n=n)
    assert abs(c - c1 - c2) < 3 * math.sqrt(se**2 + se1**2 + se2**2)
    cc, sec = density_c(2, 0.6, 0.8, n=n, seed=1)
    cj, sej = density_c(2 + 0j, 0.6, 0.8, n=n)
    assert cj == c
    assert abs(c - cc) < 3 * math.hypot(se, sec)


def test_density_h_stability():
    c, se = density_c(2, 0.6, 0.8, h=0.01, n=10**5)
    c2, se2 = density_c(2, 0.6, 0.8, h=0.005, n=10**5)
    assert abs(c - c2) < 3 * math.hypot(se, se2)


def test_census_outputs(tmp_path):
    c = census(2, 0.55, 0.95, 150, density=(0.4, 0.01), polish=True)
    assert c.count == sum(b.count for b in c.blocks) == len(c.roots)
    assert c.predicted_count == pytest.approx(60.0)
    write_census_csv(tmp_path / "c.csv", c)
    write_census_json(tmp_path / "c.json", c)
    rows = (tmp_path / "c.csv").read_text().splitlines()
    assert rows[0] == "t_lo,t_hi,count,refinements" and len(rows) == 3
    d = json.loads((tmp_path / "c.json").read_text())
    assert d["count"] == c.count and d["a"] == [2.0, 0.0]


def test_littlewood_dominant_term():
    r = littlewood_check(1e3, 0.75, 1e3, n_t=1000, n_model=10**5)
    assert abs(r.lhs - math.log(1e3 - 1)) < 3 * r.lhs_stderr
    assert abs(r.rhs - math.log(1e3 - 1)) < 3 * r.rhs_stderr
    r1 = littlewood_check(1 + 1j, 0.75, 1e3, n_t=1000, n_model=10**5)
    r2 = littlewood_check(1 - 1j, 0.75, 1e3, n_t=1000, n_model=10**5)
    assert abs(r1.lhs - r2.lhs) < 3 * math.hypot(r1.lhs_stderr, r2.lhs_stderr)


def test_moment_shadow():
    m2, m4, env = moment_shadow(0.75, 1e3, 1 + 1j, n=1000)
    assert math.isfinite(m2) and math.isfinite(m4) and m4 < env
