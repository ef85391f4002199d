import json
import math

import numpy as np
import pytest

from zetalab.discrepancy import (TrendReport, _max_block, backend_for, discrepancy_estimate,
                                 model_ecdf, trend_summary, write_trend_csv, write_trend_json)
from zetalab.empirical import Ecdf2D
from zetalab.errors import ConfigError
from zetalab.model import ModelConfig
from zetalab.smoothing import Rectangle
from zetalab.tails import tail_probability_mc


def _brute(delta):
    g0, g1 = delta.shape
    c = np.zeros((g0 + 1, g1 + 1))
    c[1:, 1:] = delta.cumsum(0).cumsum(1)
    best = 0.0
    for r0 in range(g0):
        for r1 in range(r0 + 1, g0 + 1):
            for c0 in range(g1):
                for c1 in range(c0 + 1, g1 + 1):
                    s = c[r1, c1] - c[r0, c1] - c[r1, c0] + c[r0, c0]
                    best = max(best, abs(s))
    return best


def test_max_block_brute_force():
    rng = np.random.default_rng(1)
    for shape in ((5, 7), (8, 8), (1, 4)):
        d = rng.normal(size=shape)
        best, (r0, r1, c0, c1) = _max_block(d)
        assert best == pytest.approx(_brute(d), abs=1e-12)
        assert abs(d[r0:r1 + 1, c0:c1 + 1].sum()) == pytest.approx(best, abs=1e-12)


def _model(seed, n=10**4):
    return model_ecdf(ModelConfig(0.75, master_seed=seed), n)


def test_identical_and_null():
    a, b = _model(0), _model(1)
    assert discrepancy_estimate(a, a).D_hat == 0.0
    r = discrepancy_estimate(a, b, 32)
    assert 0 <= r.D_hat <= 3 * r.stat_err and r.stat_err > 0


def test_grid_refinement_monotone():
    a, b = _model(0), _model(1)
    d = [discrepancy_estimate(a, b, g).D_hat for g in (16, 32, 64, 128)]
    assert all(y >= x - 1e-15 for x, y in zip(d, d[1:]))


def test_rectangle_probabilities():
    m = _model(0, 10**5)
    inf = float("inf")
    assert m.rectangle_prob(Rectangle(-inf, inf, -inf, inf)) == 1.0
    tail = tail_probability_mc(0.75, 1.5, 10**5)
    assert m.rectangle_prob(Rectangle(1.5, inf, -inf, inf)) == pytest.approx(tail.p_mc, abs=1e-12)
    sym = Ecdf2D.from_xy(m.points[:, 0], -m.points[:, 1])
    r = Rectangle(-inf, inf, 0.2, 1.0)
    p, q = m.rectangle_prob(r), sym.rectangle_prob(r)
    assert abs(p - q) < 3 * math.sqrt(2 * p * (1 - p) / m.count)


def test_validation():
    a = _model(0)
    with pytest.raises(ConfigError):
        discrepancy_estimate(a, a, 8)
    with pytest.raises(ConfigError):
        discrepancy_estimate(Ecdf2D.from_xy([], []), a)


def test_stat_err_scaling():
    a, b = _model(0, 10**5), _model(1, 10**5)
    big = discrepancy_estimate(a, b, 16).stat_err
    small = discrepancy_estimate(Ecdf2D(a.points[::10]), Ecdf2D(b.points[::10]), 16).stat_err
    assert small / big == pytest.approx(math.sqrt(10), rel=1e-12)


def test_backend_switch():
    assert backend_for(1e5) == "full-zeta" and backend_for(1e6) == "dirichlet-RY"


def test_outputs(tmp_path):
    a, b = _model(0), _model(1)
    reps = [discrepancy_estimate(a, b, 16, 0.75, T) for T in (1e3, 1e4, 1e5)]
    tr = TrendReport(0.75, reps, -0.5, (-1.0, 0.0))
    write_trend_csv(tmp_path / "t.csv", tr)
    write_trend_json(tmp_path / "t.json", tr)
    rows = (tmp_path / "t.csv").read_text().splitlines()
    assert rows[0].startswith("T,D_hat") and len(rows) == 4
    data = json.loads((tmp_path / "t.json").read_text())
    assert data == json.loads(json.dumps(trend_summary(tr)))
    assert len(data["reports"]) == 3
