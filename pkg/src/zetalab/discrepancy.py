"""Rectangle discrepancy between the empirical law of log zeta(sigma + it) and
the random model.

Rectangles have corners on a g x g grid of pooled marginal quantiles.  With
the signed cell masses ``Delta = H_emp / n_emp - H_model / n_model`` the
largest |sum of Delta over a sub-block| is found by fixing a band of rows,
collapsing it to column sums and running a maximum-subarray scan, O(g^3).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from numba import njit
from scipy import stats

from .empirical import Ecdf2D, LineWindow, ecdf, sample_line
from .errors import ConfigError
from .model import ModelConfig, model_samples
from .smoothing import Rectangle

G_MIN, G_MAX = 16, 512
DEFAULT_G = 64
STAT_ERR_C = 2.0
SURROGATE_FROM = 1e6       # bulk statistics switch to the R_Y backend at this T
CSV_COLUMNS = ("T", "D_hat", "stat_err", "grid_resolution", "emp_count", "model_count")


@dataclass(frozen=True)
class DiscrepancyReport:
    sigma: float
    T: float | None
    D_hat: float
    grid_resolution: int
    emp_count: int
    model_count: int
    stat_err: float
    rect_argmax: Rectangle
    grid_slack: float = 0.0
    backend: str = ""


@dataclass(frozen=True)
class TrendReport:
    sigma: float
    reports: list = field(default_factory=list)
    slope: float = float("nan")
    slope_ci: tuple = (float("nan"), float("nan"))


def model_ecdf(cfg: ModelConfig, n: int) -> Ecdf2D:
    """ECDF of n model draws (streams 0..n-1), through the sample cache."""
    if not 1 <= n <= 10**8:
        raise ConfigError("n must lie in [1, 1e8]", "discrepancy", "model_ecdf")
    s = model_samples(cfg, int(n))
    return Ecdf2D.from_xy(s[:, 0], s[:, 1])


@njit(cache=True)
def _max_block(delta):
    """Largest |block sum| of a 2-D array and the block (r0, r1, c0, c1), inclusive."""
    g0, g1 = delta.shape
    best = -1.0
    arg = (0, 0, 0, 0)
    col = np.empty(g1)
    for r0 in range(g0):
        col[:] = 0.0
        for r1 in range(r0, g0):
            for c in range(g1):
                col[c] += delta[r1, c]
            # Kadane for the maximum and the minimum simultaneously
            hi = 0.0
            lo = 0.0
            hs = 0
            ls = 0
            for c in range(g1):
                if hi <= 0.0:
                    hi = col[c]
                    hs = c
                else:
                    hi += col[c]
                if lo >= 0.0:
                    lo = col[c]
                    ls = c
                else:
                    lo += col[c]
                if hi > best:
                    best = hi
                    arg = (r0, r1, hs, c)
                if -lo > best:
                    best = -lo
                    arg = (r0, r1, ls, c)
    return best, arg


def _grid(emp: Ecdf2D, model: Ecdf2D, g: int):
    pooled = np.concatenate([emp.points, model.points])
    q = np.arange(1, g) / g
    ex = np.quantile(pooled[:, 0], q)
    ey = np.quantile(pooled[:, 1], q)
    return ex, ey


def _hist(points, ex, ey, g):
    ix = np.searchsorted(ex, points[:, 0], side="right")
    iy = np.searchsorted(ey, points[:, 1], side="right")
    return np.bincount(ix * g + iy, minlength=g * g).reshape(g, g).astype(float)


def discrepancy_estimate(emp: Ecdf2D, model: Ecdf2D, grid_resolution: int = DEFAULT_G,
                         sigma: float = float("nan"), T: float | None = None,
                         backend: str = "") -> DiscrepancyReport:
    """max |P_emp(R) - P_model(R)| over rectangles on the quantile grid.

    ``stat_err = 2 (1/sqrt(n_emp) + 1/sqrt(n_model))`` is a heuristic
    two-sample budget.  ``grid_slack`` is 4x the largest marginal cell mass,
    bounding what the grid restriction can miss.
    """
    g = int(grid_resolution)
    if not G_MIN <= g <= G_MAX:
        raise ConfigError(f"grid_resolution must lie in [{G_MIN}, {G_MAX}]",
                          "discrepancy", "discrepancy_estimate")
    if emp.count == 0 or model.count == 0:
        raise ConfigError("empty ECDF", "discrepancy", "discrepancy_estimate")
    ex, ey = _grid(emp, model, g)
    he = _hist(emp.points, ex, ey, g)
    hm = _hist(model.points, ex, ey, g)
    delta = he / emp.count - hm / model.count
    best, (r0, r1, c0, c1) = _max_block(delta)
    edges_x = np.concatenate([[-np.inf], ex, [np.inf]])
    edges_y = np.concatenate([[-np.inf], ey, [np.inf]])
    rect = Rectangle(float(edges_x[r0]), float(edges_x[r1 + 1]),
                     float(edges_y[c0]), float(edges_y[c1 + 1]))
    tot = emp.count + model.count
    cell = max((he.sum(axis=1) + hm.sum(axis=1)).max(), (he.sum(axis=0) + hm.sum(axis=0)).max()) / tot
    stat_err = STAT_ERR_C * (1.0 / math.sqrt(emp.count) + 1.0 / math.sqrt(model.count))
    return DiscrepancyReport(sigma=sigma, T=T, D_hat=float(max(best, 0.0)), grid_resolution=g,
                             emp_count=emp.count, model_count=model.count, stat_err=stat_err,
                             rect_argmax=rect, grid_slack=4.0 * float(cell), backend=backend)


def backend_for(T: float, surrogate_from: float = SURROGATE_FROM) -> str:
    return "dirichlet-RY" if T >= surrogate_from else "full-zeta"


def decay_trend(sigma: float, T_list, n: int, grid_resolution: int = DEFAULT_G,
                seed: int = 0, n_model: int | None = None,
                model_cfg: ModelConfig | None = None,
                surrogate_from: float = SURROGATE_FROM) -> TrendReport:
    """Discrepancy at each T and the slope of log D_hat against log log T.

    One model sample serves every T.  The slope interval is the 95% OLS
    t-interval.
    """
    T_list = [float(t) for t in T_list]
    if len(T_list) < 3 or any(b <= a for a, b in zip(T_list, T_list[1:])):
        raise ConfigError("T_list must be ascending with at least 3 values",
                          "discrepancy", "decay_trend")
    cfg = model_cfg or ModelConfig(sigma, master_seed=seed)
    mod = model_ecdf(cfg, int(n_model or n))
    reports = []
    for T in T_list:
        be = backend_for(T, surrogate_from)
        s = sample_line(LineWindow(sigma, T, int(n), "stratified", seed, be))
        reports.append(discrepancy_estimate(ecdf(s), mod, grid_resolution, sigma, T, be))
    x = np.log(np.log(T_list))
    y = np.log([max(r.D_hat, 1e-300) for r in reports])
    fit = stats.linregress(x, y)
    h = stats.t.ppf(0.975, len(x) - 2) * fit.stderr
    return TrendReport(sigma=sigma, reports=reports, slope=float(fit.slope),
                       slope_ci=(float(fit.slope - h), float(fit.slope + h)))


def write_trend_csv(path, trend: TrendReport) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in trend.reports:
            w.writerow([repr(r.T), repr(r.D_hat), repr(r.stat_err), r.grid_resolution,
                        r.emp_count, r.model_count])


def trend_summary(trend: TrendReport) -> dict:
    return {"sigma": trend.sigma, "slope": trend.slope, "slope_ci": list(trend.slope_ci),
            "reports": [_report_dict(r) for r in trend.reports]}


def _report_dict(r: DiscrepancyReport) -> dict:
    d = asdict(r)
    # unbounded edges become null so the JSON stays standard
    d["rect_argmax"] = [x if math.isfinite(x) else None for x in
                        (r.rect_argmax.a1, r.rect_argmax.a2, r.rect_argmax.b1, r.rect_argmax.b2)]
    return d


def write_trend_json(path, trend: TrendReport) -> None:
    Path(path).write_text(json.dumps(trend_summary(trend), indent=2, sort_keys=True) + "\n")
