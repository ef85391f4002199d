"""a-points of zeta: solutions of zeta(s) = a in vertical strips.

Counting is by the argument principle applied to zeta(s) - a on rectangle
boundaries, with an adaptive mesh that halves any step whose argument
increment reaches pi/2.  The predicted density comes from the random model:

    f_a(sigma) = E log|zeta(sigma, X) - a|,
    c(a, s1, s2) = (f_a'(s2) - f_a'(s1)) / (2 pi).

Littlewood's identity links the mean of log|zeta(sigma + it) - a| over
[T, 2T] to f_a(sigma), which gives a second, count-free check.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .empirical import LineWindow, sample_abscissae
from .errors import ConfigError, ConvergenceError, OnContourRootError
from .model import ModelConfig, cache_dir, model_samples, sample_log_zeta_batch
from .zeta import zeta_batch

BLOCK_HEIGHT = 100.0
DEFAULT_MESH = 0.05         # initial boundary step
MAX_LEVELS = 25
ROOT_FLOOR = 1e-9           # |zeta - a| below this on a contour: root on the contour
RESIDUAL_MAX = 0.1
RETRIES = 5
RETRY_SHIFT = 1e-3
POLISH_TOL = 1e-10
CONTOUR_TOL = 1e-10
SHADOW_C = 10.0
_CHUNK = 1 << 20
_HALF_PI = 0.5 * math.pi


def _check_a(a, op):
    a = complex(a)
    if a == 0 or not (math.isfinite(a.real) and math.isfinite(a.imag)):
        raise ConfigError("a must be a finite nonzero complex number", "apoints", op)
    return a


def _check_strip(s1, s2, op):
    if not 0.5 < s1 < s2 < 1.0:
        raise ConfigError("need 1/2 < sigma1 < sigma2 < 1", "apoints", op)


# ---------------------------------------------------------------- winding

@dataclass(frozen=True)
class Winding:
    count: int
    residual: float
    refinements: int
    points: int
    t_lo: float
    t_hi: float


def _side(z0: complex, z1: complex, step: float) -> np.ndarray:
    m = max(2, int(math.ceil(abs(z1 - z0) / step)))
    return z0 + (z1 - z0) * (np.arange(m) / m)


def _wind(a, s1, s2, t1, t2, step, tol=CONTOUR_TOL) -> Winding:
    corners = [complex(s1, t1), complex(s2, t1), complex(s2, t2), complex(s1, t2)]
    s = np.concatenate([_side(corners[k], corners[(k + 1) % 4], step) for k in range(4)])
    f = zeta_batch(s.real, s.imag, tol) - a
    refinements = 0
    for _ in range(MAX_LEVELS + 1):
        if np.abs(f).min() < ROOT_FLOOR:
            k = int(np.argmin(np.abs(f)))
            raise OnContourRootError(f"|zeta - a| = {abs(f[k]):.3g} on the contour",
                                     complex(s[k]), "apoints", "winding_count")
        nxt = np.roll(f, -1)
        inc = np.angle(nxt / f)
        bad = np.flatnonzero(np.abs(inc) >= _HALF_PI)
        if bad.size == 0:
            raw = inc.sum() / (2.0 * math.pi)
            n = int(round(raw))
            return Winding(n, abs(raw - n), refinements, len(s), t1, t2)
        mid = 0.5 * (s[bad] + np.roll(s, -1)[bad])
        fm = zeta_batch(mid.real, mid.imag, tol) - a
        s = np.insert(s, bad + 1, mid)
        f = np.insert(f, bad + 1, fm)
        refinements += bad.size
    raise OnContourRootError(f"argument increments unresolved after {MAX_LEVELS} levels",
                             None, "apoints", "winding_count")


def winding_detail(a, sigma1: float, sigma2: float, T1: float, T2: float,
                   initial_mesh: float = DEFAULT_MESH, retries: int = RETRIES) -> Winding:
    """Winding number of zeta - a around [sigma1, sigma2] x [T1, T2].

    A root on the contour is retried with both t-edges moved up by 1e-3
    (``retries`` times); the sigma-edges never move.  The returned record
    carries the edges actually used.
    """
    a = _check_a(a, "winding_count")
    if not 0.5 < sigma1 < sigma2 <= 3.0 or not T2 > T1:
        raise ConfigError("need 1/2 < sigma1 < sigma2 <= 3 and T2 > T1",
                          "apoints", "winding_count")
    if not initial_mesh > 0:
        raise ConfigError("initial_mesh must be positive", "apoints", "winding_count")
    for k in range(retries + 1):
        d = k * RETRY_SHIFT
        try:
            w = _wind(a, sigma1, sigma2, T1 + d, T2 + d, initial_mesh)
        except OnContourRootError:
            if k == retries:
                raise
            continue
        if w.residual >= RESIDUAL_MAX:
            raise ConvergenceError(f"winding residual {w.residual:.3g} >= {RESIDUAL_MAX}",
                                   "apoints", "winding_count")
        return w
    raise AssertionError("unreachable")


def winding_count(a, sigma1: float, sigma2: float, T1: float, T2: float,
                  initial_mesh: float = DEFAULT_MESH) -> int:
    return winding_detail(a, sigma1, sigma2, T1, T2, initial_mesh).count


# ---------------------------------------------------------------- root polishing

def _zeta1(s: complex, tol=1e-12) -> complex:
    return complex(zeta_batch(np.array([s.real]), np.array([s.imag]), tol)[0])


def _newton(a, s0, lo: complex, hi: complex, iters=60):
    """Newton on zeta - a with a central-difference derivative; None if it
    leaves the cell [lo, hi) or stalls."""
    s = s0
    h = 1e-5
    for _ in range(iters):
        f = _zeta1(s) - a
        if abs(f) < 0.1 * POLISH_TOL:
            break
        d = (_zeta1(s + h) - _zeta1(s - h)) / (2 * h)
        if d == 0:
            return None
        step = f / d
        s = s - step
        if not (max(0.5 + 1e-6, lo.real - 0.5) < s.real < hi.real + 0.5):
            return None
        if abs(step) < 1e-15 * max(1.0, abs(s)):
            break
    if lo.real <= s.real < hi.real and lo.imag <= s.imag < hi.imag:
        return s
    return None


@dataclass(frozen=True)
class Root:
    s: complex
    residual: float


def polish_roots(a, sigma1: float, sigma2: float, T1: float, T2: float,
                 initial_mesh: float = DEFAULT_MESH, max_depth: int = 40) -> list:
    """Subdivide until each cell winds once, then locate its root by Newton.

    Every returned root lies in its cell and satisfies |zeta(s) - a| < 1e-10
    (evaluated at relative accuracy 1e-12).
    """
    a = _check_a(a, "polish_roots")
    roots: list[Root] = []
    stack = [(sigma1, sigma2, T1, T2, 0, None)]
    while stack:
        x1, x2, y1, y2, depth, known = stack.pop()
        if depth > max_depth:
            raise ConvergenceError("root isolation exceeded the subdivision depth",
                                   "apoints", "polish_roots")
        mesh = min(initial_mesh, (x2 - x1) / 4, (y2 - y1) / 4)
        if known is None:
            w = winding_detail(a, x1, x2, y1, y2, mesh, retries=0).count
        else:
            w = known
        if w == 0:
            continue
        if w == 1:
            r = _newton(a, complex(0.5 * (x1 + x2), 0.5 * (y1 + y2)),
                        complex(x1, y1), complex(x2, y2))
            if r is not None:
                res = abs(_zeta1(r) - a)
                if res < POLISH_TOL:
                    roots.append(Root(r, res))
                    continue
        if (y2 - y1) >= (x2 - x1):
            m = 0.5 * (y1 + y2)
            stack += [(x1, x2, y1, m, depth + 1, None), (x1, x2, m, y2, depth + 1, None)]
        else:
            m = 0.5 * (x1 + x2)
            stack += [(x1, m, y1, y2, depth + 1, None), (m, x2, y1, y2, depth + 1, None)]
    roots.sort(key=lambda r: (r.s.imag, r.s.real))
    return roots


# ---------------------------------------------------------------- model density

def _log_gap(lm: np.ndarray, ag: np.ndarray, a: complex) -> np.ndarray:
    return np.log(np.abs(np.exp(lm + 1j * ag) - a))


def f_a(sigma: float, a, n: int = 10**7, seed: int = 0, cfg: ModelConfig | None = None):
    """Monte Carlo E log|zeta(sigma, X) - a| and its standard error.

    The log singularity at zeta(sigma, X) = a is integrable and plain
    averaging handles it.
    """
    a = _check_a(a, "f_a")
    if not 1 <= n <= 10**8:
        raise ConfigError("n must lie in [1, 1e8]", "apoints", "f_a")
    cfg = (cfg or ModelConfig(sigma, master_seed=seed)).with_sigma(sigma)
    s = model_samples(cfg, int(n))
    v = _log_gap(s[:, 0], s[:, 1], a)
    se = float(v.std(ddof=1) / math.sqrt(n)) if n > 1 else float("inf")
    return float(v.mean()), se


def density_c(a, sigma1: float, sigma2: float, h: float = 0.01, n: int = 10**7,
              seed: int = 0, cfg: ModelConfig | None = None):
    """c(a, sigma1, sigma2) from central differences of f_a.

    All four f_a values share the same draws, so the estimator is the mean
    of one per-draw combination and its standard error is exact for that
    mean.  The O(h^2) difference bias (scale f_a''') is not included.
    """
    a = _check_a(a, "density_c")
    _check_strip(sigma1, sigma2, "density_c")
    hmax = min(sigma1 - 0.5, 1.0 - sigma2, (sigma2 - sigma1) / 4)
    if not 0 < h <= hmax:
        raise ConfigError(f"h must lie in (0, {hmax:.6g}]", "apoints", "density_c")
    if not 2 <= n <= 10**8:
        raise ConfigError("n must lie in [2, 1e8]", "apoints", "density_c")
    base = cfg or ModelConfig(sigma1, master_seed=seed)
    sig = [sigma1 - h, sigma1 + h, sigma2 - h, sigma2 + h]
    scale = 1.0 / (2.0 * h * 2.0 * math.pi)
    tot = 0.0
    tot2 = 0.0
    for start in range(0, n, _CHUNK):
        m = min(_CHUNK, n - start)
        x = sample_log_zeta_batch(base, start, m, sigmas=sig)
        v = [_log_gap(x[k, :, 0], x[k, :, 1], a) for k in range(4)]
        d = ((v[3] - v[2]) - (v[1] - v[0])) * scale
        tot += float(d.sum())
        tot2 += float((d * d).sum())
    mean = tot / n
    var = max(tot2 / n - mean * mean, 0.0) * n / (n - 1)
    return mean, math.sqrt(var / n)


# ---------------------------------------------------------------- census

@dataclass(frozen=True)
class BlockCount:
    t_lo: float
    t_hi: float
    count: int
    refinements: int
    residual: float


@dataclass(frozen=True)
class ApointCensus:
    """a-points in sigma1 < sigma < sigma2, T <= t <= 2T, and the model prediction."""

    a: complex
    sigma1: float
    sigma2: float
    T: float
    count: int
    predicted_density: float
    predicted_count: float
    density_stderr: float
    contour_refinements: int
    blocks: list = field(default_factory=list)
    max_residual: float = 0.0
    roots: list | None = None

    @property
    def relative_gap(self) -> float:
        return abs(self.count - self.predicted_count) / self.predicted_count


def block_edges(T: float, height: float = BLOCK_HEIGHT) -> np.ndarray:
    m = max(1, int(math.ceil(T / height - 1e-12)))
    e = T + height * np.arange(m + 1)
    e[-1] = 2 * T
    return e


def count_blocks(a, sigma1: float, sigma2: float, T: float,
                 initial_mesh: float = DEFAULT_MESH) -> list:
    """Winding counts over [T, 2T] in t-blocks of height 100.

    Neighbouring blocks share the edge actually used, so a retry shift on
    one edge never leaves a gap or an overlap.
    """
    a = _check_a(a, "census")
    _check_strip(sigma1, sigma2, "census")
    edges = block_edges(T)
    out = []
    lo = float(edges[0])
    for j in range(len(edges) - 1):
        hi = float(edges[j + 1])
        last = None
        for k in range(RETRIES + 1):
            try:
                w = _wind(a, sigma1, sigma2, lo, hi + k * RETRY_SHIFT, initial_mesh)
                break
            except OnContourRootError as e:
                last = e
        else:
            raise last
        if w.residual >= RESIDUAL_MAX:
            raise ConvergenceError(f"winding residual {w.residual:.3g} on block {j}",
                                   "apoints", "census")
        out.append(BlockCount(lo, w.t_hi, w.count, w.refinements, w.residual))
        lo = w.t_hi
    return out


def census(a, sigma1: float, sigma2: float, T: float, n: int = 10**7, h: float = 0.01,
           seed: int = 0, initial_mesh: float = DEFAULT_MESH, polish: bool = False,
           density=None) -> ApointCensus:
    """Count a-points over [T, 2T] and compare with c(a, sigma1, sigma2) T.

    ``density`` may pass a precomputed (c, stderr) pair.  With ``polish``
    every block with a nonzero count is resolved into individual roots.
    """
    blocks = count_blocks(a, sigma1, sigma2, T, initial_mesh)
    c, cse = density if density is not None else density_c(a, sigma1, sigma2, h, n, seed)
    roots = None
    if polish:
        roots = []
        for b in blocks:
            if b.count:
                roots += polish_roots(a, sigma1, sigma2, b.t_lo, b.t_hi, initial_mesh)
    count = sum(b.count for b in blocks)
    return ApointCensus(a=complex(a), sigma1=sigma1, sigma2=sigma2, T=float(T), count=count,
                        predicted_density=c, predicted_count=c * T, density_stderr=cse,
                        contour_refinements=sum(b.refinements for b in blocks),
                        blocks=blocks, max_residual=max(b.residual for b in blocks),
                        roots=roots)


# ---------------------------------------------------------------- Littlewood identity

def line_zeta(sigma: float, T: float, n: int, seed: int = 0) -> np.ndarray:
    """zeta(sigma + it) at the stratified sample of [T, 2T] (cached when
    ``ZETALAB_CACHE_DIR`` is set)."""
    win = LineWindow(sigma, T, n, "stratified", seed)
    d = cache_dir()
    path = None
    if d is not None:
        path = d / f"zline_s{sigma:.6f}_T{T:.6g}_n{n}_seed{seed}.npy"
        if path.exists():
            return np.load(path)
    t = sample_abscissae(win)
    z = np.concatenate([zeta_batch(sigma, t[i:i + 4096], CONTOUR_TOL)
                        for i in range(0, len(t), 4096)])
    if path is not None:
        d.mkdir(parents=True, exist_ok=True)
        np.save(path, z)
    return z


@dataclass(frozen=True)
class LittlewoodReport:
    lhs: float
    rhs: float
    gap_over_error: float
    lhs_stderr: float
    rhs_stderr: float
    error_term: float


def littlewood_error_term(sigma: float, T: float) -> float:
    """(log log T)^2 / (log T)^sigma, the effective error shape."""
    L = math.log(T)
    return math.log(L) ** 2 / L ** sigma


def littlewood_check(a, sigma: float, T: float, n_t: int = 10**4, n_model: int = 10**7,
                     seed: int = 0) -> LittlewoodReport:
    """Mean of log|zeta(sigma+it) - a| on [T, 2T] against f_a(sigma).

    gap_over_error = |lhs - rhs| / (3 combined s.e. + error_term).
    """
    a = _check_a(a, "littlewood_check")
    v = np.log(np.abs(line_zeta(sigma, T, n_t, seed) - a))
    lhs = float(v.mean())
    lse = float(v.std(ddof=1) / math.sqrt(len(v)))
    rhs, rse = f_a(sigma, a, n_model, seed)
    err = littlewood_error_term(sigma, T)
    gap = abs(lhs - rhs) / (3.0 * math.hypot(lse, rse) + err)
    return LittlewoodReport(lhs, rhs, gap, lse, rse, err)


def moment_shadow(sigma: float, T: float, a, n: int = 10**4, seed: int = 0):
    """Empirical 2nd and 4th moments of |log|zeta(sigma+it) - a|| with the
    envelope (2C)^8, C = 10, that the 4th should sit under."""
    a = _check_a(a, "moment_shadow")
    v = np.abs(np.log(np.abs(line_zeta(sigma, T, n, seed) - a)))
    return float(np.mean(v**2)), float(np.mean(v**4)), (2 * SHADOW_C) ** 8


# ---------------------------------------------------------------- output

CSV_COLUMNS = ("t_lo", "t_hi", "count", "refinements")


def write_census_csv(path, c: ApointCensus) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for b in c.blocks:
            w.writerow([repr(b.t_lo), repr(b.t_hi), b.count, b.refinements])


def census_summary(c: ApointCensus) -> dict:
    return {"a": [c.a.real, c.a.imag], "sigma1": c.sigma1, "sigma2": c.sigma2, "T": c.T,
            "count": c.count, "c": c.predicted_density, "c_stderr": c.density_stderr,
            "predicted_count": c.predicted_count,
            "predicted_count_stderr": c.density_stderr * c.T,
            "contour_refinements": c.contour_refinements, "max_residual": c.max_residual}


def write_census_json(path, c: ApointCensus) -> None:
    Path(path).write_text(json.dumps(census_summary(c), indent=2, sort_keys=True) + "\n")
