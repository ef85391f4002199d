"""Samples of log zeta(sigma + it) over t in [T, 2T] and statistics built on them.

Two backends evaluate a sample point: ``full-zeta`` (Euler-Maclaurin with the
argument continued along a horizontal path) and ``dirichlet-RY``, the short
Dirichlet polynomial R_Y(sigma + it) with Y = (log T)^4 by default.  Sample
abscissae come from the counter-based generator, so a window with a fixed
seed always yields the same set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import zeta as _scipy_zeta

from .errors import ConfigError, DegenerateError
from .moments import TRUNCATION_C, phi_rand
from .model import (EMPIRICAL_FLAG, DEFAULT_CUTOFF, ModelConfig, cache_dir,
                    read_cache, sample_R_batch, write_cache)
from .rng import as_key, uniforms
from .smoothing import Rectangle
from .zeta import NEAR_ZERO_Q, OK, T_MAX, dirichlet_R, log_zeta_line_batch

SAMPLERS = ("stratified", "uniform-random")
BACKENDS = ("full-zeta", "dirichlet-RY")
DEFAULT_Y_EXPONENT = 4.0
MAX_EXCLUDED = 0.05
MIN_RETAINED = 0.5
LINE_INDEX = 1 << 61        # counter index reserved for sample abscissae
_CHUNK = 4096


def default_Y(T: float, A: float = DEFAULT_Y_EXPONENT) -> float:
    return math.log(T) ** A


@dataclass(frozen=True)
class LineWindow:
    """Where and how to sample t in [T, 2T]."""

    sigma: float
    T: float
    sample_count: int
    sampler: str = "stratified"
    seed: int = 0
    backend: str = "full-zeta"
    Y: float | None = None
    tol: float = 1e-10

    def __post_init__(self):
        if not 0.5 < self.sigma <= 1.0:
            raise ConfigError("sigma must lie in (1/2, 1]", "empirical", "LineWindow")
        if not self.T >= 100:
            raise ConfigError("T must be >= 100", "empirical", "LineWindow")
        if int(self.sample_count) != self.sample_count or self.sample_count < 100:
            raise ConfigError("sample_count must be an integer >= 100", "empirical",
                              "LineWindow")
        if self.sampler not in SAMPLERS:
            raise ConfigError(f"sampler must be one of {SAMPLERS}", "empirical", "LineWindow")
        if self.backend not in BACKENDS:
            raise ConfigError(f"backend must be one of {BACKENDS}", "empirical", "LineWindow")
        if 2 * self.T > T_MAX:
            raise ConfigError(f"2T must be <= {T_MAX:g}", "empirical", "LineWindow")
        if self.Y is not None and not self.Y >= 2:
            raise ConfigError("Y must be >= 2", "empirical", "LineWindow")

    @property
    def Y_eff(self) -> float:
        return float(self.Y) if self.Y is not None else default_Y(self.T)


@dataclass(frozen=True)
class LineSampleSet:
    """Retained samples (finite values only) plus the count of excluded points."""

    window: LineWindow
    t: np.ndarray
    log_modulus: np.ndarray
    argument: np.ndarray
    quality: np.ndarray
    excluded_count: int

    def __len__(self) -> int:
        return len(self.t)

    @property
    def excluded_fraction(self) -> float:
        return self.excluded_count / self.window.sample_count

    def records(self) -> np.ndarray:
        """``(n, 3)`` array of (t, log_modulus, argument)."""
        return np.column_stack([self.t, self.log_modulus, self.argument])

    @property
    def samples(self):
        return list(zip(self.t.tolist(), self.log_modulus.tolist(),
                        self.argument.tolist(), self.quality.tolist()))


@dataclass(frozen=True)
class Ecdf2D:
    """Empirical law of points (x, y), sorted lexicographically."""

    points: np.ndarray

    @classmethod
    def from_xy(cls, x, y) -> "Ecdf2D":
        pts = np.column_stack([np.asarray(x, float), np.asarray(y, float)])
        order = np.lexsort((pts[:, 1], pts[:, 0]))
        pts = pts[order]
        pts.setflags(write=False)
        return cls(pts)

    @property
    def count(self) -> int:
        return len(self.points)

    def rectangle_prob(self, rect: Rectangle) -> float:
        """Fraction of points in the open rectangle."""
        if self.count == 0:
            return 0.0
        return float(np.count_nonzero(rect.contains(self.points[:, 0] + 1j * self.points[:, 1]))
                     / self.count)


@dataclass(frozen=True)
class EmpiricalValue:
    value: complex
    stderr: float
    count: int

    def __complex__(self) -> complex:
        return complex(self.value)


# ---------------------------------------------------------------- sampling

def sample_abscissae(window: LineWindow) -> np.ndarray:
    n = int(window.sample_count)
    u = uniforms(window.seed, np.arange(n, dtype=np.uint64), LINE_INDEX)
    if window.sampler == "stratified":
        return window.T + (np.arange(n) + u) * (window.T / n)
    return window.T + window.T * u


def _cache_path(window: LineWindow, d: Path) -> Path:
    yv = window.Y_eff if window.backend == "dirichlet-RY" else 0.0
    return d / (f"line_s{window.sigma:.6f}_T{window.T:.6g}_n{window.sample_count}_"
                f"{window.sampler}_seed{window.seed}_{window.backend}_Y{yv:.6g}_"
                f"tol{window.tol:.0e}.zrmc")


def _evaluate(window: LineWindow, t: np.ndarray):
    if window.backend == "dirichlet-RY":
        R = dirichlet_R(window.sigma, t, window.Y_eff)
        return R.real.copy(), R.imag.copy(), np.zeros(len(t), dtype=np.int8)
    lm, ag, q = [], [], []
    for a in range(0, len(t), _CHUNK):
        x, y, z = log_zeta_line_batch(window.sigma, t[a:a + _CHUNK], window.tol)
        lm.append(x)
        ag.append(y)
        q.append(z)
    return np.concatenate(lm), np.concatenate(ag), np.concatenate(q)


def sample_line(window: LineWindow) -> LineSampleSet:
    """Evaluate the window; near-zero failures are dropped and counted.

    With ``ZETALAB_CACHE_DIR`` set the retained records are persisted in the
    model cache format (header flag P = 0, records (t, log_modulus, argument))
    and reused on later calls.  Reloaded sets carry quality "ok" throughout.

    Raises:
        DegenerateError: more than 5% of the points were excluded.
    """
    n = int(window.sample_count)
    d = cache_dir()
    path = _cache_path(window, d) if d is not None else None
    if path is not None and path.exists():
        sigma, P, seed, rec = read_cache(path)
        if sigma == window.sigma and P == EMPIRICAL_FLAG and seed == _signed(window.seed):
            q = np.full(len(rec), OK, dtype=np.int8)
            return _finish(window, rec[:, 0], rec[:, 1], rec[:, 2], q, n - len(rec))
    t = sample_abscissae(window)
    lm, ag, q = _evaluate(window, t)
    keep = (q != NEAR_ZERO_Q) & np.isfinite(lm) & np.isfinite(ag)
    t, lm, ag, q = t[keep], lm[keep], ag[keep], q[keep]
    if path is not None:
        d.mkdir(parents=True, exist_ok=True)
        write_cache(path, window.sigma, EMPIRICAL_FLAG, window.seed,
                    np.column_stack([t, lm, ag]))
    return _finish(window, t, lm, ag, q, n - len(t))


def _signed(seed: int) -> int:
    seed = int(as_key(seed))
    return seed if seed < 2**63 else seed - 2**64


def _finish(window, t, lm, ag, q, excluded):
    if excluded > MAX_EXCLUDED * window.sample_count:
        raise DegenerateError(f"{excluded} of {window.sample_count} points excluded",
                              "empirical", "sample_line")
    for a in (t, lm, ag, q):
        a.setflags(write=False)
    return LineSampleSet(window, t, lm, ag, q, int(excluded))


def ecdf(samples: LineSampleSet) -> Ecdf2D:
    return Ecdf2D.from_xy(samples.log_modulus, samples.argument)


# ---------------------------------------------------------------- statistics

def _mean_with_se(vals: np.ndarray) -> EmpiricalValue:
    n = len(vals)
    m = vals.mean()
    var = np.mean(np.abs(vals - m) ** 2) if n > 1 else 0.0
    return EmpiricalValue(complex(m) if np.iscomplexobj(vals) else float(m),
                          float(math.sqrt(var / n)), n)


def phi_empirical(samples: LineSampleSet, u: float, v: float) -> EmpiricalValue:
    """Mean of exp(i u log|zeta| + i v arg zeta) over the retained samples."""
    if abs(u) > 1e3 or abs(v) > 1e3:
        raise ConfigError("|u|, |v| must be <= 1e3", "empirical", "phi_empirical")
    if u == 0 and v == 0:
        return EmpiricalValue(1.0 + 0j, 0.0, len(samples))
    return _mean_with_se(np.exp(1j * (u * samples.log_modulus + v * samples.argument)))


@dataclass(frozen=True)
class CharFunComparison:
    """Phi_emp against Phi^rand truncated at the window's Y."""

    u: float
    v: float
    phi_emp: complex
    phi_emp_stderr: float
    phi_rand: complex
    truncation_bound: float
    gap: float

    @property
    def budget(self) -> float:
        return 3.0 * (self.phi_emp_stderr + self.truncation_bound)

    @property
    def ok(self) -> bool:
        return self.gap <= self.budget


def charfun_compare(samples: LineSampleSet, u: float, v: float,
                    C: float = TRUNCATION_C) -> CharFunComparison:
    """The model side runs over p <= Y with Y the window's effective Y, and
    carries the bound C (|u| + |v|) / Y^{sigma - 1/2}."""
    w = samples.window
    emp = phi_empirical(samples, u, v)
    rnd = phi_rand(w.sigma, u, v, Y=w.Y_eff, C=C)
    return CharFunComparison(float(u), float(v), complex(emp.value), emp.stderr,
                             complex(rnd.value), rnd.truncation_bound,
                             abs(complex(emp.value) - complex(rnd.value)))


@dataclass(frozen=True)
class SecondMomentReport:
    sigma: float
    T: float
    mean_sq: float
    prediction: float
    secondary_term: float
    stderr: float
    count: int
    excluded_count: int

    @property
    def residual(self) -> float:
        return self.mean_sq - self.prediction


def secondary_term(sigma: float, T: float) -> float:
    """(2 pi)^{2 sigma - 1} zeta(2 - 2 sigma)/(2 - 2 sigma) (2^{2 - 2 sigma} - 1) T^{1 - 2 sigma}.

    The lower-order term of (1/T) int_T^{2T} |zeta(sigma + it)|^2 dt; at
    sigma = 1 the limit a -> 0 of zeta(a)(2^a - 1)/a is -log(2)/2.
    """
    a = 2.0 - 2.0 * sigma
    ratio = -0.5 * math.log(2.0) if a == 0.0 else float(_scipy_zeta(a)) * (2.0**a - 1.0) / a
    return (2 * math.pi) ** (2 * sigma - 1) * ratio * T ** (1.0 - 2.0 * sigma)


def second_moment(sigma: float, T: float, n: int, seed: int = 0,
                  sampler: str = "stratified", tol: float = 1e-10) -> SecondMomentReport:
    """Sample mean of |zeta(sigma + it)|^2 on [T, 2T] against zeta(2 sigma) + secondary term."""
    from .zeta import zeta

    s = sample_line(LineWindow(sigma, T, n, sampler, seed, "full-zeta", None, tol))
    sq = np.exp(2.0 * s.log_modulus)
    m = _mean_with_se(sq)
    return SecondMomentReport(sigma=float(sigma), T=float(T), mean_sq=float(m.value),
                              prediction=zeta(2.0 * sigma).real,
                              secondary_term=secondary_term(sigma, T), stderr=m.stderr,
                              count=len(s), excluded_count=s.excluded_count)


@dataclass(frozen=True)
class PropComplexReport:
    """Restricted exponential moment of R_Y on the line against the model.

    ``lhs`` is the mean over retained t (those with |R_Y| <= bound);
    ``lhs_T`` uses the 1/T normalisation, i.e. the sum over retained points
    divided by all points.  ``gap = |lhs - rhs|``.
    """

    lhs: complex
    lhs_T: complex
    rhs: complex
    gap: float
    se_lhs: float
    se_rhs: float
    retained_fraction: float
    bound: float
    Y: float


def restriction_bound(sigma: float, T: float) -> float:
    """(log T)^{1 - sigma} / log log T."""
    L = math.log(T)
    return L ** (1.0 - sigma) / math.log(L)


def prop_complex_check(sigma: float, T: float, z1: complex, z2: complex, n: int,
                       Y: float | None = None, A: float = DEFAULT_Y_EXPONENT,
                       seed: int = 0, n_model: int | None = None,
                       allow_degenerate: bool = False) -> PropComplexReport:
    """Compare exp(z1 R_Y + z2 conj R_Y) on A(T) with its model expectation.

    Raises:
        DegenerateError: A(T) keeps fewer than half of the sampled t (unless
            ``allow_degenerate``, which reports the numbers anyway).
    """
    if abs(z1) > 5 or abs(z2) > 5:
        raise ConfigError("|z1|, |z2| must be <= 5", "empirical", "prop_complex_check")
    Yv = float(Y) if Y is not None else default_Y(T, A)
    s = sample_line(LineWindow(sigma, T, n, "stratified", seed, "dirichlet-RY", Yv))
    R = s.log_modulus + 1j * s.argument
    bound = restriction_bound(sigma, T)
    keep = np.abs(R) <= bound
    frac = float(np.mean(keep))
    if frac < MIN_RETAINED and not allow_degenerate:
        raise DegenerateError(f"A(T) retains only {frac:.1%} of samples",
                              "empirical", "prop_complex_check")
    ev = np.exp(z1 * R + z2 * np.conj(R))
    lhs = _mean_with_se(ev[keep]) if keep.any() else EmpiricalValue(0j, float("nan"), 0)
    lhs_T = complex(np.sum(ev[keep]) / len(ev))
    nm = int(n_model or n)
    cutoff = max(DEFAULT_CUTOFF, int(math.ceil(Yv)))
    cfg = ModelConfig(sigma, cutoff, seed, "drop")
    Rm = sample_R_batch(cfg, Yv, 0, nm)
    rv = _mean_with_se(np.exp(z1 * (Rm[:, 0] + 1j * Rm[:, 1]) + z2 * (Rm[:, 0] - 1j * Rm[:, 1])))
    return PropComplexReport(lhs=complex(lhs.value), lhs_T=lhs_T, rhs=complex(rv.value),
                             gap=abs(complex(lhs.value) - complex(rv.value)),
                             se_lhs=lhs.stderr, se_rhs=rv.stderr, retained_fraction=frac,
                             bound=bound, Y=Yv)


def approximation_gap(sigma: float, T: float, n: int, seed: int = 0,
                      Y: float | None = None, tol: float = 1e-10):
    """|log zeta(sigma+it) - R_Y(sigma+it)| on a sample and the threshold
    Y^{-(sigma - 1/2)/2} (log T)^3.  Returns ``(gaps, threshold, fraction_within)``
    with the fraction taken over all ``n`` sampled t.
    """
    w = LineWindow(sigma, T, n, "stratified", seed, "full-zeta", Y, tol)
    s = sample_line(w)
    Yv = w.Y_eff
    R = dirichlet_R(sigma, s.t, Yv)
    gaps = np.abs(s.log_modulus + 1j * s.argument - R)
    thr = Yv ** (-(sigma - 0.5) / 2.0) * math.log(T) ** 3
    # excluded (near-zero) points count as failures
    return gaps, thr, float(np.count_nonzero(gaps <= thr) / n)
