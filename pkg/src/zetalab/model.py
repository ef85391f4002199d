"""The random Euler product log zeta(sigma, X) and its Dirichlet truncation R_Y(sigma, X).

Phases theta_p are counter-based uniforms keyed by ``(master_seed,
stream_index, prime_index)``.  A stream index identifies one realisation of
the whole sequence {X(p)}, so different sigma, cutoffs, and the truncation
R_Y all see the same phases (common random numbers).

Sampling is exact over p <= P.  With ``tail_mode="gaussian-compensate"`` the
missing factors p > P are replaced by a centred complex Gaussian with the
tail's exact per-component variance (1/2) sum_{p>P} sum_n p^{-2n sigma}/n^2.
"""

from __future__ import annotations

import itertools
import math
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numba import njit

from .errors import CacheError, ConfigError
from .primes import PrimeTable, prime_power_arrays, prime_zeta_tail, table_for
from .rng import GAUSS_INDEX, as_key, keyed_uniform, stream_key, unit_phase

TAIL_MODES = ("drop", "gaussian-compensate")
DEFAULT_CUTOFF = 1000
_TWO_PI = 2.0 * math.pi


def _check_sigma(sigma, lo_open=0.5, hi=1.0, op=""):
    if not (lo_open < sigma <= hi):
        raise ConfigError(f"sigma must lie in ({lo_open}, {hi}], got {sigma}",
                          "random_model", op)


def tail_variance(sigma: float, P: float, prime_powers: bool = True) -> float:
    """Per-component variance of sum_{p>P} -Log(1 - X(p) p^{-sigma}).

    With ``prime_powers=False`` only the linear terms X(p) p^{-sigma} count,
    i.e. (1/2) sum_{p>P} p^{-2 sigma}.
    """
    if not prime_powers:
        return 0.5 * prime_zeta_tail(2 * sigma, P)
    total, n = 0.0, 1
    while True:
        term = prime_zeta_tail(2 * n * sigma, P) / n**2
        total += term
        if term < 1e-18 * total or n > 60:
            return 0.5 * total
        n += 1


@dataclass(frozen=True)
class ModelConfig:
    """One instance of the random model.

    Attributes:
        sigma: real part, in (1/2, 1].
        prime_cutoff: P; factors with p <= P are sampled exactly.
        master_seed: 64-bit seed of the phase streams.
        tail_mode: ``"drop"`` or ``"gaussian-compensate"``.
    """

    sigma: float
    prime_cutoff: int = DEFAULT_CUTOFF
    master_seed: int = 0
    tail_mode: str = "gaussian-compensate"
    _cache: dict = field(default_factory=dict, compare=False, repr=False,
                         hash=False)

    def __post_init__(self):
        _check_sigma(self.sigma, op="ModelConfig")
        if int(self.prime_cutoff) != self.prime_cutoff or self.prime_cutoff < 2:
            raise ConfigError("prime_cutoff must be an integer >= 2",
                              "random_model", "ModelConfig")
        if self.tail_mode not in TAIL_MODES:
            raise ConfigError(f"tail_mode must be one of {TAIL_MODES}",
                              "random_model", "ModelConfig")

    @property
    def table(self) -> PrimeTable:
        return table_for(self.prime_cutoff)

    @property
    def primes(self) -> np.ndarray:
        return self.table.upto(self.prime_cutoff)

    @property
    def truncation_sd(self) -> float:
        """sqrt((1/2) sum_{p>P} p^{-2 sigma}): sd of each component of the dropped tail."""
        if "sd" not in self._cache:
            self._cache["sd"] = math.sqrt(
                tail_variance(self.sigma, self.prime_cutoff, prime_powers=False))
        return self._cache["sd"]

    def compensation_sd(self, sigma: float | None = None) -> float:
        """sd of the Gaussian added per component (0 when tail_mode is drop)."""
        if self.tail_mode == "drop":
            return 0.0
        s = self.sigma if sigma is None else sigma
        key = ("comp", s)
        if key not in self._cache:
            self._cache[key] = math.sqrt(tail_variance(s, self.prime_cutoff))
        return self._cache[key]

    def with_sigma(self, sigma: float) -> "ModelConfig":
        return ModelConfig(sigma, self.prime_cutoff, self.master_seed,
                           self.tail_mode)


@dataclass(frozen=True)
class ModelSample:
    log_modulus: float
    argument: float


# ---------------------------------------------------------------- kernels

@njit(cache=True)
def _log_zeta_kernel(seed, start, count, w, tail_sd, use_gauss, out):
    """out[k, i] = (log|zeta|, arg zeta) at sigma_k for stream start+i.

    Accumulates prod_p (1 - w e^{i theta}) and tracks crossings of the
    negative real axis, so the argument is the exact sum of the per-factor
    principal arguments (each in (-pi/2, pi/2)) without one atan2 per prime.
    """
    nsig, npr = w.shape
    zr = np.empty(nsig)
    zi = np.empty(nsig)
    lsc = np.empty(nsig)
    wind = np.empty(nsig)
    two_pi = 2.0 * np.pi
    for i in range(count):
        skey = stream_key(seed, np.uint64(start + i))
        for k in range(nsig):
            zr[k] = 1.0
            zi[k] = 0.0
            lsc[k] = 0.0
            wind[k] = 0.0
        for j in range(npr):
            c, s = unit_phase(keyed_uniform(skey, np.uint64(j)))
            for k in range(nsig):
                wk = w[k, j]
                fr = 1.0 - wk * c
                fi = -wk * s
                nr = zr[k] * fr - zi[k] * fi
                ni = zr[k] * fi + zi[k] * fr
                if fi > 0.0:
                    if zi[k] >= 0.0 and ni < 0.0:
                        wind[k] += 1.0
                elif fi < 0.0:
                    if zi[k] < 0.0 and ni >= 0.0:
                        wind[k] -= 1.0
                zr[k] = nr
                zi[k] = ni
            if (j & 63) == 63:
                for k in range(nsig):
                    m = np.hypot(zr[k], zi[k])
                    zr[k] /= m
                    zi[k] /= m
                    lsc[k] += np.log(m)
        g1 = 0.0
        g2 = 0.0
        if use_gauss:
            u1 = keyed_uniform(skey, np.uint64(GAUSS_INDEX))
            u2 = keyed_uniform(skey, np.uint64(GAUSS_INDEX + 1))
            r = np.sqrt(-2.0 * np.log1p(-u1))
            g1 = r * np.cos(two_pi * u2)
            g2 = r * np.sin(two_pi * u2)
        for k in range(nsig):
            lm = -(lsc[k] + np.log(np.hypot(zr[k], zi[k])))
            ag = -(np.arctan2(zi[k], zr[k]) + two_pi * wind[k])
            out[k, i, 0] = lm + tail_sd[k] * g1
            out[k, i, 1] = ag + tail_sd[k] * g2


@njit(cache=True)
def _dirichlet_model_kernel(seed, start, count, pidx, w, nmax, out):
    """out[i] = R_Y(sigma, X) = sum_{p^n <= Y} X(p)^n / (n p^{n sigma})."""
    for i in range(count):
        skey = stream_key(seed, np.uint64(start + i))
        ar = 0.0
        ai = 0.0
        for j in range(pidx.shape[0]):
            c, s = unit_phase(keyed_uniform(skey, np.uint64(pidx[j])))
            br = w[j] * c
            bi = w[j] * s
            pr = br
            pi_ = bi
            for n in range(1, nmax[j] + 1):
                ar += pr / n
                ai += pi_ / n
                t = pr * br - pi_ * bi
                pi_ = pr * bi + pi_ * br
                pr = t
        out[i, 0] = ar
        out[i, 1] = ai


# ---------------------------------------------------------------- sampling

def sample_log_zeta_batch(cfg: ModelConfig, start: int, count: int,
                          sigmas=None) -> np.ndarray:
    """Draws for streams ``start .. start+count-1``.

    Args:
        cfg: model configuration (its sigma is used when ``sigmas`` is None).
        start, count: stream index range.
        sigmas: optional sequence of sigma values sharing the same phases
            (common random numbers); the Gaussian compensation, if any,
            also shares its normal variates.

    Returns:
        Array of shape ``(count, 2)`` or ``(len(sigmas), count, 2)`` holding
        ``(log_modulus, argument)``.
    """
    if start < 0 or count < 0:
        raise ConfigError("stream indices must be non-negative",
                          "random_model", "sample_log_zeta")
    single = sigmas is None
    sig = np.atleast_1d(np.asarray([cfg.sigma] if single else sigmas, float))
    for s in sig:
        _check_sigma(s, op="sample_log_zeta")
    logp = np.log(cfg.primes.astype(np.float64))
    w = np.exp(-np.outer(sig, logp))
    sd = np.array([cfg.compensation_sd(float(s)) for s in sig])
    out = np.empty((len(sig), count, 2))
    _log_zeta_kernel(as_key(cfg.master_seed), np.uint64(start), count, w, sd,
                     bool(np.any(sd > 0)), out)
    return out[0] if single else out


def sample_log_zeta(cfg: ModelConfig, stream_index: int) -> ModelSample:
    """One draw of log zeta(sigma, X) (principal branch per factor, summed)."""
    lm, ag = sample_log_zeta_batch(cfg, stream_index, 1)[0]
    return ModelSample(float(lm), float(ag))


def _r_arrays(cfg: ModelConfig, Y: float):
    if Y > cfg.prime_cutoff:
        raise ConfigError(f"Y={Y} exceeds the prime cutoff {cfg.prime_cutoff}",
                          "random_model", "sample_R")
    p, n, _, idx = prime_power_arrays(cfg.table, Y)
    first = n == 1
    pidx = idx[first]
    ps = p[first].astype(np.float64)
    nmax = np.zeros(len(pidx), dtype=np.int64)
    order = {int(q): k for k, q in enumerate(idx[first])}
    for q, m in zip(idx, n):
        k = order[int(q)]
        nmax[k] = max(nmax[k], m)
    w = ps ** (-cfg.sigma)
    return pidx.astype(np.int64), w, nmax


def sample_R_batch(cfg: ModelConfig, Y: float, start: int,
                   count: int) -> np.ndarray:
    """``(count, 2)`` array of (Re, Im) R_Y(sigma, X) sharing phases with
    :func:`sample_log_zeta_batch`."""
    pidx, w, nmax = _r_arrays(cfg, Y)
    out = np.empty((count, 2))
    _dirichlet_model_kernel(as_key(cfg.master_seed), np.uint64(start), count,
                            pidx, w, nmax, out)
    return out


def sample_R(cfg: ModelConfig, Y: float, stream_index: int) -> ModelSample:
    re, im = sample_R_batch(cfg, Y, stream_index, 1)[0]
    return ModelSample(float(re), float(im))


# ---------------------------------------------------------------- oracle

def moment_oracle_small(primes, sigma: float, k: int) -> float:
    """Exact E|sum_p X(p) p^{-sigma}|^{2k} by enumerating index tuples.

    Only pairs of k-tuples whose multisets agree survive the expectation
    (orthogonality of the phase monomials); every surviving pair contributes
    prod w_i * prod w_j.
    """
    primes = list(primes)
    if k > 3 or len(primes) > 6 or k < 1 or not primes:
        raise ConfigError("oracle limited to 1 <= k <= 3 and 1..6 primes",
                          "random_model", "moment_oracle_small")
    w = [p ** (-sigma) for p in primes]
    total = 0.0
    for a in itertools.product(range(len(primes)), repeat=k):
        wa = math.prod(w[i] for i in a)
        ka = tuple(sorted(a))
        for b in itertools.product(range(len(primes)), repeat=k):
            if tuple(sorted(b)) == ka:
                total += wa * math.prod(w[i] for i in b)
    return total


# ---------------------------------------------------------------- cache file

MAGIC = b"ZRMC1"
_HEADER = struct.Struct("<5sdqqq")
EMPIRICAL_FLAG = 0


def write_cache(path, sigma: float, P: int, seed: int, records: np.ndarray):
    """Write ``records`` (n x 2 model draws, or n x 3 empirical t-records).

    Header: magic ``ZRMC1``, sigma (f8), P (i8), seed (i8), count (i8), all
    little-endian.  Empirical files set P = 0 and carry (t, log_modulus,
    argument) triples; model files carry (log_modulus, argument) pairs.
    """
    rec = np.ascontiguousarray(records, dtype="<f8")
    width = 3 if P == EMPIRICAL_FLAG else 2
    if rec.ndim != 2 or rec.shape[1] != width:
        raise CacheError(f"records must have shape (n, {width})",
                         "random_model", "write_cache")
    seed_i = int(seed) if int(seed) < 2**63 else int(seed) - 2**64
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, float(sigma), int(P), seed_i, len(rec)))
        fh.write(rec.tobytes())
    os.replace(tmp, path)


def read_cache(path):
    """Returns ``(sigma, P, seed, records)``; raises CacheError on corruption."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise CacheError(str(exc), "random_model", "read_cache") from exc
    if len(raw) < _HEADER.size:
        raise CacheError("truncated header", "random_model", "read_cache")
    magic, sigma, P, seed, count = _HEADER.unpack_from(raw)
    if magic != MAGIC or count < 0:
        raise CacheError("bad magic or count", "random_model", "read_cache")
    width = 3 if P == EMPIRICAL_FLAG else 2
    body = raw[_HEADER.size:]
    if len(body) != 8 * width * count:
        raise CacheError("payload length disagrees with header", "random_model",
                         "read_cache")
    rec = np.frombuffer(body, dtype="<f8").reshape(count, width).astype(float)
    return sigma, P, seed, rec


def cache_dir() -> Path | None:
    d = os.environ.get("ZETALAB_CACHE_DIR")
    return Path(d) if d else None


def _cache_path(cfg: ModelConfig, sigma: float, n: int, d: Path) -> Path:
    tag = "g" if cfg.tail_mode == "gaussian-compensate" else "d"
    return d / f"model_s{sigma:.6f}_P{cfg.prime_cutoff}_seed{cfg.master_seed}_{tag}_n{n}.zrmc"


def model_samples(cfg: ModelConfig, n: int, sigmas=None,
                  chunk: int = 1_000_000) -> np.ndarray:
    """Streams 0..n-1, reusing (and filling) the on-disk cache when
    ``ZETALAB_CACHE_DIR`` is set.  Shapes as in :func:`sample_log_zeta_batch`."""
    single = sigmas is None
    sig = [cfg.sigma] if single else [float(s) for s in sigmas]
    d = cache_dir()
    result: dict[float, np.ndarray] = {}
    if d is not None:
        d.mkdir(parents=True, exist_ok=True)
        for s in sig:
            path = _cache_path(cfg, s, n, d)
            if path.exists():
                hs, hP, hseed, rec = read_cache(path)
                if (hs, hP, hseed, len(rec)) != (s, cfg.prime_cutoff,
                                                 cfg.master_seed, n):
                    raise CacheError(f"cache header mismatch in {path}",
                                     "random_model", "model_samples")
                result[s] = rec
    todo = [s for s in sig if s not in result]
    if todo:
        out = np.empty((len(todo), n, 2))
        for a in range(0, n, chunk):
            b = min(n, a + chunk)
            out[:, a:b] = sample_log_zeta_batch(cfg, a, b - a, sigmas=todo)
        for k, s in enumerate(todo):
            result[s] = out[k]
            if d is not None:
                write_cache(_cache_path(cfg, s, n, d), s, cfg.prime_cutoff,
                            cfg.master_seed, out[k])
    arr = np.stack([result[s] for s in sig])
    return arr[0] if single else arr
