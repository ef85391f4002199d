"""The Riemann zeta function on vertical lines, log zeta with a tracked argument,
and the short Dirichlet polynomial R_Y.

zeta(s) is computed by Euler-Maclaurin summation with K = 8 Bernoulli terms:

    zeta(s) = sum_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
              + sum_{k=1}^{K} B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1} + R,

with |R| <= |s+2K+1| / (sigma+2K+1) * |first omitted term|.  N is the
smallest integer making that bound at most tol/10.  Phases t log n are
reduced as fractions of a turn, so the attainable relative accuracy at
height t is about 1e-15 * t (rounding of t log n), not better.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import NearZeroError, RangeError
from .primes import PrimeTable, prime_power_arrays, table_for
from .rng import unit_phase

K_BERNOULLI = 8
_B2K = np.array([1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
                 -3617 / 510, 43867 / 798])
# B_{2k} / (2k)! for k = 1..K+1 (the last is the first omitted term)
_BCOEF = np.array([_B2K[k - 1] / math.factorial(2 * k) for k in range(1, K_BERNOULLI + 2)])

SIGMA_MAX = 3.0
T_MAX = 1e7
# apoints contours may dip slightly left of 1/2
SIGMA_MIN_CONTOUR = 0.4
ANCHOR_SIGMA = 1.75     # |zeta - 1| <= zeta(1.75) - 1 < 1 here, so Log is the continuous branch
PATH_STEP = 0.25
MAX_BISECT = 20
NEAR_ZERO = 1e-10

OK = 0
PATH_REFINED = 1
NEAR_ZERO_Q = 2
QUALITY_NAMES = {OK: "ok", PATH_REFINED: "path_refined", NEAR_ZERO_Q: "near_zero"}

_TWO_PI_INV = 1.0 / (2.0 * math.pi)


# ---------------------------------------------------------------- kernels

@njit(cache=True)
def _choose_N(sigma, t, tol):
    """Smallest N >= 10 with the Euler-Maclaurin remainder bound <= tol / 10."""
    K = K_BERNOULLI
    lg = math.log(abs(_BCOEF[K]))
    for j in range(2 * K + 1):
        lg += 0.5 * math.log((sigma + j) ** 2 + t * t)
    lg += 0.5 * math.log((sigma + 2 * K + 1) ** 2 + t * t) - math.log(sigma + 2 * K + 1)
    target = math.log(0.1 * tol)
    # |T_{K+1}| = exp(lg) N^{-sigma-2K-1}
    N = math.exp((lg - target) / (sigma + 2 * K + 1))
    return max(10, int(math.ceil(N)))


@njit(cache=True)
def _em_tail(sr, si, N):
    """Euler-Maclaurin terms beyond the main sum, for s = sr + i si."""
    lN = math.log(N)
    # N^{-s}
    mag = math.exp(-sr * lN)
    c, s_ = math.cos(si * lN), -math.sin(si * lN)
    pr, pi = mag * c, mag * s_
    # N^{1-s}/(s-1)
    ar, ai = pr * N, pi * N
    dr, di = sr - 1.0, si
    den = dr * dr + di * di
    tr = (ar * dr + ai * di) / den
    ti = (ai * dr - ar * di) / den
    tr += 0.5 * pr
    ti += 0.5 * pi
    # Bernoulli corrections: poch = s (s+1) ... (s+2k-2), power = N^{-s-2k+1}
    qr, qi = sr, si
    wr, wi = pr / N, pi / N
    inv2 = 1.0 / (N * N)
    for k in range(1, K_BERNOULLI + 1):
        b = _BCOEF[k - 1]
        xr = qr * wr - qi * wi
        xi = qr * wi + qi * wr
        tr += b * xr
        ti += b * xi
        a1r, a1i = sr + 2 * k - 1, si
        a2r, a2i = sr + 2 * k, si
        mr = a1r * a2r - a1i * a2i
        mi = a1r * a2i + a1i * a2r
        qr, qi = qr * mr - qi * mi, qr * mi + qi * mr
        wr *= inv2
        wi *= inv2
    return tr, ti


@njit(cache=True)
def _zeta_point(sr, si, tol):
    """zeta(sr + i si) for si >= 0; retightens N when |zeta| is small."""
    tol_eff = tol
    for _ in range(3):
        N = _choose_N(sr, si, tol_eff)
        zr, zi = 0.0, 0.0
        tt = si * _TWO_PI_INV
        for n in range(1, N):
            ln = math.log(n)
            m = math.exp(-sr * ln)
            u = tt * ln
            c, s = unit_phase(u - math.floor(u))
            zr += m * c
            zi -= m * s
        er, ei = _em_tail(sr, si, float(N))
        zr += er
        zi += ei
        a = math.hypot(zr, zi)
        if a >= 0.1 or tol_eff <= tol * 1e-9:
            break
        tol_eff = tol * max(a, 1e-10)
    return zr, zi


@njit(cache=True)
def _zeta_batch(sr, si, tol, out):
    for i in range(sr.shape[0]):
        t = si[i]
        zr, zi = _zeta_point(sr[i], abs(t), tol)
        out[i, 0] = zr
        out[i, 1] = zi if t >= 0 else -zi


@njit(cache=True)
def _zeta_nodes(sig, t, tol, out):
    """zeta(sig[j] + i t) for every node j, sharing the phase e^{-i t log n}.

    ``sig`` is descending; N is chosen for the smallest node.  Gaps equal to
    PATH_STEP = 1/4 use n^{1/4} = sqrt(sqrt(n)) instead of an exp.
    """
    nn = sig.shape[0]
    N = _choose_N(sig[nn - 1], t, tol)
    acc_r = np.zeros(nn)
    acc_i = np.zeros(nn)
    quarter = np.empty(nn, dtype=np.bool_)
    for j in range(1, nn):
        quarter[j] = abs(sig[j - 1] - sig[j] - 0.25) < 1e-14
    tt = t * _TWO_PI_INV
    for n in range(1, N):
        ln = math.log(n)
        u = tt * ln
        c, s = unit_phase(u - math.floor(u))
        q = math.sqrt(math.sqrt(n))
        m = math.exp(-sig[0] * ln)
        for j in range(nn):
            if j > 0:
                m *= q if quarter[j] else math.exp((sig[j - 1] - sig[j]) * ln)
            acc_r[j] += m * c
            acc_i[j] -= m * s
    for j in range(nn):
        er, ei = _em_tail(sig[j], t, float(N))
        out[j, 0] = acc_r[j] + er
        out[j, 1] = acc_i[j] + ei


@njit(cache=True)
def _dirichlet_kernel(sigma, t, logv, inv_n, out):
    for i in range(t.shape[0]):
        tt = t[i] * _TWO_PI_INV
        ar, ai = 0.0, 0.0
        for j in range(logv.shape[0]):
            u = tt * logv[j]
            c, s = unit_phase(u - math.floor(u))
            m = math.exp(-sigma * logv[j]) * inv_n[j]
            ar += m * c
            ai -= m * s
        out[i, 0] = ar
        out[i, 1] = ai


# ---------------------------------------------------------------- public API

def _check_window(sigma, t, lo=0.5, op="zeta", strict=True):
    sigma = np.asarray(sigma, dtype=float)
    t = np.asarray(t, dtype=float)
    bad_s = (sigma <= lo) if strict else (sigma < lo)
    if np.any(bad_s | (sigma > SIGMA_MAX)):
        raise RangeError(f"re(s) must lie in ({lo}, {SIGMA_MAX}]", "zeta_eval", op)
    if np.any(np.abs(t) > T_MAX) or not np.all(np.isfinite(t)):
        raise RangeError(f"|im(s)| must be <= {T_MAX:g}", "zeta_eval", op)


def zeta(s, tol: float = 1e-12) -> complex:
    """zeta(s) for 1/2 < re(s) <= 3, |im(s)| <= 1e7, to relative ``tol``.

    zeta(conj s) = conj zeta(s) exactly: negative heights are evaluated at
    |t| and conjugated.
    """
    s = complex(s)
    if tol < 1e-12:
        raise RangeError("tol must be >= 1e-12", "zeta_eval", "zeta")
    _check_window(s.real, s.imag)
    out = np.empty((1, 2))
    _zeta_batch(np.array([s.real]), np.array([s.imag]), float(tol), out)
    return complex(out[0, 0], out[0, 1])


def zeta_batch(sigma, t, tol: float = 1e-10, sigma_min: float = 0.5) -> np.ndarray:
    """Vectorised zeta(sigma + i t) (complex array, broadcast shapes).

    ``sigma_min`` may be lowered to 0.4 for contour work.
    """
    sigma, t = np.broadcast_arrays(np.asarray(sigma, dtype=float), np.asarray(t, dtype=float))
    if sigma_min < SIGMA_MIN_CONTOUR:
        raise RangeError(f"sigma_min must be >= {SIGMA_MIN_CONTOUR}", "zeta_eval", "zeta")
    _check_window(sigma, t, lo=sigma_min, strict=sigma_min >= 0.5)
    out = np.empty((sigma.size, 2))
    _zeta_batch(np.ascontiguousarray(sigma.ravel()), np.ascontiguousarray(t.ravel()),
                float(tol), out)
    return (out[:, 0] + 1j * out[:, 1]).reshape(sigma.shape)


@dataclass(frozen=True)
class LogZetaValue:
    """log zeta(sigma + i t) = log_modulus + i argument, argument by continuation."""

    sigma: float
    t: float
    log_modulus: float
    argument: float
    quality: str


def _path_nodes(sigma: float) -> np.ndarray:
    nodes = list(np.arange(ANCHOR_SIGMA, sigma, -PATH_STEP))
    if not nodes or nodes[-1] - sigma > 1e-12:
        nodes.append(sigma)
    return np.array(nodes, dtype=float)


def _refine(s_hi, z_hi, s_lo, z_lo, t, tol, depth):
    """Argument increment from s_hi to s_lo by bisection until steps < pi/2."""
    d = np.angle(z_lo / z_hi)
    if abs(d) < 0.5 * np.pi:
        return d, 0
    if depth >= MAX_BISECT:
        raise NearZeroError(
            f"argument increment >= pi/2 after {MAX_BISECT} bisections near "
            f"{s_lo:.6g}+{t:.6g}i", point=complex(s_lo, t),
            module="zeta_eval", operation="log_zeta_line")
    s_mid = 0.5 * (s_hi + s_lo)
    z_mid = complex(*_point(s_mid, t, tol))
    if abs(z_mid) < NEAR_ZERO:
        raise NearZeroError(f"|zeta| < {NEAR_ZERO} at {s_mid:.6g}+{t:.6g}i",
                            point=complex(s_mid, t), module="zeta_eval",
                            operation="log_zeta_line")
    a, n1 = _refine(s_hi, z_hi, s_mid, z_mid, t, tol, depth + 1)
    b, n2 = _refine(s_mid, z_mid, s_lo, z_lo, t, tol, depth + 1)
    return a + b, 1 + n1 + n2


def _point(sr, t, tol):
    out = np.empty((1, 2))
    _zeta_batch(np.array([sr]), np.array([t]), tol, out)
    return out[0, 0], out[0, 1]


def _track(sigma, t, vals, nodes, tol):
    """Continuous argument along the nodes; returns (log|z|, arg, quality)."""
    tsign = 1.0 if t >= 0 else -1.0
    ta = abs(t)
    z = vals[:, 0] + 1j * vals[:, 1]
    if np.any(np.abs(z) < NEAR_ZERO):
        raise NearZeroError(f"|zeta| < {NEAR_ZERO} on the path at height {t}",
                            point=complex(sigma, t), module="zeta_eval",
                            operation="log_zeta_line")
    arg = float(np.angle(z[0]))
    refined = 0
    for j in range(1, len(nodes)):
        d = float(np.angle(z[j] / z[j - 1]))
        if abs(d) >= 0.5 * np.pi:
            d, r = _refine(nodes[j - 1], z[j - 1], nodes[j], z[j], ta, tol, 0)
            refined += r
        arg += d
    return math.log(abs(z[-1])), tsign * arg, PATH_REFINED if refined else OK


def log_zeta_line(sigma: float, t: float, tol: float = 1e-10) -> LogZetaValue:
    """log zeta(sigma + i t), argument continued horizontally from the anchor line.

    The anchor is re(s) = 1.75, where |zeta - 1| < 1 so the principal Log
    equals the continuous branch coming in from +infinity (the same branch
    one gets anchoring at re(s) = 3).  Steps of 0.25 are bisected when an
    argument increment reaches pi/2.
    """
    sigma, t = float(sigma), float(t)
    if not 0.5 < sigma <= 1.0:
        raise RangeError("sigma must lie in (1/2, 1]", "zeta_eval", "log_zeta_line")
    if abs(t) < 10:
        raise RangeError("|t| must be >= 10", "zeta_eval", "log_zeta_line")
    _check_window(sigma, t, op="log_zeta_line")
    nodes = _path_nodes(sigma)
    vals = np.empty((len(nodes), 2))
    _zeta_nodes(nodes, abs(t), tol, vals)
    lm, ag, q = _track(sigma, t, vals, nodes, tol)
    return LogZetaValue(sigma, t, lm, ag, QUALITY_NAMES[q])


def log_zeta_line_batch(sigma: float, t, tol: float = 1e-10):
    """Vectorised log_zeta_line.

    Returns ``(log_modulus, argument, quality)`` arrays; points where the
    path meets |zeta| < 1e-10 get NaN values and quality NEAR_ZERO_Q instead
    of raising.
    """
    sigma = float(sigma)
    t = np.asarray(t, dtype=float).ravel()
    if not 0.5 < sigma <= 1.0:
        raise RangeError("sigma must lie in (1/2, 1]", "zeta_eval", "log_zeta_line")
    if np.any(np.abs(t) < 10):
        raise RangeError("|t| must be >= 10", "zeta_eval", "log_zeta_line")
    _check_window(sigma, t, op="log_zeta_line")
    nodes = _path_nodes(sigma)
    vals = _line_values(nodes, np.abs(t), tol)
    lm = np.empty(len(t))
    ag = np.empty(len(t))
    q = np.empty(len(t), dtype=np.int8)
    for i in range(len(t)):
        try:
            lm[i], ag[i], q[i] = _track(sigma, t[i], vals[i], nodes, tol)
        except NearZeroError:
            lm[i] = ag[i] = np.nan
            q[i] = NEAR_ZERO_Q
    return lm, ag, q


@njit(cache=True)
def _line_values_kernel(nodes, t, tol, out):
    tmp = np.empty((nodes.shape[0], 2))
    for i in range(t.shape[0]):
        _zeta_nodes(nodes, t[i], tol, tmp)
        for j in range(nodes.shape[0]):
            out[i, j, 0] = tmp[j, 0]
            out[i, j, 1] = tmp[j, 1]
        # small |zeta| at a node: recompute that node with a tighter N
        for j in range(nodes.shape[0]):
            if math.hypot(out[i, j, 0], out[i, j, 1]) < 0.1:
                zr, zi = _zeta_point(nodes[j], t[i], tol)
                out[i, j, 0] = zr
                out[i, j, 1] = zi


def _line_values(nodes, t, tol):
    out = np.empty((len(t), len(nodes), 2))
    _line_values_kernel(np.ascontiguousarray(nodes), np.ascontiguousarray(t), float(tol), out)
    return out


def dirichlet_R(sigma: float, t, Y: float, table: PrimeTable | None = None):
    """R_Y(sigma + i t) = sum_{p^n <= Y} p^{-n(sigma + i t)} / n (complex; scalar or array)."""
    table = table or table_for(Y)
    _, n, v, _ = prime_power_arrays(table, Y)
    tt = np.asarray(t, dtype=float)
    if np.any(np.abs(tt) > T_MAX):
        raise RangeError(f"|t| must be <= {T_MAX:g}", "zeta_eval", "dirichlet_R")
    flat = np.ascontiguousarray(tt.ravel())
    out = np.empty((flat.size, 2))
    _dirichlet_kernel(float(sigma), flat, np.log(v.astype(float)), 1.0 / n.astype(float), out)
    res = (out[:, 0] + 1j * out[:, 1]).reshape(tt.shape)
    return complex(res) if res.ndim == 0 else res
