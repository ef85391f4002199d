"""Counter-based random numbers.

Every variate is a pure function of ``(seed, stream, index)``: a SplitMix64
finaliser chained over the three keys.  No generator state exists, so any
subset of draws can be produced in any order, on any worker, with identical
results.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_MASK = (1 << 64) - 1
_G = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0

# prime indices are < 2**40; the Gaussian tail draws live above that
GAUSS_INDEX = 1 << 62


@njit(cache=True, inline="always")
def _splitmix(x):
    z = x + _G
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def key_uniform(seed, stream, index):
    """Uniform double in [0, 1) keyed by three uint64 counters."""
    h = _splitmix(_splitmix(_splitmix(seed) ^ stream) ^ index)
    return np.float64(h >> _S11) * _INV53


def as_key(x: int) -> np.uint64:
    """Map any Python int (possibly negative) onto a uint64 key."""
    return np.uint64(int(x) & _MASK)


@njit(cache=True, inline="always")
def stream_key(seed, stream):
    """Per-stream prefix of :func:`key_uniform`; hoist it out of inner loops."""
    return _splitmix(_splitmix(seed) ^ stream)


@njit(cache=True, inline="always")
def keyed_uniform(skey, index):
    """``key_uniform(seed, stream, index)`` given ``skey = stream_key(seed, stream)``."""
    return np.float64(_splitmix(skey ^ index) >> _S11) * _INV53


@njit(cache=True, inline="always")
def unit_phase(u):
    """``(cos 2 pi u, sin 2 pi u)`` for ``u`` in [0, 1).

    Quadrant reduction of ``4u`` is exact, leaving |r| <= pi/4 for the Taylor
    polynomials below (truncation error < 3e-18).  Several times faster than
    libm sin and cos, which dominate the model sampler otherwise.
    """
    v = 4.0 * u
    q = np.floor(v + 0.5)
    r = (v - q) * 1.5707963267948966
    r2 = r * r
    sn = r * (1.0 + r2 * (-1.6666666666666666e-01 + r2 * (8.3333333333333333e-03
         + r2 * (-1.9841269841269841e-04 + r2 * (2.7557319223985891e-06
         + r2 * (-2.5052108385441719e-08 + r2 * (1.6059043836821615e-10
         + r2 * (-7.6471637318198165e-13 + r2 * 2.8114572543455208e-15))))))))
    cs = 1.0 + r2 * (-0.5 + r2 * (4.1666666666666667e-02 + r2 * (-1.3888888888888889e-03
         + r2 * (2.4801587301587302e-05 + r2 * (-2.7557319223985891e-07
         + r2 * (2.0876756987868099e-09 + r2 * (-1.1470745597729725e-11
         + r2 * (4.7794773323873853e-14 + r2 * -1.5619206968586225e-16))))))))
    # rotate by q quarter turns without branches (q is random, so branches mispredict)
    k = int(q)
    odd = np.float64(k & 1)
    sgn = 1.0 - np.float64(k & 2)
    return sgn * (cs - odd * (cs + sn)), sgn * (sn + odd * (cs - sn))


@njit(cache=True)
def _uniform_grid(seed, streams, index, out):
    for i in range(streams.shape[0]):
        out[i] = key_uniform(seed, streams[i], index)


def uniforms(seed: int, streams, index: int = 0) -> np.ndarray:
    """Vector of uniforms for ``streams`` at a fixed ``index``."""
    s = np.asarray(streams, dtype=np.uint64)
    out = np.empty(s.shape[0])
    _uniform_grid(as_key(seed), s, as_key(index), out)
    return out
