"""Prime tables: a segmented sieve of Eratosthenes and prime-power listings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigError, InsufficientTableError

MAX_LIMIT = 10**9
DEFAULT_LIMIT = 10**8
_SEGMENT = 1 << 22


def _small_sieve(n: int) -> np.ndarray:
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if is_p[i]:
            is_p[i * i :: i] = False
    return np.flatnonzero(is_p).astype(np.int64)


@dataclass(frozen=True)
class PrimeTable:
    """All primes ``<= limit`` in ascending order.

    Attributes:
        limit: inclusive upper bound used for the sieve.
        primes: int64 array of the primes, read-only.
    """

    limit: int
    primes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.primes)

    def upto(self, x: float) -> np.ndarray:
        """Primes ``<= x`` (a view; requires ``x <= limit``)."""
        if x > self.limit:
            raise InsufficientTableError(
                f"requested primes up to {x} but table limit is {self.limit}",
                "prime_table", "upto")
        return self.primes[: int(np.searchsorted(self.primes, x, side="right"))]

    def count(self, x: float | None = None) -> int:
        """Prime counting function pi(x) restricted to the table."""
        if x is None:
            return len(self.primes)
        return len(self.upto(x))


def sieve(limit: int) -> PrimeTable:
    """Segmented sieve of Eratosthenes.

    Args:
        limit: inclusive bound, ``2 <= limit <= 10**9``.

    Returns:
        PrimeTable holding exactly the primes ``<= limit``.
    """
    if isinstance(limit, bool) or int(limit) != limit:
        raise ConfigError(f"limit must be an integer, got {limit!r}",
                          "prime_table", "sieve")
    limit = int(limit)
    if not 2 <= limit <= MAX_LIMIT:
        raise ConfigError(f"limit must lie in [2, {MAX_LIMIT}], got {limit}",
                          "prime_table", "sieve")

    root = math.isqrt(limit)
    base = _small_sieve(max(root, 2))
    if limit <= _SEGMENT:
        primes = _small_sieve(limit)
    else:
        chunks = [base]
        lo = root + 1
        while lo <= limit:
            hi = min(lo + _SEGMENT - 1, limit)
            seg = np.ones(hi - lo + 1, dtype=bool)
            for p in base:
                p = int(p)
                if p * p > hi:
                    break
                start = max(p * p, ((lo + p - 1) // p) * p)
                seg[start - lo :: p] = False
            chunks.append(np.flatnonzero(seg).astype(np.int64) + lo)
            lo = hi + 1
        primes = np.concatenate(chunks)
    primes.setflags(write=False)
    return PrimeTable(limit=limit, primes=primes)


@lru_cache(maxsize=8)
def cached_table(limit: int) -> PrimeTable:
    """Shared, memoised table (tables are immutable so sharing is safe)."""
    return sieve(limit)


def table_for(x: float) -> PrimeTable:
    """A cached table covering ``x``, rounded up to a power of ten."""
    lim = 10 ** max(3, math.ceil(math.log10(max(x, 2.0))))
    return cached_table(int(min(max(lim, x), MAX_LIMIT)))


def prime_power_arrays(table: PrimeTable, Y: float):
    """Arrays ``(p, n, p**n, prime_index)`` for all ``p**n <= Y``, sorted by value.

    ``prime_index`` is the position of ``p`` in ``table.primes``; random phase
    streams are keyed by it.
    """
    if Y > table.limit:
        raise InsufficientTableError(
            f"Y={Y} exceeds table limit {table.limit}", "prime_table",
            "prime_powers")
    ps = table.upto(Y)
    if len(ps) == 0:
        e = np.zeros(0, dtype=np.int64)
        return e, e.copy(), e.copy(), e.copy()
    p_list, n_list, v_list, i_list = [], [], [], []
    for n in range(1, int(math.log2(max(Y, 2))) + 2):
        vals = ps.astype(np.float64) ** n
        keep = vals <= Y
        if not keep.any():
            break
        idx = np.flatnonzero(keep)
        p_list.append(ps[idx])
        n_list.append(np.full(len(idx), n, dtype=np.int64))
        v_list.append(ps[idx] ** n)
        i_list.append(idx.astype(np.int64))
    p = np.concatenate(p_list)
    n = np.concatenate(n_list)
    v = np.concatenate(v_list)
    ix = np.concatenate(i_list)
    order = np.argsort(v, kind="stable")
    return p[order], n[order], v[order], ix[order]


def prime_powers(table: PrimeTable, Y: float) -> list[tuple[int, int]]:
    """All pairs ``(p, n)`` with ``p**n <= Y``, ordered by ``p**n``."""
    p, n, _, _ = prime_power_arrays(table, Y)
    return [(int(a), int(b)) for a, b in zip(p, n)]


# ---------------------------------------------------------------- prime zeta

def _mobius_upto(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    mu[0] = 0
    for p in _small_sieve(max(n, 2)):
        p = int(p)
        if p > n:
            break
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


_MU = _mobius_upto(256)


def prime_zeta(s: float) -> float:
    """Prime zeta function sum_p p^{-s} for real s > 1 (Moebius inversion of log zeta)."""
    from scipy.special import zetac

    if s <= 1.0:
        raise ConfigError("prime_zeta needs s > 1", "prime_table", "prime_zeta")
    total = 0.0
    for k in range(1, len(_MU)):
        if _MU[k] == 0:
            continue
        lz = math.log1p(zetac(k * s))
        if lz < 1e-19 * max(total, 1e-300):
            break
        total += _MU[k] * lz / k
    return total


def log_integral(x: float) -> float:
    """li(x) = Ei(log x)."""
    from scipy.special import expi

    return float(expi(math.log(x)))


def _direct_cutoff(P: float) -> int:
    return int(min(max(10 * P, 10**7), MAX_LIMIT))


@lru_cache(maxsize=4096)
def _tail_direct(s: float, P: float) -> float:
    from scipy.special import exp1

    Q = _direct_cutoff(P)
    ps = table_for(Q).upto(Q)
    ps = ps[np.searchsorted(ps, P, side="right"):].astype(np.float64)
    # beyond Q: prime density 1/log x, i.e. int_Q^inf x^{-s} dx/log x = E1((s-1) log Q)
    return float(np.sum(ps ** (-s))) + float(exp1((s - 1.0) * math.log(Q)))


def prime_zeta_tail(s: float, P: float, table: PrimeTable | None = None) -> float:
    """sum_{p > P} p^{-s} for real s > 1.

    Two routes.  Prime zeta minus a partial sum has absolute error near
    1e-16 * 2^{-s}.  Direct summation over ``(P, Q]`` closed by the
    prime-density integral beyond Q drops roughly |pi(Q) - li(Q)| Q^{-s},
    below sqrt(Q) Q^{-s}.  The route with the smaller error is used; the
    direct one wins once s exceeds about 2.8, where the subtraction would
    cancel catastrophically against a tiny tail.
    """
    if s <= 1.0:
        raise ConfigError("prime_zeta_tail needs s > 1", "prime_table", "prime_zeta_tail")
    Q = _direct_cutoff(P)
    if Q > P and 0.5 * math.log(Q) - s * math.log(Q) < math.log(4e-16) - s * math.log(2.0):
        return _tail_direct(float(s), float(P))
    table = table or table_for(P)
    ps = table.upto(P).astype(np.float64)
    return prime_zeta(s) - float(np.sum(ps ** (-s)))
