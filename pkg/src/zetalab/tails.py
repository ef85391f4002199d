"""Large deviations of the random model: saddle points and tail probabilities.

For V = log|zeta(sigma, X)| (or arg zeta(sigma, X)) and tau > 0 the saddle
point kappa solves M'(kappa) = tau, and

    P(V > tau) ~ exp(M(kappa) - tau kappa) / (kappa sqrt(2 pi M''(kappa))).

The relative correction to this formula is of order kappa^{1-1/sigma} log kappa;
it is exported as ``correction_scale`` rather than modelled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ConvergenceError, RangeError
from .model import DEFAULT_CUTOFF, ModelConfig, model_samples
from .moments import (ARGUMENT, DEFAULT_P_QUAD, K_MAX, MODULUS, CumulantReport,
                      asymptotic_constants, cumulants)

TAU_MIN = 0.1
RESIDUAL_TOL = 1e-9       # |M'(kappa) - tau| <= RESIDUAL_TOL * max(1, tau) on return
DAMPING = 0.8
MAX_REJECTIONS = 3
MAX_ITERS = 200
MC_MIN_COUNT = 100        # expected exceedances below which an MC tail is not reported


@dataclass(frozen=True)
class SaddleSolution:
    sigma: float
    tau: float
    kappa: float
    M_at_kappa: float
    M2_at_kappa: float
    newton_iters: int
    M1_at_kappa: float = float("nan")
    bisection_steps: int = 0
    kind: str = MODULUS


@dataclass(frozen=True)
class TailEstimate:
    """Saddle and/or Monte Carlo estimate of P(V > tau).

    ``p_saddle`` is None for a pure Monte Carlo estimate; ``p_mc`` and
    ``mc_stderr`` are None when no simulation backs the number.
    """

    tau: float
    p_saddle: float | None
    p_mc: float | None
    mc_stderr: float | None
    correction_scale: float
    sigma: float = float("nan")
    kappa: float = float("nan")
    n: int = 0
    kind: str = MODULUS


def _check(sigma, tau, kind, op):
    if not 0.5 < sigma <= 1.0:
        raise ConfigError(f"sigma must lie in (1/2, 1], got {sigma}", "tails", op)
    if kind not in (MODULUS, ARGUMENT):
        raise ConfigError(f"unknown kind {kind!r}", "tails", op)
    if not tau >= TAU_MIN:
        raise ConfigError(f"tau must be >= {TAU_MIN}, got {tau}", "tails", op)


def _seed(sigma, tau, kind, m2_zero):
    k_small = tau / m2_zero
    if kind == ARGUMENT or sigma >= 1.0 or tau < 3.0:
        return k_small
    g2 = asymptotic_constants(sigma).g2
    return g2 * (tau * math.log(tau)) ** (sigma / (1.0 - sigma))


def solve_saddle(sigma: float, tau: float, kind: str = MODULUS,
                 P_quad: int = DEFAULT_P_QUAD) -> SaddleSolution:
    """Solve M'(kappa) = tau by safeguarded Newton iteration.

    M' is strictly increasing, so every evaluation tightens a bracket
    ``[lo, hi]``.  A Newton step landing outside it is shortened by the
    damping factor; after three rejections the step is replaced by bisection
    (or by doubling while no upper end is known).

    Raises:
        RangeError: kappa would exceed the supported maximum.
        ConvergenceError: the residual tolerance was not met.
    """
    sigma, tau = float(sigma), float(tau)
    _check(sigma, tau, kind, "solve_saddle")
    cache: dict[float, CumulantReport] = {}

    def ev(k):
        if k > K_MAX:
            raise RangeError(f"saddle point exceeds {K_MAX:g} at tau = {tau}",
                             "tails", "solve_saddle")
        if k not in cache:
            cache[k] = cumulants(sigma, k, kind, P_quad)
        return cache[k]

    scale = max(1.0, tau)
    k = _seed(sigma, tau, kind, ev(0.0).M2)
    lo, hi = 0.0, math.inf
    iters = bisections = 0
    best = None
    for iters in range(1, MAX_ITERS + 1):
        c = ev(k)
        r = c.M1 - tau
        if r < 0:
            lo = max(lo, k)
        else:
            hi = min(hi, k)
        if best is None or abs(r) < abs(best[1]):
            best = (k, r)
        step = -r / c.M2
        # stop at the noise floor: tolerance met and the update is negligible
        if abs(r) <= RESIDUAL_TOL * scale and (abs(step) <= 1e-13 * k
                                               or abs(r) <= 1e-14 * scale):
            break
        if math.isfinite(hi) and hi - lo <= 4e-16 * hi:
            break
        kn = k + step
        rejected = 0
        while not lo < kn < hi and rejected < MAX_REJECTIONS:
            step *= DAMPING
            kn = k + step
            rejected += 1
        if not lo < kn < hi:
            kn = 0.5 * (lo + hi) if math.isfinite(hi) else 2.0 * max(k, lo)
            bisections += 1
        k = kn
    k, r = best
    if abs(r) > RESIDUAL_TOL * scale:
        raise ConvergenceError(f"saddle residual {r:.3g} after {iters} iterations",
                               "tails", "solve_saddle")
    c = ev(k)
    return SaddleSolution(sigma=sigma, tau=tau, kappa=k, M_at_kappa=c.M0,
                          M2_at_kappa=c.M2, newton_iters=iters, M1_at_kappa=c.M1,
                          bisection_steps=bisections, kind=kind)


def correction_scale(sigma: float, kappa: float) -> float:
    """kappa^{1 - 1/sigma} log kappa, the order of the neglected correction."""
    return kappa ** (1.0 - 1.0 / sigma) * math.log(kappa)


def _saddle_tail(sigma, tau, kind, P_quad, op):
    if tau < 1.0:
        raise ConfigError(f"tau must be >= 1 for the saddle tail, got {tau}", "tails", op)
    s = solve_saddle(sigma, tau, kind, P_quad)
    k = s.kappa
    p = math.exp(s.M_at_kappa - tau * k) / (k * math.sqrt(2.0 * math.pi * s.M2_at_kappa))
    return TailEstimate(tau=tau, p_saddle=p, p_mc=None, mc_stderr=None,
                        correction_scale=correction_scale(sigma, k), sigma=sigma,
                        kappa=k, kind=kind)


def tail_probability_saddle(sigma: float, tau: float,
                            P_quad: int = DEFAULT_P_QUAD) -> TailEstimate:
    """Saddle-point estimate of P(log|zeta(sigma, X)| > tau), tau >= 1."""
    return _saddle_tail(float(sigma), float(tau), MODULUS, P_quad,
                        "tail_probability_saddle")


def arg_tail_saddle(sigma: float, tau: float,
                    P_quad: int = DEFAULT_P_QUAD) -> TailEstimate:
    """Saddle-point estimate of P(arg zeta(sigma, X) > tau), tau >= 1."""
    return _saddle_tail(float(sigma), float(tau), ARGUMENT, P_quad, "arg_tail_saddle")


def tail_probability_mc(sigma: float, tau: float, n: int, seed: int = 0,
                        kind: str = MODULUS, lower: bool = False,
                        prime_cutoff: int = DEFAULT_CUTOFF,
                        tail_mode: str = "gaussian-compensate") -> TailEstimate:
    """Fraction of model draws (streams 0..n-1) with V > tau, or V < tau if ``lower``.

    Plain counting with the binomial standard error sqrt(p(1-p)/n).
    """
    n = int(n)
    if not 1 <= n <= 10**9:
        raise ConfigError("n must lie in [1, 1e9]", "tails", "tail_probability_mc")
    if kind not in (MODULUS, ARGUMENT):
        raise ConfigError(f"unknown kind {kind!r}", "tails", "tail_probability_mc")
    cfg = ModelConfig(float(sigma), prime_cutoff, seed, tail_mode)
    col = 0 if kind == MODULUS else 1
    v = model_samples(cfg, n)[:, col]
    hits = int(np.count_nonzero(v < tau if lower else v > tau))
    p = hits / n
    return TailEstimate(tau=float(tau), p_saddle=None, p_mc=p,
                        mc_stderr=math.sqrt(p * (1.0 - p) / n),
                        correction_scale=float("nan"), sigma=float(sigma), n=n,
                        kind=kind)


def tail_compare(sigma: float, tau: float, n: int, seed: int = 0,
                 kind: str = MODULUS, P_quad: int = DEFAULT_P_QUAD,
                 prime_cutoff: int = DEFAULT_CUTOFF) -> TailEstimate:
    """Saddle value, plus the MC estimate when n p_saddle >= MC_MIN_COUNT."""
    est = _saddle_tail(float(sigma), float(tau), kind, P_quad, "tail_compare")
    if n * est.p_saddle < MC_MIN_COUNT:
        return est
    mc = tail_probability_mc(sigma, tau, n, seed, kind, prime_cutoff=prime_cutoff)
    return TailEstimate(tau=est.tau, p_saddle=est.p_saddle, p_mc=mc.p_mc,
                        mc_stderr=mc.mc_stderr, correction_scale=est.correction_scale,
                        sigma=est.sigma, kappa=est.kappa, n=mc.n, kind=kind)
