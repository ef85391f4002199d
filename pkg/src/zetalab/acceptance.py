"""The sixteen acceptance criteria as callable checks.

Each check returns a :class:`Result`; ``run`` executes a selection and
prints one PASS/FAIL line per criterion.  Both the test suite and the
``selftest`` subcommand go through this module, so the thresholds live in
exactly one place.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from scipy.special import zeta as hurwitz_zeta

from . import apoints, discrepancy, empirical, moments, smoothing, tails
from .model import ModelConfig, moment_oracle_small


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:2d} {self.title}: {self.detail} ({self.seconds:.1f}s)"


SIGMAS = (0.6, 0.75, 0.9)


def c01_moment_identity() -> Result:
    worst = 0.0
    for s in SIGMAS:
        worst = max(worst, abs(moments.M(s, 2.0).M - math.log(hurwitz_zeta(2 * s, 1))))
    return Result(1, "M(sigma,2) = log zeta(2 sigma)", worst <= 1e-10,
                  f"max gap {worst:.2e} (tol 1e-10)", {"max_gap": worst})


def c02_zero_mean() -> Result:
    worst = max(abs(moments.cumulants(s, 0.0).M1) for s in SIGMAS)
    return Result(2, "M'(0) = 0", worst <= 1e-10, f"max |M'(0)| {worst:.2e} (tol 1e-10)",
                  {"max_abs": worst})


def _rel(analytic, numeric, lower):
    # M'''(1) vanishes exactly (M'' is symmetric about 1 by Euler's
    # transformation); there the error is measured against |M''(1)|.
    scale = abs(analytic) if abs(analytic) > 1e-12 * abs(lower) else abs(lower)
    return abs(analytic - numeric) / scale


def c03_gradients(sigma: float = 0.75, h: float = 1e-3) -> Result:
    """Chained central differences: M' from M, M'' from M', M''' from M''."""
    worst = 0.0
    rows = {}
    for k in (1.0, 10.0, 100.0):
        c, p, m = (moments.cumulants(sigma, x) for x in (k, k + h, k - h))
        r1 = _rel(c.M1, (p.M0 - m.M0) / (2 * h), c.M0)
        r2 = _rel(c.M2, (p.M1 - m.M1) / (2 * h), c.M1)
        r3 = _rel(c.M3, (p.M2 - m.M2) / (2 * h), c.M2)
        rows[k] = (r1, r2, r3)
        worst = max(worst, r1, r2, r3)
    return Result(3, "cumulant gradients", worst <= 1e-6,
                  f"max relative error {worst:.2e} (tol 1e-6)", {"rows": rows})


def c04_round_trip(sigma: float = 0.75) -> Result:
    worst = 0.0
    for k in (0.5, 2.0, 20.0, 200.0):
        tau = moments.cumulants(sigma, k).M1
        worst = max(worst, abs(tails.solve_saddle(sigma, tau).kappa - k) / k)
    return Result(4, "saddle round trip", worst <= 1e-8, f"max relative error {worst:.2e} (tol 1e-8)",
                  {"max_rel": worst})


def c05_saddle_vs_mc(sigma: float = 0.75, n: int = 10**7, seed: int = 0) -> Result:
    ok = True
    gaps = {}
    for tau in (1.0, 1.5, 2.0):
        ps = tails.tail_probability_saddle(sigma, tau).p_saddle
        mc = tails.tail_probability_mc(sigma, tau, n, seed)
        gap = abs(ps - mc.p_mc)
        ok &= gap <= max(3 * mc.mc_stderr, 0.3 * mc.p_mc)
        gaps[tau] = (ps, mc.p_mc, mc.mc_stderr, gap / mc.p_mc)
    shrink = gaps[2.0][3] <= gaps[1.0][3] + 3 * gaps[2.0][2] / gaps[2.0][1]
    ok &= shrink
    txt = ", ".join(f"tau={t}: rel gap {g[3]:.3f}" for t, g in gaps.items())
    return Result(5, "saddle vs Monte Carlo tail", bool(ok), txt + f"; shrinking={shrink}",
                  {"rows": gaps})


def c06_constants(sigma: float = 0.75) -> Result:
    c = moments.asymptotic_constants(sigma)
    tau = 50.0
    kappa = tails.solve_saddle(sigma, tau).kappa
    ratio = kappa / (tau * math.log(tau)) ** (sigma / (1 - sigma))
    rel = abs(ratio - c.g2) / c.g2
    ok = c.g2_residual <= 1e-10 and rel <= 0.25
    return Result(6, "asymptotic constants", ok,
                  f"g2 residual {c.g2_residual:.1e}, kappa(50) ratio {ratio:.4f} vs g2 {c.g2:.4f} "
                  f"({rel:.1%}, tol 25%)", {"g2": c.g2, "ratio": ratio})


def c07_fourier_decay() -> Result:
    worst = -math.inf
    for s in (0.75, 1.0):
        for u in (20.0, 50.0, 100.0):
            v = abs(complex(moments.phi_rand(s, u, 0.0).value))
            worst = max(worst, v / math.exp(-u / (5 * math.log(u))))
    return Result(7, "Fourier decay of Phi^rand", worst <= 1.0,
                  f"max |Phi|/envelope {worst:.3e}", {"max_ratio": worst})


def c08_smoothing(seed: int = 0) -> Result:
    G = smoothing.selberg_G
    g_ok = G(0.0) == 2 / math.pi and G(0.5) == 1 / math.pi and G(1.0) == 0.0
    sgn = 0.0
    for L in (4.0, 16.0):
        for x in (0.1, 1.0, 3.7):
            for y in (x, -x):
                err = abs(smoothing.sgn_approx(y, L) - math.copysign(1.0, y))
                env = smoothing.SGN_ENVELOPE_C * float(smoothing.fejer(y, L))
                # at integer L x the envelope is 0 and so is the exact error
                sgn = max(sgn, err - env)
    sgn_ok = sgn <= 1e-10
    rng = random.Random(seed)
    fej = 0.0
    for _ in range(20):
        x, L = rng.uniform(-5, 5), rng.uniform(0.5, 50)
        lhs, rhs = smoothing.fejer_identity_check(x, L)
        fej = max(fej, abs(lhs - rhs))
    spec = smoothing.PerronKernelSpec(0.01, 10, 1.0)
    sup = smoothing.perron_sup_on_line(spec)
    kern_ok = sup <= 3.0 ** spec.N
    br = {}
    for y, target in ((0.5, 0.0), (2.0, 1.0)):
        lo, hi = smoothing.perron_bracket_check(y, spec)
        br[y] = (lo, hi)
    br_ok = all(abs(lo - t) <= 0.02 and abs(hi - t) <= 0.02 and lo <= hi + 1e-12
                for (lo, hi), t in zip(br.values(), (0.0, 1.0)))
    ok = g_ok and sgn_ok and fej < 1e-10 and kern_ok and br_ok
    return Result(8, "smoothing toolkit", ok,
                  f"G exact={g_ok}, sgn excess {sgn:.1e}, Fejer gap {fej:.1e}, "
                  f"kernel sup {sup:.3g} <= 3^N, bracket {br}", {})


def c09_brute_force() -> Result:
    primes = [2, 3, 5]
    worst = 0.0
    bound_ok = True
    for s in SIGMAS:
        S2 = sum(p ** (-2 * s) for p in primes)
        S4 = sum(p ** (-4 * s) for p in primes)
        for k, closed in ((1, S2), (2, 2 * S2 * S2 - S4)):
            v = moment_oracle_small(primes, s, k)
            worst = max(worst, abs(v - closed))
            # k = 1 is the equality case; allow rounding
            bound_ok &= v <= math.factorial(k) * S2**k * (1 + 1e-12)
    return Result(9, "brute-force moment oracle", worst <= 1e-12 and bound_ok,
                  f"max gap {worst:.1e}, k! moment bound respected={bound_ok}", {"max_gap": worst})


def c10_surrogate(sigma: float = 0.75, T: float = 1e5, n: int = 10**4, seed: int = 0) -> Result:
    _, thr, frac = empirical.approximation_gap(sigma, T, n, seed)
    return Result(10, "Dirichlet surrogate fidelity", frac >= 0.99,
                  f"{frac:.2%} of t within the bound {thr:.3g}", {"fraction": frac})


def c11_charfun(sigma: float = 0.75, T: float = 1e6, n: int = 10**5, seed: int = 0) -> Result:
    s = empirical.sample_line(empirical.LineWindow(sigma, T, n, "stratified", seed, "dirichlet-RY"))
    rows = {}
    ok = True
    for u, v in ((1, 0), (0, 1), (1, 1), (3, 2)):
        c = empirical.charfun_compare(s, u, v)
        rows[(u, v)] = (c.gap, c.budget)
        ok &= c.ok
    worst = max(g / b for g, b in rows.values())
    return Result(11, "characteristic functions", bool(ok),
                  f"max gap/budget {worst:.3f}", {"rows": rows})


def c12_second_moment(sigma: float = 0.6, T: float = 1e4, n: int = 10**5, seed: int = 0) -> Result:
    r = empirical.second_moment(sigma, T, n, seed)
    res, sec = r.residual, r.secondary_term
    ok = (res * sec > 0) and abs(res - sec) <= max(3 * r.stderr, 0.3 * abs(sec))
    return Result(12, "second-moment correction", bool(ok),
                  f"residual {res:.4f} +- {r.stderr:.4f} vs secondary term {sec:.4f}",
                  {"residual": res, "secondary": sec, "stderr": r.stderr})


def c13_discrepancy(sigma: float = 0.75, n: int = 10**5, seed: int = 0) -> Result:
    tr = discrepancy.decay_trend(sigma, [1e3, 1e4, 1e5, 1e6], n, seed=seed)
    D = [r.D_hat for r in tr.reports]
    dec = all(b < a for a, b in zip(D, D[1:]))
    cfg = ModelConfig(sigma, master_seed=seed)
    other = ModelConfig(sigma, master_seed=seed + 1)
    null = discrepancy.discrepancy_estimate(discrepancy.model_ecdf(cfg, n),
                                            discrepancy.model_ecdf(other, n), sigma=sigma)
    null_ok = null.D_hat <= 3 * null.stat_err
    return Result(13, "discrepancy trend", dec and null_ok,
                  "D_hat " + ", ".join(f"{d:.4f}" for d in D)
                  + f" (strictly decreasing={dec}); null {null.D_hat:.4f} vs 3 stat_err "
                  f"{3 * null.stat_err:.4f}", {"D_hat": D, "null": null.D_hat, "slope": tr.slope})


def c14_littlewood(sigma: float = 0.75, T: float = 1e6, n_t: int = 10**4,
                   n_model: int = 10**7, seed: int = 0) -> Result:
    rows = {}
    for a in (1.0, 1 + 1j):
        rows[a] = apoints.littlewood_check(a, sigma, T, n_t, n_model, seed)
    worst = max(r.gap_over_error for r in rows.values())
    return Result(14, "Littlewood identity", worst <= 1.0,
                  ", ".join(f"a={a}: lhs {r.lhs:.4f} rhs {r.rhs:.4f} ratio {r.gap_over_error:.3f}"
                            for a, r in rows.items()), {"max_ratio": worst})


def c15_census(a: complex = 2.0, s1: float = 0.55, s2: float = 0.95, T: float = 1e4,
               n: int = 10**7, h: float = 0.01, seed: int = 0) -> Result:
    c = apoints.census(a, s1, s2, T, n, h, seed, polish=True)
    res_ok = c.max_residual < 0.1
    roots_ok = (len(c.roots) == c.count
                and all(r.residual < apoints.POLISH_TOL for r in c.roots))
    rel = c.relative_gap
    ok = res_ok and roots_ok and rel <= 0.35
    return Result(15, "a-point census", ok,
                  f"count {c.count}, c T = {c.predicted_count:.1f} (c = {c.predicted_density:.4f} "
                  f"+- {c.density_stderr:.4f}), relative gap {rel:.3f} (tol 0.35); max winding "
                  f"residual {c.max_residual:.1e}; polished roots {len(c.roots)} certified={roots_ok}",
                  {"count": c.count, "predicted": c.predicted_count, "rel": rel})


def c16_determinism() -> Result:
    from .cli import determinism_check

    bad = determinism_check()
    return Result(16, "determinism", not bad,
                  "all payloads byte-identical" if not bad else f"differing: {bad}", {})


CRITERIA = {1: c01_moment_identity, 2: c02_zero_mean, 3: c03_gradients, 4: c04_round_trip,
            5: c05_saddle_vs_mc, 6: c06_constants, 7: c07_fourier_decay, 8: c08_smoothing,
            9: c09_brute_force, 10: c10_surrogate, 11: c11_charfun, 12: c12_second_moment,
            13: c13_discrepancy, 14: c14_littlewood, 15: c15_census, 16: c16_determinism}


def run_one(k: int) -> Result:
    t0 = time.perf_counter()
    r = CRITERIA[k]()
    r.seconds = time.perf_counter() - t0
    return r


def run(selection=None, echo=print) -> list:
    out = []
    for k in (selection or sorted(CRITERIA)):
        r = run_one(int(k))
        if echo:
            echo(r.line())
        out.append(r)
    return out
