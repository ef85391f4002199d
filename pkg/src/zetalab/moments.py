"""Log-moments of the random Euler product, their k-derivatives, and Phi^rand.

Everything factors over primes.  With ``w = p^{-sigma}`` and a uniform phase
``theta``, put ``Xp = -log|1 - w e^{i theta}|`` and
``Ap = -Im Log(1 - w e^{i theta})``.  Then

    M(z)     = log E|zeta(sigma, X)|^z      = sum_p log E exp(z Xp)
    M_arg(z) = log E exp(z arg zeta(sigma,X)) = sum_p log E exp(z Ap)

Each factor is a periodic integral over ``theta``.  Below ``P_quad`` it is
computed by trapezoid quadrature.  Above it the closed form

    E[(1 - X w)^{-alpha} (1 - conj(X) w)^{-beta}] = 2F1(alpha, beta; 1; w^2)

is expanded as ``log 2F1 = sum_m a_m w^{2m}`` and summed against prime zeta
tails.  For large real k that series diverges, and the tail is instead
integrated against the prime density using log I0 plus its first
correction.  The exponent convention is ``w^{-z} = exp(-z log w)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, QuadratureError, RangeError
from .primes import log_integral, prime_zeta_tail, table_for
from .special import _B_LOG, QuadratureSpec, integrate, log_I0_derivs

DEFAULT_P_QUAD = 10**6
QUAD_TOL = 1e-13
MAX_NODES = 2**20
# explicit constant for the Phi^rand truncation bound C (|u| + |v|) / Y^{sigma - 1/2}
TRUNCATION_C = 10.0
# derivatives of M are accepted up to this k (the saddle at tau = 100 needs ~1e8)
K_MAX = 1e9

MODULUS = "modulus"
ARGUMENT = "argument"

_SERIES_RADIUS = 1.2     # |z| P^{-sigma} allowed for the hypergeometric tail
_INTEGRAL_SWITCH = 0.5   # real k P^{-sigma} beyond which the integral tail is used
_CHUNK = 1 << 22


def _check_sigma(sigma: float, op: str) -> float:
    sigma = float(sigma)
    if not 0.5 < sigma <= 1.0:
        raise ConfigError(f"sigma must lie in (1/2, 1], got {sigma}", "moments", op)
    return sigma


def _as_scalar(z):
    z = complex(z)
    return z.real if z.imag == 0.0 else z


# ---------------------------------------------------------------- per-prime quadrature

def _phase_vars(c, s, w):
    X = -0.5 * np.log1p(w * (w - 2.0 * c))
    A = np.arctan2(w * s, 1.0 - w * c)
    return X, A


def _layout(w, a, b):
    """Per-prime window centre, half-width and log-scale shift.

    When the real part of the exponent is large the integrand is a narrow
    peak; integrating only +-10 standard deviations around it keeps the
    node count bounded, and factoring out ``exp(shift)`` avoids overflow.
    """
    ra, rb = float(np.real(a)), float(np.real(b))
    n = len(w)
    theta0 = np.zeros(n)
    delta = np.full(n, np.pi)
    shift = np.zeros(n)
    if ra != 0.0 and rb == 0.0:
        shift = ra * (-np.log1p(-w) if ra > 0 else -np.log1p(w))
        sd = (1.0 + w) / np.sqrt(abs(ra) * w)
        centre = 0.0 if ra > 0 else np.pi
        narrow = 10.0 * sd < 0.5 * np.pi
        theta0[narrow] = centre
        delta[narrow] = 10.0 * sd[narrow]
    elif rb != 0.0 and ra == 0.0:
        shift = abs(rb) * np.arcsin(w)
        sd = 1.0 / np.sqrt(abs(rb) * w)
        centre = np.sign(rb) * np.arccos(w)
        narrow = 10.0 * sd < 0.5 * np.pi
        theta0[narrow] = centre[narrow]
        delta[narrow] = 10.0 * sd[narrow]
    else:
        shift = abs(ra) * -np.log1p(-w) + abs(rb) * np.arcsin(w)
    scaled = shift > 1.0
    shift = np.where(scaled, shift, 0.0)
    return theta0, delta, shift, scaled


def _quad_pass(w, theta0, delta, shift, scaled, a, b, var, order, n, dtype):
    """One midpoint-rule pass with n nodes for each prime given (all same n)."""
    m = (2.0 * (np.arange(n) + 0.5) / n) - 1.0
    th = theta0[:, None] + delta[:, None] * m[None, :]
    X, A = _phase_vars(np.cos(th), np.sin(th), w[:, None])
    full = delta == np.pi
    # full periods get weights exactly 1/n so that q0 - 1 carries no rounding
    wt = np.where(full, 1.0 / n, delta / (n * np.pi))[:, None]
    if b == 0 and isinstance(a, float):
        # a Xp - shift = a (Xp - Xp(peak)) + (a Xp(peak) - shift), the first
        # part formed without cancellation so large k keeps full precision
        wc = w[:, None]
        if a > 0:
            D = -0.5 * np.log1p(4.0 * wc * np.sin(0.5 * th) ** 2 / (1.0 - wc) ** 2)
            xref = -np.log1p(-w)
        else:
            D = -0.5 * np.log1p(-4.0 * wc * np.cos(0.5 * th) ** 2 / (1.0 + wc) ** 2)
            xref = -np.log1p(w)
        em = np.expm1(a * D + (a * xref - shift)[:, None])
    else:
        E = a * X + b * A if a != 0 and b != 0 else (a * X if b == 0 else b * A)
        em = np.expm1(E - shift[:, None])
    q0m1 = np.sum(wt * em, axis=1) + np.where(full, 0.0, wt[:, 0] * n - 1.0)
    q0 = 1.0 + q0m1
    logphi = np.where(scaled, shift + np.log(np.where(scaled, q0, 1.0)),
                      np.log1p(np.where(scaled, 0.0, q0m1)))
    out = [logphi.astype(dtype)]
    if order:
        V = X if var == MODULUS else A
        g = 1.0 + em
        Vj = np.ones_like(V)
        for _ in range(order):
            Vj = Vj * V
            out.append(np.sum(wt * Vj * g, axis=1) / q0)
    return np.array(out)


def _prime_factors(w, a, b, var=MODULUS, order=0, tol=QUAD_TOL, max_nodes=MAX_NODES):
    """Per-prime ``log phi`` and ratios ``E[V^j e^{E}] / E[e^{E}]``, j = 1..order.

    ``E = a Xp + b Ap`` and ``V`` is ``Xp`` or ``Ap`` according to ``var``.
    Node counts double per prime until successive estimates agree to ``tol``
    (relative for large ratios).  Returns ``(values[order+1, nprimes], err,
    nodes)``.
    """
    w = np.asarray(w, dtype=float)
    cplx = isinstance(a, complex) or isinstance(b, complex)
    dtype = complex if cplx else float
    a = complex(a) if cplx else float(a)
    b = complex(b) if cplx else float(b)
    theta0, delta, shift, scaled = _layout(w, a, b)
    res = np.zeros((order + 1, len(w)), dtype=dtype)
    err = np.zeros(len(w))
    nodes = np.zeros(len(w), dtype=np.int64)
    n = 8
    active = np.arange(len(w))
    prev = None
    while len(active):
        if 2 * n > max_nodes:
            raise QuadratureError(
                f"per-prime quadrature did not converge with {max_nodes} nodes "
                f"(w = {w[active[0]]:.3g}, z = {a if b == 0 else b})",
                best=None, err=None, module="moments", operation="prime_factor")
        step = max(1, _CHUNK // (2 * n))
        cur_c, fine_c = [], []
        for lo in range(0, len(active), step):
            ix = active[lo: lo + step]
            args = (w[ix], theta0[ix], delta[ix], shift[ix], scaled[ix], a, b, var, order)
            cur_c.append(prev[:, lo: lo + step] if prev is not None
                         else _quad_pass(*args, n, dtype))
            fine_c.append(_quad_pass(*args, 2 * n, dtype))
        cur = np.concatenate(cur_c, axis=1)
        fine = np.concatenate(fine_c, axis=1)
        diff = np.abs(fine - cur) / np.maximum(1.0, np.abs(fine))
        e = diff.max(axis=0)
        ok = e <= tol
        done = active[ok]
        res[:, done] = fine[:, ok]
        err[done] = e[ok]
        nodes[done] = 2 * n
        active = active[~ok]
        prev = fine[:, ~ok]
        n *= 2
    return res, err, nodes


@dataclass(frozen=True)
class PrimeFactor:
    """``phi_p^{(j)}(z) = E[(-L_p)^j exp(-z L_p)] = exp(log_scale) * scaled[j]``."""

    p: int
    sigma: float
    z: complex
    weights: tuple
    log_scale: complex
    scaled: tuple
    quad_err: float
    nodes: int

    @property
    def values(self) -> tuple:
        return tuple(np.exp(self.log_scale) * s for s in self.scaled)


def prime_factor(p: int, sigma: float, z, weights=(0, 1, 2, 3)) -> PrimeFactor:
    """One Euler factor ``E|1 - X p^{-sigma}|^{-z}`` and its weighted versions.

    Weight j multiplies the integrand by ``(-L_p)^j`` (the j-th z-derivative).
    """
    sigma = _check_sigma(sigma, "prime_factor")
    z = _as_scalar(z)
    if abs(z) > 1e4:
        raise RangeError(f"|z| must be <= 1e4, got {abs(z)}", "moments", "prime_factor")
    weights = tuple(int(j) for j in weights)
    if any(j < 0 or j > 3 for j in weights):
        raise ConfigError("weights must lie in {0,1,2,3}", "moments", "prime_factor")
    w = np.array([float(p) ** -sigma])
    vals, err, nodes = _prime_factors(w, z, 0.0, MODULUS, max(weights), tol=QUAD_TOL)
    logphi = vals[0, 0]
    scaled = tuple(1.0 if j == 0 else vals[j, 0] for j in weights)
    return PrimeFactor(int(p), sigma, complex(z), weights, logphi, scaled,
                       float(err[0]), int(nodes[0]))


# ---------------------------------------------------------------- hypergeometric tail

def _jmul(x, y):
    """Product of truncated Taylor jets (coefficients of eps^0..eps^3)."""
    out = np.zeros(4, dtype=complex)
    for i in range(4):
        out[i:] += x[i] * y[: 4 - i]
    return out


def _log_hyp_coeffs(alpha, beta):
    """Generator of jets ``a_m`` with ``log 2F1(alpha, beta; 1; x) = sum_m a_m x^m``.

    ``alpha`` and ``beta`` are jets in z, so each ``a_m`` carries its first
    three z-derivatives as Taylor coefficients.
    """
    one = np.zeros(4, dtype=complex)
    one[0] = 1.0
    c = [one]
    a = [None]
    m = 0
    shift = np.zeros(4, dtype=complex)
    while True:
        m += 1
        shift[0] = m - 1
        t = _jmul(alpha + shift, beta + shift) / float(m * m)
        c.append(_jmul(c[-1], t))
        acc = c[m].copy()
        for k in range(1, m):
            acc -= (k / m) * _jmul(a[k], c[m - k])
        a.append(acc)
        yield m, acc


def _params(kind, z, a=None, b=None):
    """(alpha, beta) jets for the factor exp(a Xp + b Ap)."""
    if kind == MODULUS:
        al = np.array([z / 2, 0.5, 0, 0], dtype=complex)
        be = al.copy()
    elif kind == ARGUMENT:
        al = np.array([-0.5j * z, -0.5j, 0, 0], dtype=complex)
        be = np.array([0.5j * z, 0.5j, 0, 0], dtype=complex)
    else:
        al = np.array([a / 2 - 0.5j * b, 0, 0, 0], dtype=complex)
        be = np.array([a / 2 + 0.5j * b, 0, 0, 0], dtype=complex)
    return al, be


def _series_sum(alpha, beta, weights_fn, max_terms=400):
    """sum_m a_m * weights_fn(m) with a truncation estimate."""
    total = np.zeros(4, dtype=complex)
    bound = 0.0
    small = 0
    for m, am in _log_hyp_coeffs(alpha, beta):
        wm, werr = weights_fn(m)
        term = am * wm
        total += term
        bound += float(np.abs(am).max()) * werr
        mag = float(np.abs(term).max())
        small = small + 1 if mag <= 1e-18 * max(1.0, float(np.abs(total).max())) else 0
        if small >= 3:
            return total, bound + mag
        if m >= max_terms:
            raise QuadratureError("hypergeometric tail series did not converge",
                                  module="moments", operation="M")
    return total, bound


def _series_tail(sigma, P, alpha, beta):
    def weights(m):
        s = 2.0 * m * sigma
        v = prime_zeta_tail(s, P)
        return v, (4e-16 * 2.0 ** -s if s <= 2.8 else 1e-3 * v)
    return _series_sum(alpha, beta, weights)


# ---------------------------------------------------------------- large-k integral tail

def _h_derivs(k, x, sigma, order):
    """k-derivatives of log E|1 - X x^{-sigma}|^{-k} ~ f(u) + k w^2/2 - w f'(u).

    ``u = k w``; the second and third terms are the first correction to the
    Bessel approximation ``E|1 - X w|^{-k} ~ I0(k w)``.
    """
    w = x ** -sigma
    f = log_I0_derivs(k * w, 4)
    h = [f[0] + 0.5 * k * w * w - w * f[1],
         w * f[1] + 0.5 * w * w - w * w * f[2],
         w * w * f[2] - w**3 * f[3],
         w**3 * f[3] - w**4 * f[4]]
    return np.array(h[: order + 1])


def _integral_tail(sigma, k, P, order):
    """sum_{p > P} log phi_p(k) for large real k.

    Primes in (P, X1] with ``k X1^{-sigma} = 1/4`` use the corrected Bessel
    form integrated against ``dx / log x`` (minus the pi(P) - li(P) boundary
    term of the Stieltjes integral); primes beyond X1 use the hypergeometric
    series against the same density.  The neglected ``int (pi - li) dh`` is
    of the size of the reported bound.
    """
    from scipy.integrate import quad_vec
    from scipy.special import exp1

    X1 = (4.0 * k) ** (1.0 / sigma)
    y0, y1 = math.log(P), math.log(X1)

    def integrand(y):
        return _h_derivs(k, math.exp(y), sigma, order) * (math.exp(y) / y)

    body, body_err = quad_vec(integrand, y0, y1, epsabs=0.0, epsrel=1e-12)

    al, be = _params(MODULUS, k)

    def weights(m):
        s = 2.0 * m * sigma
        v = float(exp1((s - 1.0) * y1))
        return v, 1e-15 * v
    far, far_err = _series_sum(al, be, weights)
    far = np.real(far * np.array([1, 1, 2, 6]))[: order + 1]

    table = table_for(P)
    gap = table.count(P) - log_integral(P)
    edge = _h_derivs(k, float(P), sigma, order)
    total = body + far - gap * edge
    bound = abs(gap * edge[0]) + float(body_err) + far_err
    return total, bound


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class MomentReport:
    """``M = log E exp(z V)`` for V = log|zeta(sigma,X)| or arg zeta(sigma,X).

    ``derivs`` holds the z-derivatives ``(M', M'', M''')`` up to the requested
    order.  ``tail_bound`` covers primes above the quadrature cutoff and
    ``quad_err`` sums the per-prime quadrature error estimates.
    """

    sigma: float
    z: complex
    M: complex
    per_prime_terms_used: int
    tail_bound: float
    quad_err: float
    kind: str = MODULUS
    tail_mode: str = "series"
    derivs: tuple = field(default=())


@dataclass(frozen=True)
class CumulantReport:
    sigma: float
    k: float
    M1: float
    M2: float
    M3: float
    err: float
    M0: float = float("nan")


def log_moment(sigma: float, z, kind: str = MODULUS, order: int = 0,
               P_quad: int = DEFAULT_P_QUAD, tol: float = QUAD_TOL) -> MomentReport:
    """Generic log-moment with up to three z-derivatives (see module docstring)."""
    sigma = _check_sigma(sigma, "M")
    if kind not in (MODULUS, ARGUMENT):
        raise ConfigError(f"unknown kind {kind!r}", "moments", "M")
    z = _as_scalar(z)
    real = not isinstance(z, complex)
    if abs(z) > K_MAX or (not real and abs(z) > 1e4):
        raise RangeError(f"|z| = {abs(z):.3g} outside the supported range", "moments", "M")
    if not 0 <= order <= 3:
        raise ConfigError("order must be 0..3", "moments", "M")
    P = int(P_quad)
    table = table_for(P)
    w = table.upto(P).astype(float) ** -sigma

    a, b = (z, 0.0) if kind == MODULUS else (0.0, z)
    vals, err, _ = _prime_factors(w, a, b, kind, order, tol=tol)
    out = [np.sum(vals[0])]
    if order >= 1:
        r1 = vals[1]
        out.append(np.sum(r1))
    if order >= 2:
        r2 = vals[2]
        out.append(np.sum(r2 - r1 * r1))
    if order >= 3:
        out.append(np.sum(vals[3] - 3.0 * vals[2] * r1 + 2.0 * r1**3))
    out = np.array(out)

    reach = abs(z) * P ** -sigma
    if reach <= _INTEGRAL_SWITCH or (reach <= _SERIES_RADIUS and not (real and kind == MODULUS)):
        al, be = _params(kind, z)
        tail, bound = _series_tail(sigma, P, al, be)
        tail = tail[: order + 1] * np.array([1, 1, 2, 6])[: order + 1]
        mode = "series"
    elif real and kind == MODULUS and z > 0:
        tail, bound = _integral_tail(sigma, z, P, order)
        mode = "integral"
    else:
        raise RangeError(f"|z| P^-sigma = {reach:.3g} too large for the tail series; "
                         "raise P_quad", "moments", "M")
    total = out + tail
    if real:
        total = np.real(total).astype(float)
    vals_out = [v.item() if hasattr(v, "item") else v for v in total]
    return MomentReport(sigma=sigma, z=complex(z), M=vals_out[0],
                        per_prime_terms_used=len(w), tail_bound=float(bound),
                        quad_err=float(np.sum(err)), kind=kind, tail_mode=mode,
                        derivs=tuple(vals_out[1:]))


def M(sigma: float, z, P_quad: int = DEFAULT_P_QUAD) -> MomentReport:
    """``M(z) = log E|zeta(sigma, X)|^z``; real for real z."""
    return log_moment(sigma, z, MODULUS, 0, P_quad)


def M_arg(sigma: float, z, P_quad: int = DEFAULT_P_QUAD) -> MomentReport:
    """``log E exp(z arg zeta(sigma, X))``."""
    return log_moment(sigma, z, ARGUMENT, 0, P_quad)


def cumulants(sigma: float, k: float, kind: str = MODULUS,
              P_quad: int = DEFAULT_P_QUAD) -> CumulantReport:
    """M'(k), M''(k), M'''(k) of the (log-modulus or argument) log-moment at real k."""
    k = float(k)
    if kind == MODULUS and k < 0:
        raise ConfigError("k must be >= 0", "moments", "cumulants")
    r = log_moment(sigma, k, kind, 3, P_quad)
    m1, m2, m3 = r.derivs
    return CumulantReport(sigma=r.sigma, k=k, M1=m1, M2=m2, M3=m3,
                          err=r.tail_bound + r.quad_err, M0=r.M)


# ---------------------------------------------------------------- characteristic function

@dataclass(frozen=True)
class CharFunValue:
    """Phi^rand(u, v) with its error budget."""

    sigma: float
    u: float
    v: float
    Y: float | None
    value: complex
    truncation_bound: float
    quad_err: float

    def __complex__(self) -> complex:
        return complex(self.value)


def phi_rand(sigma: float, u: float, v: float, Y: float | None = None,
             C: float = TRUNCATION_C, P_quad: int = DEFAULT_P_QUAD) -> CharFunValue:
    """``E exp(i u log|zeta(sigma,X)| + i v arg zeta(sigma,X))``.

    With ``Y`` given the product runs over ``p <= Y`` and the reported
    truncation bound is ``C (|u| + |v|) / Y^{sigma - 1/2}``.  With ``Y=None``
    the full product is returned (quadrature to ``P_quad`` plus the
    hypergeometric tail).
    """
    sigma = _check_sigma(sigma, "phi_rand")
    u, v = float(u), float(v)
    if abs(u) > 1e3 or abs(v) > 1e3:
        raise RangeError("|u|, |v| must be <= 1e3", "moments", "phi_rand")
    if u == 0.0 and v == 0.0:
        return CharFunValue(sigma, u, v, Y, 1.0 + 0j, 0.0, 0.0)
    cutoff = P_quad if Y is None else Y
    table = table_for(cutoff)
    w = table.upto(cutoff).astype(float) ** -sigma
    vals, err, _ = _prime_factors(w, 1j * u, 1j * v, MODULUS, 0)
    logv = complex(np.sum(vals[0]))
    if Y is None:
        al, be = _params(None, 0, 1j * u, 1j * v)
        tail, bound = _series_tail(sigma, P_quad, al, be)
        logv += complex(tail[0])
        trunc = bound
    else:
        trunc = C * (abs(u) + abs(v)) / float(Y) ** (sigma - 0.5)
    return CharFunValue(sigma, u, v, Y, complex(np.exp(logv)), float(trunc),
                        float(np.sum(err)))


# ---------------------------------------------------------------- asymptotic constants

@dataclass(frozen=True)
class AsymptoticConstants:
    """g0, g1, g2 and an optional regression constant A_fit.

    ``g2_residual`` is ``|g2 - (sigma / ((1 - sigma) g1))^{sigma / (1 - sigma)}|``.
    """

    sigma: float
    g0: float
    g1: float
    g2: float
    g0_err: float
    g1_err: float
    g2_residual: float
    A_fit: float | None = None
    A_fit_taus: tuple = ()


_G_LOW = 1e-3     # Taylor series of log I0 below, asymptotic expansion above _G_HIGH
_G_HIGH = 1e8


def _g_integrals(sigma: float):
    """g0 and g1 with their error estimates.

    The middle range is integrated in x = log u.  Both ends are analytic: the
    upper tail decays only like u^{1 - 1/sigma}, far too slowly for quadrature
    when sigma is near 1.
    """
    q = 1.0 / sigma
    lo, hi = _G_LOW, _G_HIGH
    spec = QuadratureSpec("adaptive-interval", abs_tol=1e-14)
    xa, xb = math.log(lo), math.log(hi)
    pts = list(np.arange(math.ceil(xa), xb, 2.0))
    m0, e0 = integrate(lambda x: log_I0_derivs(math.exp(x), 0)[0] * math.exp(-q * x),
                       spec, (xa, xb), points=pts)
    m1, e1 = integrate(lambda x: log_I0_derivs(math.exp(x), 1)[1] * math.exp((1.0 - q) * x),
                       spec, (xa, xb), points=pts)
    # f = sum_k b_k 4^-k u^2k near 0
    k = np.arange(1, 7)
    c = _B_LOG[1:7] * 4.0 ** -k * lo ** (2 * k - q) / (2 * k - q)
    low0, low1 = float(np.sum(c)), float(np.sum(2 * k * c))
    # f = u - log(2 pi u)/2 + 1/(8u) + 1/(16u^2) + O(u^-3) at infinity
    Hq = hi ** -q
    high0 = (hi * Hq / (q - 1.0) - 0.5 * math.log(2.0 * math.pi) * Hq / q
             - 0.5 * Hq * (math.log(hi) / q + 1.0 / q**2)
             + Hq / hi / (8.0 * (q + 1.0)) + Hq / hi**2 / (16.0 * (q + 2.0)))
    high1 = (hi * Hq / (q - 1.0) - Hq / (2.0 * q) - Hq / hi / (8.0 * (q + 1.0))
             - Hq / hi**2 / (8.0 * (q + 2.0)))
    return low0 + m0 + high0, e0, low1 + m1 + high1, e1


def g2_from_g1(sigma: float, g1: float) -> float:
    e = sigma / (1.0 - sigma)
    return (sigma / ((1.0 - sigma) * g1)) ** e


def asymptotic_constants(sigma: float, fit_A: bool = False,
                         taus=tuple(range(10, 101, 10))) -> AsymptoticConstants:
    """g0 = int f(u) u^{-1/sigma-1} du, g1 = int f'(u) u^{-1/sigma} du, f = log I0.

    ``g2`` is the closed form above evaluated with ``g1 = g0 / sigma``; the
    residual against the direct ``g1`` quadrature is reported.  With ``fit_A`` the tail constant is
    fitted by least squares through the origin of ``-log p_saddle(tau)``
    against ``tau^{1/(1-sigma)} (log tau)^{sigma/(1-sigma)}``.
    """
    sigma = float(sigma)
    if not 0.5 < sigma < 1.0:
        raise ConfigError(f"sigma must lie in (1/2, 1), got {sigma}", "moments",
                          "asymptotic_constants")
    g0, e0, g1, e1 = _g_integrals(sigma)
    # integration by parts gives g0 = sigma g1, so g0 yields g2 independently of g1
    g2 = g2_from_g1(sigma, g0 / sigma)
    resid = abs(g2 - g2_from_g1(sigma, g1))
    A = None
    if fit_A:
        from .tails import tail_probability_saddle

        x = np.array([tau ** (1 / (1 - sigma)) * math.log(tau) ** (sigma / (1 - sigma))
                      for tau in taus])
        y = np.array([-math.log(tail_probability_saddle(sigma, tau).p_saddle) for tau in taus])
        A = float(np.dot(x, y) / np.dot(x, x))
    return AsymptoticConstants(sigma, g0, g1, g2, e0, e1, resid, A, tuple(taus) if fit_A else ())
