"""Band-limited approximations to signum and rectangle indicators, and the
smoothed Perron kernel.

Selberg's function ``G(u) = 2u/pi + 2(1-u)u cot(pi u)`` on [0, 1] gives

    sgn(x) ~ int_0^L G(u/L) sin(2 pi u x) du/u

with error bounded by a multiple of the Fejer kernel ``(sin(pi L x)/(pi L x))^2``.
Products of two interval approximations give the rectangle approximator
W_{L,R}.  The Perron kernel ``((e^{lambda s} - 1)/(lambda s))^N`` smooths the
step function at y = 1 from above and below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import sici

from .errors import ConfigError, QuadratureError

SGN_ENVELOPE_C = 5.0
SGN_TOL = 1e-13
L_MAX_SGN = 1e4
L_MAX_RECT = 1e3
T_MAX_PERRON = 1e4
_TWO_OVER_PI = 2.0 / math.pi

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class Rectangle:
    """Open rectangle (a1, a2) x (b1, b2) in the complex plane."""

    a1: float
    a2: float
    b1: float
    b2: float

    def __post_init__(self):
        if not (self.a1 < self.a2 and self.b1 < self.b2):
            raise ConfigError("rectangle needs a1 < a2 and b1 < b2", "smoothing",
                              "Rectangle")

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return ((self.a1 < z.real) & (z.real < self.a2)
                & (self.b1 < z.imag) & (z.imag < self.b2))


@dataclass(frozen=True)
class PerronKernelSpec:
    """``((e^{lam s} - 1)/(lam s))^N`` integrated on Re s = kappa (lam kappa < 1/2)."""

    lam: float
    N: int
    kappa: float = 1.0

    def __post_init__(self):
        if not (self.lam > 0 and self.kappa > 0):
            raise ConfigError("lambda and kappa must be positive", "smoothing",
                              "PerronKernelSpec")
        if int(self.N) != self.N or self.N < 1:
            raise ConfigError("N must be a positive integer", "smoothing",
                              "PerronKernelSpec")
        if not self.lam * self.kappa < 0.5:
            raise ConfigError("need lambda * kappa < 1/2", "smoothing",
                              "PerronKernelSpec")


# ---------------------------------------------------------------- Selberg G

def _xcot(x):
    """x cot x, equal to 1 at 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 3.0, safe / np.tan(safe))


def selberg_G(u):
    """G(u) = 2u/pi + 2(1-u)u cot(pi u) on [0, 1].

    The cotangent poles at both ends cancel; the formula is evaluated as
    ``2(1-u) xcot(pi u)/pi`` near 0 and via ``cot(pi u) = -cot(pi (1-u))``
    near 1, so G(0) = 2/pi and G(1) = 0 come out exactly.
    """
    ua = np.asarray(u, dtype=float)
    if np.any((ua < 0) | (ua > 1)) or np.any(np.isnan(ua)):
        raise ConfigError("selberg_G needs 0 <= u <= 1", "smoothing", "selberg_G")
    left = ua <= 0.5
    g = np.where(left,
                 2.0 * ua / math.pi + 2.0 * (1.0 - ua) * _xcot(math.pi * ua) / math.pi,
                 2.0 * ua / math.pi - 2.0 * ua * _xcot(math.pi * (1.0 - ua)) / math.pi)
    g = np.where(ua == 0.5, 1.0 / math.pi, g)
    g = np.where(ua == 1.0, 0.0, g)
    return g[()] if g.ndim == 0 else g


def _g_over_t_regular(t: float) -> float:
    """G(t)/t - 2/(pi t), bounded on [0, 1]."""
    if t < 1e-3:
        # x cot x = 1 - x^2/3 - x^4/45 - 2x^6/945 - ...
        p2 = math.pi * math.pi
        return -_TWO_OVER_PI * (1.0 - t) * (p2 * t / 3.0 + p2 * p2 * t**3 / 45.0
                                            + 2.0 * p2**3 * t**5 / 945.0)
    if t <= 0.5:
        return _TWO_OVER_PI + _TWO_OVER_PI * ((1.0 - t) * float(_xcot(math.pi * t)) - 1.0) / t
    return _TWO_OVER_PI + 2.0 * (1.0 - t) / math.tan(math.pi * t) - _TWO_OVER_PI / t


def fejer(x, L):
    """Fejer envelope (sin(pi L x)/(pi L x))^2."""
    return np.sinc(np.asarray(L, dtype=float) * np.asarray(x, dtype=float)) ** 2


def sgn_approx(x: float, L: float) -> float:
    """int_0^L G(u/L) sin(2 pi u x) du/u.

    With t = u/L the integral is int_0^1 G(t) sin(w t) dt/t, w = 2 pi L x.
    The 1/t singularity of G(t)/t is split off exactly as (2/pi) Si(w); the
    bounded remainder goes to an oscillatory (QAWO) rule.
    """
    x, L = float(x), float(L)
    if not 0 < L <= L_MAX_SGN:
        raise ConfigError(f"L must lie in (0, {L_MAX_SGN:g}]", "smoothing", "sgn_approx")
    w = 2.0 * math.pi * L * abs(x)
    if w == 0.0:
        return 0.0
    val, err = quad(_g_over_t_regular, 0.0, 1.0, weight="sin", wvar=w,
                    epsabs=SGN_TOL, epsrel=0.0, limit=1000)
    if err > 1e-10:
        raise QuadratureError(f"sgn_approx error estimate {err:.2g}", best=val, err=err,
                              module="smoothing", operation="sgn_approx")
    return math.copysign(val + _TWO_OVER_PI * sici(w)[0], x)


# ---------------------------------------------------------------- rectangles

def _f_over_u(u, alpha, beta):
    """f_{alpha,beta}(u)/u, written as i pi (b-a) e^{-i pi (a+b) u} sinc((b-a) u)."""
    d = beta - alpha
    return 1j * math.pi * d * np.exp(-1j * math.pi * (alpha + beta) * u) * np.sinc(d * u)


def _interval_integral(x, alpha, beta, L):
    """int_0^L G(u/L) e^{2 pi i u x} f_{alpha,beta}(u) du/u by composite Gauss-Legendre."""
    cycles = L * (abs(x - 0.5 * (alpha + beta)) + 0.5 * abs(beta - alpha))
    m = int(math.ceil(2.0 * cycles)) + 4
    edges = np.linspace(0.0, 1.0, m + 1)
    half = 0.5 * (edges[1] - edges[0])
    t = (edges[:-1, None] + half * (_GL_X[None, :] + 1.0)).ravel()
    wt = np.tile(half * _GL_W, m)
    u = L * t
    vals = selberg_G(t) * np.exp(2j * math.pi * u * x) * _f_over_u(u, alpha, beta)
    return L * np.sum(wt * vals)


def rect_W(z: complex, rect: Rectangle, L: float) -> float:
    """W_{L,R}(z): the smooth approximation of the indicator of ``rect``.

    The double integral's integrand is a product of a u-factor and a v-factor,
    so tensor-product quadrature reduces to the product of two 1-D sums
    ``Ix``, ``Iy`` and W = Re(Ix conj(Iy) - Ix Iy) / 2.
    """
    if not 0 < L <= L_MAX_RECT:
        raise ConfigError(f"L must lie in (0, {L_MAX_RECT:g}]", "smoothing", "rect_W")
    z = complex(z)
    ix = _interval_integral(z.real, rect.a1, rect.a2, L)
    iy = _interval_integral(z.imag, rect.b1, rect.b2, L)
    return float(0.5 * (ix * iy.conjugate() - ix * iy).real)


def interval_approx(x: float, alpha: float, beta: float, L: float) -> float:
    """(sgn_approx(x - alpha) - sgn_approx(x - beta)) / 2, approximating 1_(alpha,beta)."""
    return 0.5 * (sgn_approx(x - alpha, L) - sgn_approx(x - beta, L))


def rect_W_envelope(z: complex, rect: Rectangle, L: float,
                    C: float = SGN_ENVELOPE_C) -> float:
    """Bound on |rect_W - indicator| built from the four Fejer terms.

    Each interval factor is within e = (C/2)(F(x-a1) + F(x-a2)) of its
    indicator, and |ab - AB| <= e_x (1 + e_y) + e_y for indicators A, B.
    """
    z = complex(z)
    ex = 0.5 * C * (fejer(z.real - rect.a1, L) + fejer(z.real - rect.a2, L))
    ey = 0.5 * C * (fejer(z.imag - rect.b1, L) + fejer(z.imag - rect.b2, L))
    return float(ex * (1.0 + ey) + ey)


def f_alpha_beta(u, alpha: float, beta: float):
    """(e^{-2 pi i alpha u} - e^{-2 pi i beta u}) / 2."""
    u = np.asarray(u, dtype=float)
    return 0.5 * (np.exp(-2j * math.pi * alpha * u) - np.exp(-2j * math.pi * beta * u))


def fejer_identity_check(x: float, L: float):
    """``(lhs, rhs)`` of (sin(pi L x)/(pi L x))^2 = (2/L^2) int_0^L (L - v) cos(2 pi x v) dv."""
    x, L = float(x), float(L)
    if not L > 0:
        raise ConfigError("L must be positive", "smoothing", "fejer_identity_check")
    lhs = float(fejer(x, L))
    w = 2.0 * math.pi * x
    if abs(w) * L < 1.0:
        # barely oscillating: the plain rule is accurate and QAWO would lose digits
        val, _ = quad(lambda v: (L - v) * math.cos(w * v), 0.0, L, epsabs=1e-14 * L * L, epsrel=0.0)
        rhs = 2.0 / L**2 * val
    else:
        val, _ = quad(lambda v: L - v, 0.0, L, weight="cos", wvar=w,
                      epsabs=1e-14 * L * L, epsrel=0.0, limit=1000)
        rhs = 2.0 / L**2 * val
    return lhs, rhs


# ---------------------------------------------------------------- Perron kernel

def _expm1c(z):
    """e^z - 1 for complex arrays without cancellation at small |z|."""
    x, y = z.real, z.imag
    return np.expm1(x) * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2 + 1j * np.exp(x) * np.sin(y)


def perron_kernel(s, spec: PerronKernelSpec):
    """((e^{lam s} - 1)/(lam s))^N; a Taylor series for |lam s| < 1e-4 (value 1 at 0)."""
    sa = np.asarray(s, dtype=complex)
    z = spec.lam * sa
    small = np.abs(z) < 1e-4
    zs = np.where(small, 1.0, z)
    base = np.where(small, 1.0 + z / 2.0 + z * z / 6.0 + z**3 / 24.0, _expm1c(zs) / zs)
    out = base ** int(spec.N)
    return out[()] if out.ndim == 0 else out


def perron_bracket_check(y: float, spec: PerronKernelSpec, t_max: float = T_MAX_PERRON,
                         c: float = 1.0):
    """``(lower, upper)`` contour integrals bracketing chi(y) = [y > 1].

    upper = (1/2 pi i) int_{(c)} y^s K(s) ds/s, lower the same with an extra
    e^{-lam N s}; both truncated at |Im s| = t_max.  Conjugate symmetry folds
    the line onto t >= 0: value = (1/pi) int_0^{t_max} Re[y^s K(s)/s] dt.
    """
    y = float(y)
    if not 0.5 * math.exp(-spec.lam * spec.N) <= y <= 2.0:
        raise ConfigError("y must lie in [e^{-lam N}/2, 2]", "smoothing",
                          "perron_bracket_check")
    if not 0 < t_max <= T_MAX_PERRON:
        raise ConfigError(f"t_max must lie in (0, {T_MAX_PERRON:g}]", "smoothing",
                          "perron_bracket_check")
    ly = math.log(y)
    freq = (abs(ly) + spec.lam * spec.N + spec.lam) / (2.0 * math.pi)
    m = int(math.ceil(4.0 * freq * t_max)) + int(t_max) // 4 + 8
    edges = np.linspace(0.0, t_max, m + 1)
    half = 0.5 * (edges[1] - edges[0])
    t = (edges[:-1, None] + half * (_GL_X[None, :] + 1.0)).ravel()
    wt = np.tile(half * _GL_W, m)
    s = c + 1j * t
    base = np.exp(s * ly) * perron_kernel(s, spec) / s
    upper = float(np.sum(wt * base.real) / math.pi)
    lower = float(np.sum(wt * (base * np.exp(-spec.lam * spec.N * s)).real) / math.pi)
    if not (math.isfinite(upper) and math.isfinite(lower)):
        raise QuadratureError("non-finite Perron integral", module="smoothing",
                              operation="perron_bracket_check")
    return lower, upper


def perron_sup_on_line(spec: PerronKernelSpec, n: int = 1000, t_max: float = 1e3) -> float:
    """max |kernel| over n points of Re s = kappa, |Im s| <= t_max."""
    t = np.linspace(-t_max, t_max, n)
    return float(np.max(np.abs(perron_kernel(spec.kappa + 1j * t, spec))))
