"""Self-contained special-function layer.

Three kernels everything else builds on:

* complex log-gamma with a continuous (principal-branch) phase,
* the real lower incomplete gamma function gamma(a, x),
* the reciprocal-series coefficients c_k of x^a / (a*gamma(a, x)),
  which drive the strip-by-strip analytic continuation.

The c_k come from inverting the entire series

    a * gamma(a, x) * x^-a = sum_m g_m x^m,   g_m = a (-1)^m / (m! (a+m)),

via the convolution recurrence c_0 = 1, c_k = -sum_{j=1..k} g_j c_{k-j}.
In particular c_1 = a/(1+a), and for a = 1 the c_k are the series
coefficients of x/(1 - e^-x).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import (
    NegativeArgument,
    NonpositiveOrder,
    PoleAtNonpositiveInteger,
    PreconditionError,
)

POLE_TOL = 1e-12

# Lanczos rational approximation, g = 607/128, 15 terms. Relative accuracy
# of the assembled log-gamma is ~1e-14 for Re(z) >= 0.5.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class GammaValue:
    """log Gamma(z) split into ln|Gamma(z)| and a continuous phase (radians)."""

    log_modulus: float
    phase: float

    @property
    def as_complex(self) -> complex:
        return complex(self.log_modulus, self.phase)


@dataclass(frozen=True)
class IncompleteGammaValue:
    """gamma(a, x) with a crude error estimate."""

    value: float
    est_error: float


@dataclass(frozen=True)
class SubtractionCoeffs:
    """Leading series coefficients c_0..c_{m-1} of x^a / (a*gamma(a, x))."""

    a: float
    coeffs: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> float:
        return self.coeffs[k]


def _nearest_nonpositive_integer(z: complex) -> int | None:
    k = round(z.real)
    if k > 0:
        return None
    return int(k)


def _check_gamma_pole(z: complex) -> None:
    k = _nearest_nonpositive_integer(z)
    if k is not None and abs(z - k) <= POLE_TOL:
        raise PoleAtNonpositiveInteger(
            f"log_gamma pole: z={z} is within {POLE_TOL} of {k}"
        )


def _lanczos_loggamma(z: complex) -> complex:
    """Principal log-gamma for Re(z) >= 0.5."""
    s = _LANCZOS_C[0]
    for k in range(1, 15):
        s += _LANCZOS_C[k] / (z - 1.0 + k)
    t = z + (_LANCZOS_G - 0.5)
    return _HALF_LOG_TWO_PI + (z - 0.5) * cmath.log(t) - t + cmath.log(s)


def loggamma_c(z: complex) -> complex:
    """Principal-branch complex log-gamma.

    Continuous on the plane cut along the negative real axis; satisfies
    loggamma_c(conj z) = conj(loggamma_c(z)) away from the cut. For
    Re(z) < 0.5 the argument is shifted up by the recurrence
    loggamma(z) = loggamma(z+1) - log(z), which preserves the principal
    branch on either half-plane.
    """
    z = complex(z)
    _check_gamma_pole(z)
    if z.real >= 0.5:
        return _lanczos_loggamma(z)
    m = int(math.ceil(0.5 - z.real))
    w = _lanczos_loggamma(z + m)
    for j in range(m):
        w -= cmath.log(z + j)
    return w


def log_gamma(z: complex) -> GammaValue:
    """log Gamma(z) as (ln modulus, continuous phase).

    Raises PoleAtNonpositiveInteger within 1e-12 of z in {0, -1, -2, ...}.
    """
    w = loggamma_c(z)
    return GammaValue(log_modulus=w.real, phase=w.imag)


def gamma_c(z: complex) -> complex:
    """Gamma(z) for complex z, via the principal log."""
    return cmath.exp(loggamma_c(z))


def sinpi_c(z: complex) -> complex:
    """sin(pi z) with exact integer argument reduction.

    Reducing Re(z) modulo 1 around the nearest integer keeps full accuracy
    close to the zeros at the integers, where the naive sin(pi*z) loses
    digits to pi's rounding.
    """
    z = complex(z)
    k = math.floor(z.real + 0.5)
    r = z.real - k
    sr, cr = math.sin(math.pi * r), math.cos(math.pi * r)
    ch, sh = math.cosh(math.pi * z.imag), math.sinh(math.pi * z.imag)
    val = complex(sr * ch, cr * sh)
    if k % 2:
        val = -val
    return val


def reciprocal_gamma(z: complex) -> complex:
    """1/Gamma(z), entire; exact zeros at the nonpositive integers.

    Near the poles of Gamma the log route is useless, so for Re(z) < 0.5
    (and moderate |Im z|, keeping Gamma(1-z) in range) the reflection form
    sin(pi z) Gamma(1-z) / pi is used instead; it vanishes cleanly at
    z = 0, -1, -2, ...
    """
    z = complex(z)
    if z.real < 0.5 and abs(z.imag) <= 60.0 and (1.0 - z).real <= 170.0:
        return sinpi_c(z) * cmath.exp(_lanczos_loggamma(1.0 - z)) / math.pi
    return cmath.exp(-loggamma_c(z))


def lower_incomplete_gamma(a: float, x: float) -> IncompleteGammaValue:
    """gamma(a, x) for a > 0, x >= 0, relative error <= 1e-12.

    Series below the x = a + 1 crossover, upper-tail continued fraction
    above it (both under the active kernel backend).
    """
    if not (a > 0.0) or not math.isfinite(a):
        raise NonpositiveOrder(f"order must be positive, got a={a}")
    if not (x >= 0.0):
        raise NegativeArgument(f"argument must be nonnegative, got x={x}")
    if x == 0.0:
        return IncompleteGammaValue(0.0, 0.0)
    if x > 1e6:
        g = math.gamma(a)
        return IncompleteGammaValue(g, 4.0e-16 * g)
    v = kernels.lower_gamma_scalar(a, x)
    return IncompleteGammaValue(v, 4.0e-16 * abs(v))


@lru_cache(maxsize=1024)
def _g_series(a: float, count: int) -> tuple[float, ...]:
    """g_m = a(-1)^m / (m!(a+m)) for m = 0..count-1, built by ratio recursion."""
    g = [1.0]
    for m in range(1, count):
        g.append(-g[-1] * (a + m - 1.0) / (m * (a + m)))
    return tuple(g)


@lru_cache(maxsize=1024)
def _c_series(a: float, count: int) -> tuple[float, ...]:
    g = _g_series(a, count)
    c = [1.0]
    for k in range(1, count):
        acc = 0.0
        for j in range(1, k + 1):
            acc += g[j] * c[k - j]
        c.append(-acc)
    return tuple(c)


def subtraction_coeffs(a: float, count: int) -> SubtractionCoeffs:
    """First `count` coefficients of x^a / (a*gamma(a, x)) = sum_k c_k x^k.

    c_0 = 1 and c_1 = a/(1+a); convolving with the g_m series gives the
    delta sequence (1, 0, 0, ...).
    """
    if not (a > 0.0) or not math.isfinite(a):
        raise NonpositiveOrder(f"order must be positive, got a={a}")
    if count < 1:
        raise PreconditionError(f"count must be >= 1, got {count}")
    return SubtractionCoeffs(a=a, coeffs=_c_series(a, count))


@lru_cache(maxsize=1024)
def subtracted_tail_coeffs(a: float, n: int, extra: int = 30) -> tuple[float, ...]:
    """Tail coefficients p_{n+j} of 1 - Q(x)*C(x), j = 0..extra-1.

    Q is the g_m series, C the degree-(n-1) subtraction polynomial. The
    coefficients below x^n vanish identically, so the subtracted integrand
    on (0,1] can be evaluated as x^n * (sum_j p_{n+j} x^j) / Q(x) with no
    cancellation. For n = 0 this is just (1,): the unsubtracted 1/Q.
    """
    if n == 0:
        return (1.0,)
    g = _g_series(a, n + extra)
    c = _c_series(a, n)
    p = []
    for m in range(n, n + extra):
        acc = 0.0
        for k in range(n):
            acc += c[k] * g[m - k]
        p.append(-acc)
    return tuple(p)


def q_series_array(a: float, count: int = 30) -> np.ndarray:
    return np.array(_g_series(a, count), dtype=np.float64)


def c_series_array(a: float, n: int) -> np.ndarray:
    if n == 0:
        return np.empty(0, dtype=np.float64)
    return np.array(_c_series(a, n), dtype=np.float64)


def p_tail_array(a: float, n: int) -> np.ndarray:
    return np.array(subtracted_tail_coeffs(a, n), dtype=np.float64)
