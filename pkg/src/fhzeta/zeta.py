"""Evaluation of the order-a zeta function over the whole plane.

For Re(s) > 1 the defining integral is used directly:

    zeta_a(s) = Gamma(a+1)/Gamma(s+a-1) * int_0^inf x^(s+a-2) e^-x / (a gamma(a,x)) dx.

For Re(s) <= 1 the integral is continued strip by strip. On the strip
1-n < Re(s) the continued kernel is

    F_n(s) = sum_{k=0}^{n-1} c_k Gamma(s-1+k)
             + int_0^inf [1/(a gamma(a,x)) - x^-a sum_{k<n} c_k x^k] x^(s+a-2) e^-x dx,

with the c_k from specfun.subtraction_coeffs; subtracting the first n terms
of the small-x expansion makes the integrand O(x^(Re s + n - 2)) at the
origin, and the subtracted mass is restored in closed form by the gamma
terms. zeta_a(s) = Gamma(a+1)/Gamma(s+a-1) * F_n(s). At a = 1 everything
collapses to the classical zeta function, for which an independent
alternating-series oracle is provided as a cross-check.

Quadrature splits at x = 1: on (0, 1] the integrand is evaluated in the
log variable through its cancellation-free series form, on [1, X] directly,
with X pushed out until an explicit tail bound drops below tolerance.
Panel widths are capped so the phase of x^{it} advances at most ~pi per
panel where the integrand carries mass; the embedded error estimate then
splits whatever that cap still leaves unresolved.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import kernels, specfun
from .errors import (
    InsufficientStrip,
    OutOfRegion,
    PoleAtOne,
    PoleOfZeta,
    PoleProximity,
    PreconditionError,
)
from .quadrature import adaptive_complex, geometric_edges

#: proximity tolerance for poles {1, 0, -1, ...} and trivial zeros {2-a-n}
PROXIMITY_TOL = 1e-9


@dataclass(frozen=True)
class ZetaParams:
    """Order a plus the quadrature knobs shared by every evaluation."""

    a: float
    quad_abs_tol: float = 1e-14
    quad_rel_tol: float = 1e-13
    max_subdivisions: int = 4096

    def __post_init__(self):
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise PreconditionError(f"order a must be positive, got {self.a}")
        if self.quad_abs_tol <= 0.0 or self.quad_rel_tol <= 0.0:
            raise PreconditionError("quadrature tolerances must be positive")
        if self.max_subdivisions < 16:
            raise PreconditionError("max_subdivisions must be >= 16")


@dataclass(frozen=True)
class ComplexPoint:
    """Evaluation point s = sigma + i t."""

    sigma: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and math.isfinite(self.t)):
            raise PreconditionError("evaluation point must be finite")

    @classmethod
    def from_complex(cls, s: complex) -> "ComplexPoint":
        return cls(sigma=s.real, t=s.imag)

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)


PointLike = Union[complex, float, ComplexPoint]


def _as_complex(s: PointLike) -> complex:
    if isinstance(s, ComplexPoint):
        return s.s
    return complex(s)


@dataclass(frozen=True)
class VerticalStrip:
    """Strip V_n = {1-n < Re(s) < 2-n}, split into half-strips by sign of t."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError("strip index must be a positive integer")

    @property
    def sigma_low(self) -> float:
        return 1.0 - self.n

    @property
    def sigma_high(self) -> float:
        return 2.0 - self.n

    def contains(self, s: PointLike) -> bool:
        z = _as_complex(s)
        return self.sigma_low < z.real < self.sigma_high

    def contains_upper(self, s: PointLike) -> bool:
        z = _as_complex(s)
        return self.contains(z) and z.imag > 0.0


@dataclass(frozen=True)
class EvalResult:
    value: complex
    est_error: float
    representation: str
    near_pole: bool
    near_trivial_zero: bool


def pole_distance(s: PointLike) -> float:
    """Distance from s to the pole lattice {1, 0, -1, -2, ...}."""
    z = _as_complex(s)
    k = min(1, round(z.real))
    return abs(z - k)


def trivial_zero_distance(a: float, s: PointLike) -> float:
    """Distance from s to the trivial-zero lattice {1-a, -a, -(1+a), ...}."""
    z = _as_complex(s) + (a - 1.0)
    m = min(0, round(z.real))
    return abs(z - m)


def trivial_zero(a: float, n: int) -> float:
    """The n-th trivial zero 2 - a - n (n >= 1)."""
    if n < 1:
        raise PreconditionError("trivial zero index must be >= 1")
    return 2.0 - a - n


def choose_strip(s: PointLike) -> int:
    """Smallest continuation depth n with Re(s) - (1 - n) >= 0.5.

    Valid for Re(s) <= 1 (the direct representation is used to the right).
    The 0.5 margin keeps the small-x exponent of the subtracted integrand
    at least -0.5, which the quadrature handles comfortably.
    """
    sigma = _as_complex(s).real
    if sigma > 1.0:
        raise PreconditionError(
            f"choose_strip applies to Re(s) <= 1, got sigma={sigma}"
        )
    return max(1, math.ceil(1.5 - sigma))


def integrand_direct(params: ZetaParams, s: PointLike, x: float) -> complex:
    """Defining integrand x^(s+a-2) e^-x / (a gamma(a, x)) at one x > 0."""
    if not (x > 0.0):
        raise PreconditionError(f"integrand requires x > 0, got {x}")
    z = _as_complex(s)
    a = params.a
    g = kernels.lower_gamma_scalar(a, x)
    return cmath.exp((z + a - 2.0) * math.log(x) - x) / (a * g)


# ----------------------------------------------------------------------
# quadrature assembly
# ----------------------------------------------------------------------

_GROWTH = 1.12
_YMIN_CAP = -2.0e5


def _largex_cutoff(a: float, sigma: float, c_abs: np.ndarray, tol: float) -> float:
    """Smallest power-of-two-ish X with a proven tail bound below tol.

    For x >= X each integrand term is of the form const * x^p e^-x; since
    x^p e^-x decays faster than e^-x/2 once x > 2p, doubling X until the
    explicit bound 2 e^-X sum_j const_j X^{p_j} < tol is sound.
    """
    powers = [sigma + a - 2.0] + [sigma + k - 2.0 for k in range(len(c_abs))]
    pmax = max(powers)
    x_cut = max(20.0, 3.0 * (pmax + 1.0))
    for _ in range(8):
        inv_gamma_term = 1.0 / (a * kernels.lower_gamma_scalar(a, x_cut))
        bound = inv_gamma_term * x_cut ** (sigma + a - 2.0)
        for k in range(len(c_abs)):
            bound += c_abs[k] * x_cut ** (sigma + k - 2.0)
        bound *= 2.0 * math.exp(-x_cut)
        if bound < tol:
            return x_cut
        x_cut *= 2.0
    return x_cut


def _continued_integral(params: ZetaParams, s: complex, n: int,
                        abs_tol: float | None = None):
    """The subtracted integral of F_n (the whole integral for n = 0).

    Returns (value, error_estimate). Requires Re(s) > 1 - n.
    """
    a = params.a
    sigma, t = s.real, s.imag
    g = specfun.q_series_array(a)
    pt = specfun.p_tail_array(a, n)
    c = specfun.c_series_array(a, n)
    tol = params.quad_abs_tol if abs_tol is None else abs_tol
    max_panels = params.max_subdivisions

    # (0, 1] in y = ln x; integrand decays like e^{beta y} toward -inf.
    # |P(x)/Q(x)| <= sum|p_j| / min Q on (0,1], and Q = a*gamma(a,x)*x^-a
    # decreases from Q(0) = 1, so the minimum sits at x = 1.
    beta = sigma + n - 1.0
    q_floor = a * kernels.lower_gamma_scalar(a, 1.0)
    scale = max(float(np.abs(pt).sum()) / q_floor, 1e-12)
    y_min = math.log(tol * beta / (20.0 * scale)) / beta
    y_min = max(min(-2.0, y_min), _YMIN_CAP)
    small_tail = scale * math.exp(beta * y_min) / beta
    first_w = min(1.2, math.pi / abs(t)) if t != 0.0 else 1.2
    y_edges = geometric_edges(0.0, y_min, first_w, _GROWTH)[::-1].copy()

    def small_batch(y):
        return kernels.smallx_values(y, a, sigma, t, n, g, pt)

    val_s, err_s, _ = adaptive_complex(small_batch, y_edges, 0.45 * tol, max_panels)

    # [1, X] in x; geometric panels capped by the x^{it} phase advance
    c_abs = np.abs(c)
    x_cut = _largex_cutoff(a, sigma, c_abs, tol / 10.0)
    ratio = min(2.0, math.exp(math.pi / abs(t))) if t != 0.0 else 2.0
    ratio = max(ratio, 1.02)
    x_edges = geometric_edges(1.0, x_cut, ratio - 1.0, ratio)

    def large_batch(x):
        return kernels.largex_values(x, a, sigma, t, c)

    val_l, err_l, _ = adaptive_complex(large_batch, x_edges, 0.45 * tol, max_panels)

    return val_s + val_l, err_s + err_l + small_tail + tol / 10.0


def _check_continuation_poles(s: complex, n: int) -> None:
    lo = 2 - n
    k = round(s.real)
    if lo <= k <= 1 and abs(s - k) <= PROXIMITY_TOL:
        raise PoleProximity(
            f"s={s} is within {PROXIMITY_TOL} of the gamma-term pole at {k}"
        )


def eval_continued_with_error(params: ZetaParams, s: PointLike, n: int,
                              abs_tol: float | None = None):
    """F_n(s) plus its quadrature error estimate."""
    z = _as_complex(s)
    if n < 1:
        raise PreconditionError("continuation depth n must be >= 1")
    if not (z.real > 1.0 - n):
        raise InsufficientStrip(
            f"F_{n} requires Re(s) > {1 - n}, got sigma={z.real}"
        )
    _check_continuation_poles(z, n)
    coeffs = specfun.subtraction_coeffs(params.a, n)
    gamma_sum = 0.0 + 0.0j
    for k in range(n):
        gamma_sum += coeffs[k] * specfun.gamma_c(z - 1.0 + k)
    integral, qerr = _continued_integral(params, z, n, abs_tol)
    err = qerr + 1e-15 * abs(gamma_sum)
    return gamma_sum + integral, err


def eval_continued(params: ZetaParams, s: PointLike, n: int) -> complex:
    """Continued kernel F_n(s) on Re(s) > 1 - n.

    For n = 1 this is Gamma(s-1) + int_0^inf (1/(a gamma(a,x)) - x^-a)
    x^(s+a-2) e^-x dx; general n subtracts the first n small-x terms and
    adds back sum_{k<n} c_k Gamma(s-1+k).
    """
    value, _ = eval_continued_with_error(params, s, n)
    return value


def _prefactor(params: ZetaParams, s: complex) -> complex:
    """Gamma(a+1)/Gamma(s+a-1), via the entire reciprocal gamma.

    Evaluated before F so its genuine zero on the trivial-zero lattice
    drives the product to 0 instead of producing 0 * inf noise.
    """
    return math.gamma(params.a + 1.0) * specfun.reciprocal_gamma(s + params.a - 1.0)


def _f_tolerance(params: ZetaParams, prefactor: complex) -> float:
    """Quadrature target for F, tightened when the prefactor amplifies.

    At large |t| the assembled value is prefactor * F with |prefactor|
    growing like e^(pi|t|/2); splitting the tolerance keeps the assembled
    error near quad_abs_tol until the roundoff floor takes over (the
    adaptive driver stops on its own there and reports what it achieved).
    """
    return params.quad_abs_tol / max(1.0, abs(prefactor))


def _assemble(params: ZetaParams, s: complex, prefactor: complex,
              f_value: complex, f_err: float, representation: str) -> EvalResult:
    value = prefactor * f_value
    est_error = abs(prefactor) * f_err + 5e-15 * abs(value)
    if s.imag == 0.0:
        value = complex(value.real, 0.0)
    return EvalResult(
        value=value,
        est_error=est_error,
        representation=representation,
        near_pole=pole_distance(s) <= PROXIMITY_TOL,
        near_trivial_zero=trivial_zero_distance(params.a, s) <= PROXIMITY_TOL,
    )


def eval_direct(params: ZetaParams, s: PointLike) -> EvalResult:
    """Direct-integral evaluation, valid for Re(s) > 1."""
    z = _as_complex(s)
    if not (z.real > 1.0):
        raise OutOfRegion(f"direct representation requires Re(s) > 1, got {z.real}")
    pref = _prefactor(params, z)
    integral, qerr = _continued_integral(params, z, 0, _f_tolerance(params, pref))
    return _assemble(params, z, pref, integral, qerr, "direct")


def zeta_a(params: ZetaParams, s: PointLike) -> EvalResult:
    """Evaluate zeta_a(s) anywhere off the pole lattice {1, 0, -1, ...}.

    Dispatch keeps the same 0.5 edge margin everywhere: the direct integral
    (whose small-x exponent degenerates as Re(s) -> 1+) is used only for
    Re(s) >= 1.5, the first strip covers 1 < Re(s) < 1.5, and choose_strip
    handles the rest.
    """
    z = _as_complex(s)
    if pole_distance(z) <= PROXIMITY_TOL:
        raise PoleOfZeta(f"s={z} is within {PROXIMITY_TOL} of a pole")
    if z.real >= 1.5:
        return eval_direct(params, z)
    n = 1 if z.real > 1.0 else choose_strip(z)
    pref = _prefactor(params, z)
    f_value, f_err = eval_continued_with_error(
        params, z, n, _f_tolerance(params, pref)
    )
    return _assemble(params, z, pref, f_value, f_err, f"strip({n})")


def zeta_a_value(params: ZetaParams, s: PointLike) -> complex:
    """Shorthand for zeta_a(...).value."""
    return zeta_a(params, s).value


# ----------------------------------------------------------------------
# independent classical-zeta oracle (a = 1 cross-checks only)
# ----------------------------------------------------------------------


def _accel_terms(t: float) -> int:
    """Smallest acceleration depth with truncation below ~1e-12.

    The Chebyshev acceleration error is ~3 (1+2|t|) e^(pi|t|/2) (3+sqrt8)^-n;
    more terms would only feed the roundoff floor, which grows with n when
    Re(s) < 0 (the summed terms grow like k^|sigma| against coefficients of
    size (3+sqrt8)^n).
    """
    need = (27.64 + 0.5 * math.pi * abs(t) + math.log(3.0 + 6.0 * abs(t))) / 1.7627
    return max(24, math.ceil(need))


def riemann_zeta_oracle(s: PointLike) -> complex:
    """Classical zeta(s) by the accelerated alternating series.

    zeta(s) = (1 - 2^(1-s))^-1 sum_k (-1)^k (k+1)^(-s), with Chebyshev-type
    acceleration of the alternating sum, accumulated in extended precision
    (np.clongdouble). Deliberately shares nothing with the integral
    evaluator. Measured accuracy for |Im s| <= 30: better than 1e-10 for
    Re s in [-3.5, 5], degrading to ~3e-9 by Re s = -5 where the alternating
    terms grow like k^5 and machine precision caps what any acceleration of
    this series can deliver.
    """
    z = _as_complex(s)
    if abs(z - 1.0) <= PROXIMITY_TOL:
        raise PoleAtOne("classical zeta has its pole at s = 1")
    n = _accel_terms(z.imag)
    zl = np.clongdouble(z)
    d = np.longdouble(3.0 + math.sqrt(8.0)) ** n
    d = 0.5 * (d + 1.0 / d)
    b = np.longdouble(-1.0)
    c = -d
    acc = np.clongdouble(0.0)
    for k in range(n):
        c = b - c
        acc = acc + c * np.exp(-zl * np.log(np.longdouble(k + 1)))
        b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0))
    eta = acc / d
    return complex(eta / (1.0 - np.exp((1.0 - zl) * np.log(np.longdouble(2.0)))))
