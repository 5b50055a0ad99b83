"""Hot numeric kernels, in two interchangeable builds.

Everything the quadrature inner loops need per node lives here: the real
lower incomplete gamma function gamma(a, x), the integrand of the defining
integral on [1, X], its cancellation-free series form on (0, 1], and the
real oscillatory-positivity integrand. Each function exists as a numba
@njit build (suffix _nb) and a pure-numpy build (suffix _np); the module
exports one set under plain names according to fhzeta._backend.ACTIVE.

gamma(a, x) uses the classic split: Kummer series for x < a + 1, upper
continued fraction (modified Lentz) for x >= a + 1. Relative accuracy is
a few ulp, comfortably under the 1e-12 contract.

The series form of the subtracted integrand on (0, 1] takes precomputed
polynomial coefficients (see zeta.py): with Q(x) = sum_m g_m x^m the entire
series of a*gamma(a,x)*x^-a and p the tail coefficients of 1 - Q*C, the
subtracted integrand equals (sum_j p_{n+j} x^j) / Q(x) * x^(s+n-2) e^-x,
with no cancellation as x -> 0.
"""

from __future__ import annotations

import math

import numpy as np

from ._backend import ACTIVE

_SERIES_EPS = 1.0e-17
_CF_EPS = 1.0e-16
_FPMIN = 1.0e-300
_MAX_ITER = 400


# ----------------------------------------------------------------------
# pure-numpy build
# ----------------------------------------------------------------------

def lower_gamma_np(a: float, x: np.ndarray) -> np.ndarray:
    """gamma(a, x) = int_0^x e^-u u^(a-1) du for a > 0, elementwise over x >= 0."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty(x.shape, dtype=np.float64)
    ga = math.gamma(a)

    small = x < a + 1.0
    xs = x[small]
    if xs.size:
        s = np.full(xs.shape, 1.0 / a)
        term = s.copy()
        ap = a
        for _ in range(_MAX_ITER):
            ap += 1.0
            term = term * xs / ap
            s += term
            if np.all(term <= _SERIES_EPS * s):
                break
        with np.errstate(divide="ignore"):
            val = np.exp(a * np.log(np.where(xs > 0.0, xs, 1.0)) - xs) * s
        out[small] = np.where(xs > 0.0, val, 0.0)

    xl = x[~small]
    if xl.size:
        b = xl + 1.0 - a
        c = np.full(xl.shape, 1.0 / _FPMIN)
        d = 1.0 / b
        h = d.copy()
        for i in range(1, _MAX_ITER):
            an = -i * (i - a)
            b = b + 2.0
            d = an * d + b
            d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
            c = b + an / c
            c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
            d = 1.0 / d
            delta = d * c
            h *= delta
            if np.all(np.abs(delta - 1.0) < _CF_EPS):
                break
        upper = np.exp(-xl + a * np.log(xl)) * h
        out[~small] = ga - upper

    return out


def _polyval_np(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    acc = np.zeros(x.shape, dtype=np.float64)
    for c in coeffs[::-1]:
        acc = acc * x + c
    return acc


def smallx_values_np(y, a, sigma, t, n, g_coeffs, p_tail):
    """Subtracted integrand on x in (0,1], log variable y = ln x <= 0.

    Returns (sum_j p_tail[j] x^j)/Q(x) * exp((sigma+n-1)y - x) * e^{i t y},
    which is the full integrand times dx/dy.
    """
    y = np.asarray(y, dtype=np.float64)
    x = np.exp(y)
    ratio = _polyval_np(p_tail, x) / _polyval_np(g_coeffs, x)
    mag = ratio * np.exp((sigma + n - 1.0) * y - x)
    return mag * (np.cos(t * y) + 1j * np.sin(t * y))


def largex_values_np(x, a, sigma, t, c_coeffs):
    """Subtracted integrand on x >= 1 in the plain variable.

    (1/(a gamma(a,x)) - x^-a sum_k c_k x^k) * x^(sigma+a-2) e^-x e^{i t ln x};
    with empty c_coeffs this is the direct (unsubtracted) integrand.
    """
    x = np.asarray(x, dtype=np.float64)
    lx = np.log(x)
    r = 1.0 / (a * lower_gamma_np(a, x))
    if c_coeffs.size:
        r = r - np.exp(-a * lx) * _polyval_np(c_coeffs, x)
    mag = r * np.exp((sigma + a - 2.0) * lx - x)
    return mag * (np.cos(t * lx) + 1j * np.sin(t * lx))


def oscillatory_h_np(x, a, sigma):
    """Positivity-harness integrand h(x) = x^(sigma+a-2) / (a gamma(a,x) e^x)."""
    x = np.asarray(x, dtype=np.float64)
    return np.exp((sigma + a - 2.0) * np.log(x) - x) / (a * lower_gamma_np(a, x))


NUMPY_IMPL = {
    "lower_gamma": lower_gamma_np,
    "smallx_values": smallx_values_np,
    "largex_values": largex_values_np,
    "oscillatory_h": oscillatory_h_np,
}


# ----------------------------------------------------------------------
# numba build
# ----------------------------------------------------------------------

NUMBA_IMPL = None

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None

if njit is not None:

    @njit(cache=True, nogil=True)
    def _lg_scalar(a, x):
        if x <= 0.0:
            return 0.0
        if x < a + 1.0:
            s = 1.0 / a
            term = s
            ap = a
            for _ in range(_MAX_ITER):
                ap += 1.0
                term = term * x / ap
                s += term
                if term <= _SERIES_EPS * s:
                    break
            return math.exp(a * math.log(x) - x) * s
        b = x + 1.0 - a
        c = 1.0 / _FPMIN
        d = 1.0 / b
        h = d
        for i in range(1, _MAX_ITER):
            an = -i * (i - a)
            b += 2.0
            d = an * d + b
            if abs(d) < _FPMIN:
                d = _FPMIN
            c = b + an / c
            if abs(c) < _FPMIN:
                c = _FPMIN
            d = 1.0 / d
            delta = d * c
            h *= delta
            if abs(delta - 1.0) < _CF_EPS:
                break
        return math.gamma(a) - math.exp(-x + a * math.log(x)) * h

    @njit(cache=True, nogil=True)
    def lower_gamma_nb(a, x):
        out = np.empty(x.shape, dtype=np.float64)
        for i in range(x.size):
            out[i] = _lg_scalar(a, x[i])
        return out

    @njit(cache=True, nogil=True)
    def smallx_values_nb(y, a, sigma, t, n, g_coeffs, p_tail):
        out = np.empty(y.shape, dtype=np.complex128)
        beta = sigma + n - 1.0
        for i in range(y.size):
            yi = y[i]
            x = math.exp(yi)
            q = 0.0
            for j in range(g_coeffs.size - 1, -1, -1):
                q = q * x + g_coeffs[j]
            p = 0.0
            for j in range(p_tail.size - 1, -1, -1):
                p = p * x + p_tail[j]
            mag = (p / q) * math.exp(beta * yi - x)
            ph = t * yi
            out[i] = complex(mag * math.cos(ph), mag * math.sin(ph))
        return out

    @njit(cache=True, nogil=True)
    def largex_values_nb(x, a, sigma, t, c_coeffs):
        out = np.empty(x.shape, dtype=np.complex128)
        for i in range(x.size):
            xi = x[i]
            lx = math.log(xi)
            r = 1.0 / (a * _lg_scalar(a, xi))
            if c_coeffs.size > 0:
                cpoly = 0.0
                for j in range(c_coeffs.size - 1, -1, -1):
                    cpoly = cpoly * xi + c_coeffs[j]
                r -= math.exp(-a * lx) * cpoly
            mag = r * math.exp((sigma + a - 2.0) * lx - xi)
            ph = t * lx
            out[i] = complex(mag * math.cos(ph), mag * math.sin(ph))
        return out

    @njit(cache=True, nogil=True)
    def oscillatory_h_nb(x, a, sigma):
        out = np.empty(x.shape, dtype=np.float64)
        for i in range(x.size):
            xi = x[i]
            out[i] = math.exp((sigma + a - 2.0) * math.log(xi) - xi) / (
                a * _lg_scalar(a, xi)
            )
        return out

    NUMBA_IMPL = {
        "lower_gamma": lower_gamma_nb,
        "smallx_values": smallx_values_nb,
        "largex_values": largex_values_nb,
        "oscillatory_h": oscillatory_h_nb,
    }


IMPLS = {"numpy": NUMPY_IMPL}
if NUMBA_IMPL is not None:
    IMPLS["numba"] = NUMBA_IMPL

_active_impl = IMPLS[ACTIVE]

lower_gamma = _active_impl["lower_gamma"]
smallx_values = _active_impl["smallx_values"]
largex_values = _active_impl["largex_values"]
oscillatory_h = _active_impl["oscillatory_h"]


def lower_gamma_scalar(a: float, x: float) -> float:
    """Scalar gamma(a, x) through the active backend."""
    return float(lower_gamma(a, np.array([x], dtype=np.float64))[0])
