"""Acceptance suite: the checks a finished build must pass.

Each criterion is a function returning a CriterionResult with the measured
quantity, the pinned tolerance, and pass/fail. The CLI `selftest` command
and tests/test_acceptance.py both run these. A fault-injection hook
(`fault="c1"`) deliberately perturbs the second series coefficient inside
the coefficient criterion so the convolution-identity check can be seen to
catch it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import specfun, zeros
from .zeta import (
    ZetaParams,
    eval_continued_with_error,
    eval_direct,
    riemann_zeta_oracle,
    trivial_zero,
    zeta_a,
    _f_tolerance,
    _prefactor,
)
from .quadrature import gl20_real


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    measured: str
    tolerance: str
    runtime_s: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} criterion {self.index:2d} [{self.name}] "
                f"measured: {self.measured}; tolerance: {self.tolerance} "
                f"({self.runtime_s:.1f}s)")


def _timed(fn: Callable[[], tuple[bool, str, str]], index: int,
           name: str) -> CriterionResult:
    start = time.perf_counter()
    passed, measured, tolerance = fn()
    return CriterionResult(index, name, passed, measured, tolerance,
                           time.perf_counter() - start)


# --- 1: reduction to the classical zeta at a = 1 ------------------------

_REDUCTION_POINTS = (
    complex(-3.0, 0.7), complex(-2.6, -1.4), complex(-2.2, 3.8),
    complex(-1.8, -5.6), complex(-1.5, 0.0), complex(-1.2, 7.3),
    complex(-0.8, -9.1), complex(-0.5, 0.4), complex(-0.2, 2.1),
    complex(0.1, -6.7), complex(0.4, 8.9), complex(0.5, 0.0),
    complex(0.8, -3.3), complex(1.1, 5.0), complex(1.4, -10.0),
    complex(1.7, 1.6), complex(2.0, -7.8), complex(2.3, 9.4),
    complex(2.6, -0.9), complex(3.0, 4.5),
)


def criterion_reduction() -> CriterionResult:
    def run():
        start = time.perf_counter()
        params = ZetaParams(a=1.0)
        worst = 0.0
        for s in _REDUCTION_POINTS:
            v = zeta_a(params, s).value
            ref = riemann_zeta_oracle(s)
            worst = max(worst, abs(v - ref) / (1.0 + abs(ref)))
        elapsed = time.perf_counter() - start
        ok = worst <= 1e-6 and elapsed <= 120.0
        return ok, f"max deviation {worst:.3e}, {elapsed:.1f}s", \
            "1e-06 over 20 points, runtime <= 120 s"
    return _timed(run, 1, "classical-zeta reduction")


# --- 2: trivial zero lattice --------------------------------------------

def criterion_trivial_zeros() -> CriterionResult:
    def run():
        worst_loc = 0.0
        worst_res = 0.0
        for a in (0.25, 0.5, 0.75, 1.5, 2.5):
            params = ZetaParams(a=a)
            for n in range(1, 6):
                z0 = trivial_zero(a, n)
                found = zeros.find_real_zero(params, (z0 - 0.2, z0 + 0.2))
                worst_loc = max(worst_loc, abs(found - z0))
                worst_res = max(
                    worst_res, abs(zeta_a(params, complex(found, 0.0)).value)
                )
        ok = worst_loc <= 1e-8 and worst_res <= 1e-8
        return ok, f"max |zero - (2-a-n)| = {worst_loc:.3e}, " \
                   f"max residual = {worst_res:.3e}", "both <= 1e-08"
    return _timed(run, 2, "trivial zeros at 2-a-n")


# --- 3: pole structure ---------------------------------------------------

def criterion_poles() -> CriterionResult:
    def run():
        bad = []
        for a in (0.5, 1.5):
            params = ZetaParams(a=a)
            for p in (1.0, 0.0, -1.0):
                rep = zeros.winding_number(
                    params, zeros.Rectangle(p - 0.3, p + 0.3, -0.3, 0.3)
                )
                if rep.winding != -1 or rep.inferred_zero_count != 0:
                    bad.append((a, p, rep.winding))
        worst_res = 0.0
        for a in (0.5, 1.5):
            params = ZetaParams(a=a)
            v2 = 1e-2 * zeta_a(params, complex(1.01, 0.0)).value.real
            v3 = 1e-3 * zeta_a(params, complex(1.001, 0.0)).value.real
            extrapolated = (10.0 * v3 - v2) / 9.0
            worst_res = max(worst_res, abs(extrapolated - a))
        ok = not bad and worst_res <= 1e-4
        return ok, f"windings {'ok' if not bad else bad}, " \
                   f"residue deviation {worst_res:.3e}", \
            "winding -1 at s=1,0,-1; extrapolated residue within 1e-04"
    return _timed(run, 3, "pole structure and residue")


# --- 4: zero-free left strips (winding census) ---------------------------

def criterion_strip_census() -> CriterionResult:
    def run():
        start = time.perf_counter()
        bad = []
        for a in (0.5, 1.5):
            params = ZetaParams(a=a)
            for n in range(1, 5):
                lo, hi = 1.0 - n + 0.1, 2.0 - n - 0.1
                for (t0, t1) in ((0.5, 10.0), (-10.0, -0.5)):
                    rep = zeros.winding_number(
                        params, zeros.Rectangle(lo, hi, t0, t1)
                    )
                    if rep.winding != 0 or rep.inferred_zero_count != 0:
                        bad.append((a, n, t0, rep.winding))
        elapsed = time.perf_counter() - start
        ok = not bad and elapsed <= 600.0
        return ok, f"nonzero censuses: {bad if bad else 'none'}, " \
                   f"{elapsed:.1f}s", "all windings 0, runtime <= 600 s"
    return _timed(run, 4, "left-strip zero-free census")


# --- 5: Im F positivity grids (theorem mechanism) -------------------------

def criterion_imag_positivity() -> CriterionResult:
    def run():
        grids = (
            (0.5, 2, zeros.GridSpec(-0.9, -0.1, 0.1, 0.1, 10.0, 0.1)),
            (1.5, 1, zeros.GridSpec(0.1, 0.4, 0.1, 0.1, 10.0, 0.1)),
        )
        failures = 0
        points = 0
        min_val = math.inf
        min_at = None
        for a, n, grid in grids:
            rep = zeros.verify_imag_positivity(ZetaParams(a=a), n, grid)
            failures += len(rep.failures)
            points += rep.points
            if rep.min_value < min_val:
                min_val = rep.min_value
                min_at = (a, n, rep.min_location)
        ok = failures == 0
        return ok, f"{failures} non-positive of {points} points, " \
                   f"min Im F = {min_val:.3e} at {min_at}", \
            "zero failures allowed"
    return _timed(run, 5, "Im F positivity grids")


# --- 6: zero-free right strip ---------------------------------------------

def criterion_right_strip() -> CriterionResult:
    def run():
        params = ZetaParams(a=0.3)
        found = zeros.scan_region(
            params, zeros.Rectangle(1.0, 1.65, 0.1, 10.0), 0.05
        )
        ok = len(found) == 0
        return ok, f"{len(found)} candidates", "empty candidate list"
    return _timed(run, 6, "right-strip scan (a=0.3)")


# --- 7: oscillatory positivity harness -------------------------------------

def random_positivity_specs(count: int = 50,
                            seed: int = 20240811) -> list[tuple[zeros.PositivitySpec, str]]:
    """Deterministic family of valid harness specs, half linear, half log.

    Linear specs need the integrand integrable at 0 (sigma > 1, possible
    only for a < 1); log specs start at the phase anchor x~ >= 1 and take
    t >= 3 so that e^(-x~) stays far above underflow.
    """
    rng = np.random.default_rng(seed)
    specs = []
    for i in range(count):
        if i % 2 == 0:
            a = rng.uniform(0.05, 0.8)
            sigma = rng.uniform(1.05, 2.0 - a - 0.1)
            t = rng.uniform(0.5, 20.0)
            end = math.inf if rng.random() < 0.5 else rng.uniform(20.0, 60.0)
            specs.append((zeros.PositivitySpec(a=a, sigma=sigma, t=t,
                                               domain_end=end), "linear"))
        else:
            a = rng.uniform(1.05, 1.95) if rng.random() < 0.5 else rng.uniform(0.05, 0.95)
            sigma = rng.uniform(-3.0, 2.0 - a - 0.1)
            t = rng.uniform(3.0, 20.0)
            x0 = zeros.PositivitySpec.log_anchor(t, 1)
            end = math.inf if rng.random() < 0.5 else x0 + rng.uniform(10.0, 50.0)
            specs.append((zeros.PositivitySpec(a=a, sigma=sigma, t=t,
                                               domain_end=end, x_tilde=x0,
                                               k=1), "log"))
    return specs


def criterion_positivity_harness() -> CriterionResult:
    def run():
        nonpositive = []
        for spec, variant in random_positivity_specs():
            res = zeros.oscillatory_positivity(spec, variant)
            if not res.positive:
                nonpositive.append((spec.a, spec.sigma, spec.t, variant,
                                    res.integral))
        half = gl20_real(np.sin, 0.0, math.pi)
        full = half + gl20_real(np.sin, math.pi, 2.0 * math.pi)
        panel_dev = max(abs(half - 2.0), abs(full))
        ok = not nonpositive and panel_dev <= 1e-12
        return ok, f"{len(nonpositive)} non-positive of 50 specs, " \
                   f"panel checks deviation {panel_dev:.2e}", \
            "all positive; sin-panel checks within 1e-12"
    return _timed(run, 7, "oscillatory positivity harness")


# --- 8: reflection principle ------------------------------------------------

def criterion_reflection() -> CriterionResult:
    def run():
        rng = np.random.default_rng(42)
        worst = 0.0
        for a in (0.5, 1.3):
            params = ZetaParams(a=a)
            for _ in range(25):
                s = complex(rng.uniform(-3.0, 3.0), rng.uniform(0.3, 10.0))
                v = zeta_a(params, s).value
                w = zeta_a(params, s.conjugate()).value
                worst = max(worst, abs(w - v.conjugate()))
        ok = worst <= 1e-10
        return ok, f"max conjugate deviation {worst:.3e}", "<= 1e-10"
    return _timed(run, 8, "reflection principle")


# --- 9: representation consistency ------------------------------------------

def criterion_representation_consistency() -> CriterionResult:
    def run():
        worst_direct = 0.0
        for a in (0.5, 1.0, 1.7):
            params = ZetaParams(a=a)
            for sigma in (1.1, 1.3, 1.5, 1.7, 1.9):
                for t in (0.0, 1.0, 5.0, 10.0, -3.0):
                    s = complex(sigma, t)
                    direct = eval_direct(params, s).value
                    pref = _prefactor(params, s)
                    f1, _ = eval_continued_with_error(
                        params, s, 1, _f_tolerance(params, pref))
                    dev = abs(direct - pref * f1) / (1.0 + abs(direct))
                    worst_direct = max(worst_direct, dev)
        worst_strip = 0.0
        for a in (0.5, 1.5):
            params = ZetaParams(a=a)
            for n in (1, 2, 3):
                for offset in (0.55, 0.8):
                    for t in (0.5, 2.0, 7.0):
                        s = complex(1.0 - n + offset, t)
                        pref = _prefactor(params, s)
                        tol = _f_tolerance(params, pref)
                        fa, _ = eval_continued_with_error(params, s, n, tol)
                        fb, _ = eval_continued_with_error(params, s, n + 1, tol)
                        dev = abs(pref * (fa - fb)) / (1.0 + abs(pref * fa))
                        worst_strip = max(worst_strip, dev)
        ok = worst_direct <= 1e-8 and worst_strip <= 1e-8
        return ok, f"direct-vs-strip1 {worst_direct:.3e}, " \
                   f"strip-n-vs-n+1 {worst_strip:.3e}", "both <= 1e-08"
    return _timed(run, 9, "representation consistency")


# --- 10: series coefficients --------------------------------------------------

def longdivision_coeffs(a: Fraction, count: int) -> list[Fraction]:
    """Brute-force power-series long division of 1 by sum_m g_m x^m.

    Exact rational arithmetic; written independently of the production
    convolution recurrence.
    """
    g = []
    num = Fraction(1)
    for m in range(count):
        g.append(a * num / (Fraction(math.factorial(m)) * (a + m)))
        num = -num
    remainder = [Fraction(0)] * count
    remainder[0] = Fraction(1)
    quotient = []
    for k in range(count):
        q = remainder[k] / g[0]
        quotient.append(q)
        for j in range(count - k):
            remainder[k + j] -= q * g[j]
    return quotient


_COEFF_ORDERS = (Fraction(3, 10), Fraction(1, 2), Fraction(1),
                 Fraction(17, 10), Fraction(3))


def criterion_coefficients(fault: str | None = None) -> CriterionResult:
    def run():
        worst_div = 0.0
        c1_exact = True
        worst_conv = 0.0
        for a_frac in _COEFF_ORDERS:
            a = float(a_frac)
            got = specfun.subtraction_coeffs(a, 13)
            want = longdivision_coeffs(a_frac, 13)
            for k in range(13):
                dev = abs(got[k] - float(want[k])) / max(1.0, abs(float(want[k])))
                worst_div = max(worst_div, dev)
            if got[1] != a / (a + 1.0):
                c1_exact = False
            coeffs = list(got.coeffs)
            if fault == "c1":
                coeffs[1] *= 1.0 + 1e-6
            g = [1.0]
            for m in range(1, 13):
                g.append(-g[-1] * (a + m - 1.0) / (m * (a + m)))
            for k in range(13):
                conv = sum(g[j] * coeffs[k - j] for j in range(k + 1))
                target = 1.0 if k == 0 else 0.0
                worst_conv = max(worst_conv, abs(conv - target))
        ok = worst_div <= 1e-12 and c1_exact and worst_conv <= 1e-12
        return ok, f"long-division deviation {worst_div:.3e}, " \
                   f"c1 exact: {c1_exact}, convolution deviation {worst_conv:.3e}", \
            "division/convolution <= 1e-12; c1 == a/(a+1) exactly"
    return _timed(run, 10, "subtraction coefficients")


ALL_CRITERIA: Sequence[Callable[[], CriterionResult]] = (
    criterion_reduction,
    criterion_trivial_zeros,
    criterion_poles,
    criterion_strip_census,
    criterion_imag_positivity,
    criterion_right_strip,
    criterion_positivity_harness,
    criterion_reflection,
    criterion_representation_consistency,
    criterion_coefficients,
)


def run_all(indices: Sequence[int] | None = None,
            fault: str | None = None,
            echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    results = []
    for i, fn in enumerate(ALL_CRITERIA, start=1):
        if indices is not None and i not in indices:
            continue
        res = fn(fault) if fn is criterion_coefficients else fn()
        results.append(res)
        if echo is not None:
            echo(res.line())
    return results
