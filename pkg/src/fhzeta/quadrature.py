"""Adaptive panel quadrature on top of Gauss-Kronrod 7-15.

The driver is deliberately batch-oriented: every refinement round collects
the nodes of all pending panels into one flat array and hands it to a
single kernel call, so the numba/numpy kernels see large arrays instead of
15-point crumbs.

Error control is the usual embedded-rule scheme: per panel the difference
between the 15-point Kronrod value and the 7-point Gauss value is taken as
the local error, the worst panels are bisected until the summed error meets
the absolute target, the panel budget runs out, or the panels are so narrow
that splitting further only chases roundoff.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

# Gauss-Kronrod 7-15 abscissae/weights (positive half, descending).
_XGK_HALF = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
])
_WGK_HALF = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
])
_WGK_CENTER = 0.209482141084727828012999174891714
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# 15 nodes ascending, with matching Kronrod weights and Gauss-7 weights
# (zero where the node is Kronrod-only).
GK_NODES = np.concatenate([-_XGK_HALF, [0.0], _XGK_HALF[::-1]])
GK_WEIGHTS = np.concatenate([_WGK_HALF, [_WGK_CENTER], _WGK_HALF[::-1]])
G7_WEIGHTS = np.zeros(15)
G7_WEIGHTS[1] = G7_WEIGHTS[13] = _WG[0]
G7_WEIGHTS[3] = G7_WEIGHTS[11] = _WG[1]
G7_WEIGHTS[5] = G7_WEIGHTS[9] = _WG[2]
G7_WEIGHTS[7] = _WG[3]

_GL20_NODES, _GL20_WEIGHTS = leggauss(20)

BatchEval = Callable[[np.ndarray], np.ndarray]


def _panel_nodes(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Nodes of all panels, flattened: shape (npanels * 15,)."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return (mid[:, None] + half[:, None] * GK_NODES[None, :]).ravel()


def _panel_sums(vals: np.ndarray, lo: np.ndarray, hi: np.ndarray):
    half = 0.5 * (hi - lo)
    v = vals.reshape(len(lo), 15)
    k15 = (v * GK_WEIGHTS[None, :]).sum(axis=1) * half
    g7 = (v * G7_WEIGHTS[None, :]).sum(axis=1) * half
    return k15, np.abs(k15 - g7)


def adaptive_complex(
    eval_batch: BatchEval,
    edges: Sequence[float],
    abs_tol: float,
    max_panels: int,
):
    """Integrate eval_batch over consecutive [edges[i], edges[i+1]] panels.

    Returns (value, error_estimate, n_panels). The error estimate is the
    final sum of per-panel Kronrod-Gauss differences; it is reported, never
    raised on.
    """
    edges = np.asarray(edges, dtype=np.float64)
    lo = edges[:-1].copy()
    hi = edges[1:].copy()
    vals = eval_batch(_panel_nodes(lo, hi))
    k15, err = _panel_sums(vals, lo, hi)
    # splitting below this width only stirs roundoff
    width_floor = 1e-12 * (1.0 + np.abs(edges).max())
    prev_total = np.inf
    stalled = 0

    while len(lo) < max_panels:
        total_err = err.sum()
        if total_err <= abs_tol:
            break
        # several rounds without progress means the roundoff floor is reached
        stalled = stalled + 1 if total_err > 0.9 * prev_total else 0
        if stalled >= 3:
            break
        prev_total = total_err
        share = max(abs_tol / (2.0 * len(lo)), total_err * 1e-6)
        splittable = (err > share) & ((hi - lo) > width_floor)
        if not splittable.any():
            break
        idx = np.nonzero(splittable)[0]
        room = max_panels - (len(lo) - len(idx))
        if len(idx) * 2 > room:
            order = np.argsort(err[idx])[::-1]
            idx = idx[order[: max(room // 2, 1)]]
        mid = 0.5 * (lo[idx] + hi[idx])
        new_lo = np.concatenate([lo[idx], mid])
        new_hi = np.concatenate([mid, hi[idx]])
        new_vals = eval_batch(_panel_nodes(new_lo, new_hi))
        new_k15, new_err = _panel_sums(new_vals, new_lo, new_hi)
        keep = np.ones(len(lo), dtype=bool)
        keep[idx] = False
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        k15 = np.concatenate([k15[keep], new_k15])
        err = np.concatenate([err[keep], new_err])

    return k15.sum(), float(err.sum()), len(lo)


def gl20_real(f_batch: BatchEval, lo: float, hi: float) -> float:
    """Fixed 20-point Gauss-Legendre rule for one smooth real panel."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    vals = f_batch(mid + half * _GL20_NODES)
    return float(half * (vals * _GL20_WEIGHTS).sum())


def geometric_edges(start: float, stop: float, first_width: float, growth: float):
    """Panel edges from start toward stop with geometrically growing widths.

    Works for stop < start (descending) as well; always includes both ends.
    """
    if first_width <= 0.0:
        raise ValueError("first_width must be positive")
    sign = 1.0 if stop >= start else -1.0
    edges = [start]
    w = first_width
    pos = start
    while (stop - pos) * sign > w:
        pos += sign * w
        edges.append(pos)
        w *= growth
    edges.append(stop)
    return np.array(edges, dtype=np.float64)
