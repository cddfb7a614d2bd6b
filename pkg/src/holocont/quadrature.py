"""Globally adaptive Gauss-Kronrod (7/15) quadrature for complex integrands.

The integrand is vectorised: ``f(t)`` receives a 1-D array of nodes and
returns either an array of the same length (scalar integral) or an array of
shape ``(len(t), k)`` (``k`` integrals sharing one mesh).  Every component
carries its own tolerance; an interval is bisected while it holds more than
its share of the error of any unconverged component.

Error estimates follow QUADPACK's ``qk15`` heuristics, including the
roundoff floor ``50*eps*int|f|`` that stops refinement of integrals whose
value is smaller than the cancellation noise.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .exceptions import AccuracyError, EvaluationError

# Kronrod abscissae on [0, 1] (odd positions are the Gauss 7-point nodes).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point rule on [-1, 1]
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]
GAUSS_WEIGHTS[7] = _WG[3]

_EPS = np.finfo(float).eps


class IntegralResult(NamedTuple):
    value: complex | np.ndarray
    error: float | np.ndarray
    converged: bool
    intervals: int


def _rule(f, a, b):
    """Apply G7/K15 on every interval [a_i, b_i].

    Returns ``(kron, err, resabs, scalar)`` with per-component columns.
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    t = (mid[:, None] + half[:, None] * NODES[None, :]).ravel()
    raw = np.asarray(f(t), dtype=complex)
    scalar = raw.ndim == 1
    vals = raw.reshape(a.size, 15, -1)
    if not np.all(np.isfinite(vals)):
        raise EvaluationError("integrand produced non-finite values")
    h = half[:, None]
    wk = KRONROD_WEIGHTS[None, :, None]
    kron = (wk * vals).sum(axis=1) * h
    gauss = (GAUSS_WEIGHTS[None, :, None] * vals).sum(axis=1) * h
    resabs = (wk * np.abs(vals)).sum(axis=1) * np.abs(h)
    mean = kron / (2 * h)
    resasc = (wk * np.abs(vals - mean[:, None, :])).sum(axis=1) * np.abs(h)
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc > 0) & (err > 0), scaled, err)
    err = np.maximum(err, 50.0 * _EPS * resabs)
    return kron, err, resabs, scalar


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    *,
    rtol: float = 1e-10,
    atol: float | np.ndarray = 0.0,
    limit: int = 10_000,
    initial: int = 1,
    raise_on_failure: bool = False,
) -> IntegralResult:
    """Integrate ``f`` over ``[a, b]`` to ``max(atol, rtol*|I|)`` per component.

    ``initial`` splits the interval into that many equal pieces before the
    first pass, which helps oscillatory integrands.  ``limit`` caps the
    number of subintervals.
    """
    edges = np.linspace(a, b, max(1, int(initial)) + 1)
    lo, hi = edges[:-1], edges[1:]
    kron, err, resabs, scalar = _rule(f, lo, hi)
    atol = np.broadcast_to(np.asarray(atol, dtype=float), (kron.shape[1],))
    converged = False
    while True:
        total = kron.sum(axis=0)
        total_err = err.sum(axis=0)
        tol = np.maximum(atol, rtol * np.abs(total))
        # the floor only kicks in for integrals dominated by cancellation
        tol = np.maximum(tol, 50.0 * _EPS * resabs.sum(axis=0))
        bad = total_err > tol
        if not bad.any():
            converged = True
            break
        if lo.size >= limit:
            break
        share = tol / lo.size
        split = np.any((err > share[None, :]) & bad[None, :], axis=1)
        safe_tol = np.where(tol > 0, tol, 1.0)
        ratio = np.max(np.where(bad[None, :], err / safe_tol[None, :], 0.0), axis=1)
        split[np.argmax(ratio)] = True
        split &= np.abs(hi - lo) > 64 * _EPS * np.maximum(np.abs(lo), np.abs(hi))
        if not split.any():
            break
        keep = ~split
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], mid])
        new_hi = np.concatenate([mid, hi[split]])
        k2, e2, r2, _ = _rule(f, new_lo, new_hi)
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        kron = np.concatenate([kron[keep], k2])
        err = np.concatenate([err[keep], e2])
        resabs = np.concatenate([resabs[keep], r2])
    value = kron.sum(axis=0)
    error = err.sum(axis=0)
    if scalar:
        value, error = complex(value[0]), float(error[0])
    if raise_on_failure and not converged:
        raise AccuracyError(
            f"quadrature did not converge within {limit} subintervals", value, error
        )
    return IntegralResult(value, error, converged, int(lo.size))
