"""Analytic continuation of a power series from its coefficient interpolant.

For a series ``sum a_n z**n`` whose coefficients are ``phi(n)`` from index
``n0`` on, the tail past ``m`` equals the contour integral of the kernel
over the boundary of ``{|arg zeta| <= theta, |zeta| >= m + 1/2}``.  That
integral converges for every ``z`` off ``[0, inf)`` once ``theta`` is large
enough, and so does ``head(m) + tail integral``: it *is* the continuation
onto ``C \\ [1, inf)`` (on ``(0, 1)`` the series itself is summed).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .branches import cut_distance
from .contours import Ray, gamma_m_contour
from .exceptions import AccuracyError, BranchError, ConfigurationError, DomainError, HolocontError, ParameterError
from .expr import FunctionExpr, as_function, parse_expr
from .kernel import _log_z, kernel_values, log_ray_peak, reciprocal_bound_constant, truncation_radius

# beyond this the integrand overflows, and cancellation would leave no digits anyway
_MAX_LOG_INTEGRAND = 600.0
from .validation import check_points


@dataclass(frozen=True)
class SeriesSpec:
    """Head coefficients plus an interpolant valid from index ``n0``.

    ``a_n`` is ``head[n]`` for ``n < len(head)`` and ``interpolant(n)`` beyond.
    On the overlap ``n0 <= n < len(head)`` both must agree to 1e-10.
    """

    head: tuple
    interpolant: object
    n0: int
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(complex(a) for a in self.head))
        object.__setattr__(self, "interpolant", as_function(self.interpolant))
        if self.n0 < 0 or int(self.n0) != self.n0:
            raise ParameterError("n0 must be a non-negative integer")
        if self.n0 > len(self.head):
            raise ParameterError(f"n0={self.n0} exceeds the head length {len(self.head)}")
        overlap = np.arange(self.n0, len(self.head))
        if overlap.size:
            vals = np.asarray(self.interpolant(overlap.astype(complex)))
            dev = np.abs(vals - np.asarray(self.head)[overlap])
            if np.any(dev >= 1e-10):
                n = int(overlap[np.argmax(dev)])
                raise ParameterError(f"{self.label}: interpolant disagrees with a_{n} by {dev.max():.3g}")

    def coefficients(self, n_max: int) -> np.ndarray:
        """``a_0 .. a_{n_max}``."""
        n = np.arange(n_max + 1)
        out = np.empty(n_max + 1, dtype=complex)
        k = min(len(self.head), n_max + 1)
        out[:k] = self.head[:k]
        if n_max + 1 > k:
            out[k:] = self.interpolant(n[k:].astype(complex))
        return out

    def to_dict(self) -> dict:
        phi = self.interpolant
        if not isinstance(phi, FunctionExpr):
            raise ParameterError("only expression interpolants serialise to JSON")
        return {
            "head": [[a.real, a.imag] for a in self.head],
            "phi": phi.text,
            "n0": self.n0,
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SeriesSpec":
        try:
            head = [complex(*a) if isinstance(a, (list, tuple)) else complex(a) for a in d["head"]]
            return cls(head, parse_expr(d["phi"]), int(d["n0"]), d.get("label", ""))
        except KeyError as exc:
            raise ParameterError(f"series JSON is missing the field {exc}") from None


@dataclass(frozen=True)
class CompactParams:
    """``a`` = smallest angular distance to [0, inf), ``b`` = largest ``log|z|``."""

    a: float
    b: float

    @classmethod
    def from_points(cls, zs) -> "CompactParams":
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        if np.any(zs == 0):
            raise BranchError("z = 0 has no argument")
        return cls(float(np.min(cut_distance(zs))), float(np.max(np.log(np.abs(zs)))))


@dataclass(frozen=True)
class ContinuationConfig:
    m: int
    theta: float
    quad_tol: float = 1e-10
    trunc_tol: float = 1e-13
    r_exclusion: float = 0.25
    limit: int = 4000

    def __post_init__(self):
        if not 0 < self.theta < math.pi / 2:
            raise ParameterError(f"theta must lie in (0, pi/2), got {self.theta!r}")
        if self.m < 0:
            raise ParameterError("m must be non-negative")

    def check(self, z):
        """Raise unless ``b*cot(theta) - a < 0`` for ``z``."""
        p = CompactParams.from_points(z)
        if p.b / math.tan(self.theta) - p.a >= 0:
            raise ConfigurationError(
                f"theta={self.theta:.4g} too small for z={complex(z)}: b*cot(theta) - a >= 0"
            )


class ContinuationResult(NamedTuple):
    value: complex
    error: float
    method: str  # "contour", "series" or "constant"
    m: int | None = None
    theta: float | None = None
    truncation: float | None = None


def select_theta(params: CompactParams) -> float:
    """Sector half-angle with ``b*cot(theta) - a = -a/2`` (pi/4 when ``b <= 0``)."""
    if params.a <= 0 and params.b >= 0:
        raise BranchError("a point lies on [1, inf): no admissible sector")
    if params.b <= 0:
        return math.pi / 4
    return math.atan2(2.0 * params.b, params.a)


def default_m(spec: SeriesSpec, z) -> int:
    # outside the disc the head sum grows like |z|**m and the tail cancels it,
    # so keep m as small as the interpolant allows
    return max(spec.n0, 8) if abs(z) <= 1 else spec.n0


def refine_theta(spec: SeriesSpec, z, theta0: float, r_exclusion=0.25, trunc_tol=1e-13, m=0) -> float:
    """Admissible angle with the smallest integrand peak, unless ``theta0`` is within 2 e-folds of it.

    Only matters for interpolants that grow along rays before decaying, where
    the peak sets how many digits cancellation eats.
    """
    consts = reciprocal_bound_constant(r_exclusion)
    p = CompactParams.from_points(z)
    lo = math.atan2(4.0 * p.b, 3.0 * p.a) if p.b > 0 else 0.1
    cands = [theta0] + [t for t in np.linspace(lo, 1.45, 14) if t < math.pi / 2]
    peaks = []
    for i, t in enumerate(cands):
        if i == 1 and peaks[0] < 3.0:
            return theta0
        try:
            R = truncation_radius(z, t, spec.interpolant, consts, trunc_tol, r_min=m + 0.5)
            peaks.append(log_ray_peak(z, t, spec.interpolant, consts, m + 0.5, R))
        except HolocontError:
            peaks.append(math.inf)
    k = int(np.argmin(peaks))
    return theta0 if peaks[0] <= peaks[k] + 2.0 else float(cands[k])


def make_config(spec: SeriesSpec, z, m=None, theta=None, **kw) -> ContinuationConfig:
    if m is None:
        m = default_m(spec, z)
    if theta is None:
        theta = select_theta(CompactParams.from_points(z))
        theta = refine_theta(spec, z, theta, kw.get("r_exclusion", 0.25), kw.get("trunc_tol", 1e-13), int(m))
    return ContinuationConfig(m=int(m), theta=float(theta), **kw)


def _initial_pieces(length, rate):
    return int(min(512, max(4, length * rate / math.pi + 1)))


def tail_integral(spec: SeriesSpec, z, cfg: ContinuationConfig) -> ContinuationResult:
    """``sum_{n > m} phi(n) z**n`` as the kernel integral over the sector boundary."""
    z = complex(z)
    if cfg.m < spec.n0:
        raise ParameterError(f"m={cfg.m} is below the interpolant's validity index n0={spec.n0}")
    log_z = _log_z(z)
    cfg.check(z)
    consts = reciprocal_bound_constant(cfg.r_exclusion)
    phi = spec.interpolant
    contour = gamma_m_contour(cfg.m, cfg.theta)
    R = truncation_radius(z, cfg.theta, phi, consts, cfg.trunc_tol, r_min=cfg.m + 0.5)

    peak = log_ray_peak(z, cfg.theta, phi, consts, cfg.m + 0.5, R)
    if peak > _MAX_LOG_INTEGRAND:
        raise AccuracyError(
            f"at z={z} the integrand reaches about exp({peak:.0f}) along the rays; the interpolant "
            "grows too fast there for double-precision quadrature"
        )

    def f(zeta):
        return kernel_values(zeta, log_z, phi)

    # phase speed of z**zeta along a ray, for the initial mesh
    rate = abs(log_z) + 2 * math.pi
    value, error, ok = 0j, 2 * cfg.trunc_tol, True
    for piece in contour:
        if isinstance(piece, Ray):
            r = piece.integrate(f, R, rtol=cfg.quad_tol, atol=cfg.trunc_tol, limit=cfg.limit,
                                initial=_initial_pieces(R - piece.r_start, rate))
        else:
            r = piece.integrate(f, rtol=cfg.quad_tol, atol=cfg.trunc_tol, limit=cfg.limit,
                                initial=_initial_pieces(piece.extent * piece.radius, rate))
        value += r.value
        error += r.error
        ok &= r.converged
    if not ok:
        raise AccuracyError(f"tail integral at z={z} missed its tolerance", value, error)
    return ContinuationResult(complex(value), float(error), "contour", cfg.m, cfg.theta, R)


def head_sum(spec: SeriesSpec, z, m: int) -> complex:
    a = spec.coefficients(m)
    # Horner keeps the rounding at the level of the largest term
    acc = 0j
    for c in a[::-1]:
        acc = acc * z + c
    return complex(acc)


def residue_partial_sum(spec: SeriesSpec, z, m: int, N: int) -> complex:
    """``sum_{n=m+1}^{N} phi(n) z**n``: the residue side of the tail identity."""
    z = complex(z)
    if abs(z) >= 1:
        raise DomainError("the residue sum is only used inside the unit disc")
    if N < m:
        raise ParameterError("N must be at least m")
    total = 0j
    for lo in range(m + 1, N + 1, 1 << 16):
        n = np.arange(lo, min(N, lo + (1 << 16) - 1) + 1)
        powers = np.exp(n * np.log(z)) if z != 0 else np.zeros(n.size)
        total += np.sum(spec.interpolant(n.astype(complex)) * powers)
    return complex(total)


def direct_sum(spec: SeriesSpec, z, rtol: float = 1e-16, max_terms: int = 10_000_000) -> ContinuationResult:
    """Sum the series itself; only meaningful for ``|z| < 1``."""
    z = complex(z)
    if abs(z) >= 1:
        raise DomainError("the series diverges for |z| >= 1")
    if z == 0:
        return ContinuationResult(spec.coefficients(0)[0], 0.0, "series")
    head_n = max(len(spec.head), spec.n0) - 1
    total = head_sum(spec, z, head_n) if head_n >= 0 else 0j
    start = head_n + 1
    block = 4096
    logz = np.log(z)
    while start < max_terms:
        n = np.arange(start, start + block)
        terms = spec.interpolant(n.astype(complex)) * np.exp(n * logz)
        part = np.sum(terms[::-1])
        total += part
        if np.abs(terms[-64:]).max() <= rtol * max(abs(total), 1e-300) and abs(part) <= 1e3 * abs(total) + 1e-300:
            return ContinuationResult(complex(total), float(abs(terms[-1]) / (1 - abs(z))), "series")
        start += block
        block = min(block * 2, 1 << 20)
    raise AccuracyError(f"series at z={z} did not converge within {max_terms} terms", total, None)


def continue_at(spec: SeriesSpec, z, cfg: ContinuationConfig | None = None, **kw) -> ContinuationResult:
    """Value at ``z`` of the continuation of the series onto ``C \\ [1, inf)``."""
    z = complex(z)
    if z == 0:
        return ContinuationResult(spec.coefficients(0)[0], 0.0, "constant")
    if z.imag == 0 and z.real >= 1:
        raise DomainError(f"z={z.real} lies on the cut [1, inf)")
    if z.imag == 0 and 0 < z.real < 1:
        return direct_sum(spec, z)
    if cfg is None:
        cfg = make_config(spec, z, **kw)
    tail = tail_integral(spec, z, cfg)
    head = head_sum(spec, z, cfg.m)
    return tail._replace(value=head + tail.value)


def _threads(n_jobs):
    if n_jobs is not None:
        return max(1, int(n_jobs))
    env = os.environ.get("CONTINUE_THREADS")
    return max(1, int(env)) if env else 1


def map_points(func, zs, n_jobs=None):
    """``[func(z) for z in zs]``, optionally threaded, always in input order."""
    k = _threads(n_jobs)
    if k == 1 or len(zs) < 2:
        return [func(z) for z in zs]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(func, zs))


class SeriesContinuation(BaseEstimator):
    """Estimator-style front end: ``fit`` a series, ``predict`` its continuation.

    Parameters
    ----------
    m : int or None
        Split index.  ``None`` picks ``max(n0, 8)`` inside the unit disc and
        ``n0`` outside it.
    theta : float or None
        Sector half-angle in ``(0, pi/2)``; ``None`` selects it per point.
    quad_tol : float
        Relative tolerance of each contour piece.
    trunc_tol : float
        Absolute tolerance used for ray truncation and as the absolute
        quadrature floor.
    r_exclusion : float
        Radius of the discs around the integers used by the kernel bound.
    n_jobs : int or None
        Threads for multi-point prediction (default: ``$CONTINUE_THREADS`` or 1).
    """

    def __init__(self, m=None, theta=None, quad_tol=1e-10, trunc_tol=1e-13,
                 r_exclusion=0.25, limit=4000, n_jobs=None):
        self.m = m
        self.theta = theta
        self.quad_tol = quad_tol
        self.trunc_tol = trunc_tol
        self.r_exclusion = r_exclusion
        self.limit = limit
        self.n_jobs = n_jobs

    def fit(self, spec, y=None):
        if isinstance(spec, str):
            from .catalog import get_entry

            spec = get_entry(spec).spec
        elif isinstance(spec, dict):
            spec = SeriesSpec.from_dict(spec)
        if not isinstance(spec, SeriesSpec):
            raise ParameterError("fit expects a SeriesSpec, a series dict or a registry name")
        if self.m is not None and self.m < spec.n0:
            raise ParameterError(f"m={self.m} is below n0={spec.n0}")
        self.spec_ = spec
        self.a0_ = complex(spec.coefficients(0)[0])
        return self

    def _one(self, z):
        kw = dict(quad_tol=self.quad_tol, trunc_tol=self.trunc_tol,
                  r_exclusion=self.r_exclusion, limit=self.limit)
        z = complex(z)
        if z == 0 or (z.imag == 0 and z.real > 0):
            return continue_at(self.spec_, z)
        return continue_at(self.spec_, z, make_config(self.spec_, z, m=self.m, theta=self.theta, **kw))

    def evaluate(self, Z) -> list[ContinuationResult]:
        """Full results (value, error estimate, configuration) per point."""
        check_is_fitted(self, "spec_")
        zs = check_points(Z)
        return map_points(self._one, list(zs), self.n_jobs)

    def predict_with_error(self, Z):
        res = self.evaluate(Z)
        return (np.array([r.value for r in res], dtype=complex),
                np.array([r.error for r in res], dtype=float))

    def predict(self, Z):
        return self.predict_with_error(Z)[0]

    def __call__(self, Z):
        return self.predict(Z)
