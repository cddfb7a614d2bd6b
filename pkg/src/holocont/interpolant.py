"""Entire coefficient interpolants built from a function decaying along a ray.

Given ``g`` holomorphic in the unit disc (Taylor coefficients ``a_n``) that
decays like ``M*exp(-t**eta)`` along the ray at angle ``theta``, the
Mellin-type integral

    phi(z) = 1/(2*pi*i) [ int_{ray in + circle} e^{(-z-1) Log_theta zeta} g dzeta
                          + int_{ray out} e^{(-z-1)(Log_theta zeta + 2*pi*i)} g dzeta ]

defines an entire function with ``phi(n) = a_n`` for ``n >= 0`` and
``phi(n) = 0`` for negative integers.  Parameterising the circle by angle
and the ray by ``t = exp(u)`` gives

    phi(z) = r**-z/(2*pi) * int_theta^{theta+2*pi} e^{-izs} g(r e^{is}) ds
             - sin(pi*z)/pi * e^{-iz(pi+theta)} * int_{log r}^{log T} e^{-zu} g(e^{u+i*theta}) du,

which is what is evaluated here.  Each evaluation point is rescaled by its
own peak log-modulus, so heavy cancellation costs accuracy only relative to
that peak, never overflow.  The deformed-contour representation is the same
construction with the ray doubled around the positive axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import CertificateError, ParameterError
from .expr import as_function
from .quadrature import integrate
from .validation import check_points

TWO_PI = 2.0 * math.pi
_LOG_FLOOR = -745.0  # below this exp() underflows to zero


@dataclass(frozen=True)
class DecayCertificate:
    """Witness of ``|g(t*e^{i*theta_ray})| <= M*exp(-t**eta)`` at ``checked_radii``."""

    M: float
    eta: float
    theta_ray: float
    checked_radii: tuple = ()

    def __post_init__(self):
        if not self.M > 0:
            raise ParameterError("M must be positive")
        if not 0 < self.eta < 0.5:
            raise ParameterError(f"eta must lie in (0, 1/2), got {self.eta!r}")
        object.__setattr__(self, "checked_radii", tuple(float(t) for t in self.checked_radii))

    def margin(self, g, radii, angle=None):
        """``log M - t**eta - log|g(t e^{i angle})|`` at each radius (must be >= 0)."""
        angle = self.theta_ray if angle is None else angle
        t = np.asarray(radii, dtype=float)
        return math.log(self.M) - t ** self.eta - _logabs(g, t * np.exp(1j * angle))

    def verify(self, g, radii=None, angles=None) -> "DecayCertificate":
        """Check the bound on sampled radii (and optionally extra angles).

        Returns a copy recording the radii; raises :class:`CertificateError`
        at the first violation.
        """
        if radii is None:
            radii = np.geomspace(1e-2, 1e6, 161)
        angles = [self.theta_ray] if angles is None else list(angles)
        for ang in angles:
            m = self.margin(g, radii, ang)
            # tiny slack for rounding in log|g|
            bad = np.flatnonzero(m < -1e-12 * (1 + np.asarray(radii) ** self.eta))
            if bad.size:
                t = float(np.asarray(radii)[bad[0]])
                raise CertificateError(
                    f"|g| exceeds M*exp(-t^eta) at t={t:.6g}, angle={ang:.6g} (M={self.M}, eta={self.eta})"
                )
        return replace(self, checked_radii=tuple(np.asarray(radii, dtype=float)))

    @classmethod
    def fit(cls, g, theta_ray, eta, radii=None, angles=None, slack=1.05) -> "DecayCertificate":
        """Smallest sampled ``M`` (times ``slack``) for the given ``eta``.

        An empirical certificate: it holds on the sample grid by construction.
        If the sampled ratio ``|g|*exp(t**eta)`` is still rising at the largest
        radii, ``g`` does not decay that fast and a :class:`CertificateError`
        is raised.
        """
        if radii is None:
            radii = np.geomspace(1e-2, 1e6, 161)
        radii = np.asarray(radii, dtype=float)
        angles = [theta_ray] if angles is None else list(angles)
        logs = np.array([_logabs(g, radii * np.exp(1j * a)) + radii ** eta for a in angles])
        prof = logs.max(axis=0)
        if prof[-1] > prof.max() - 1.0 and prof[-1] > prof[0]:
            raise CertificateError(f"no decay of order exp(-t^{eta}) along the sampled rays")
        M = slack * math.exp(float(prof.max()))
        return cls(M, eta, theta_ray).verify(g, radii, angles)


@dataclass(frozen=True)
class InterpolantConfig:
    """``r=None`` picks the circle radius per point; ``ray_truncation=None`` derives it from the certificate."""

    r: float | None = None
    theta: float = 0.0
    quad_tol: float = 1e-12
    ray_truncation: float | None = None
    limit: int = 4000

    def __post_init__(self):
        if not -math.pi <= self.theta < math.pi:
            raise ParameterError(f"theta must lie in [-pi, pi), got {self.theta!r}")
        if self.r is not None and not self.r > 0:
            raise ParameterError("r must be positive")
        if not self.quad_tol > 0:
            raise ParameterError("quad_tol must be positive")


class InterpolantResult(NamedTuple):
    value: complex
    error: float
    r: float
    theta: float
    truncation: float


# ---------------------------------------------------------------------------
# helpers


def _logabs(g, zeta):
    if hasattr(g, "logabs"):
        return np.asarray(g.logabs(zeta), dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(np.asarray(g(zeta), dtype=complex)))


def _log_g(g, zeta):
    """Complex ``log g`` (any branch) with ``-inf`` real part at zeros."""
    zeta = np.asarray(zeta, dtype=complex)
    if hasattr(g, "scaled"):
        phase, s = g.scaled(zeta)
        with np.errstate(divide="ignore"):
            return np.log(phase) + s
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(g(zeta), dtype=complex))


def sinpi(z):
    """``sin(pi*z)`` with exact zeros at the integers."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    n = np.round(x)
    f = x - n
    sign = np.where(np.mod(n, 2) == 0, 1.0, -1.0)
    s, c = sign * np.sin(np.pi * f), sign * np.cos(np.pi * f)
    with np.errstate(over="ignore"):
        return s * np.cosh(np.pi * y) + 1j * c * np.sinh(np.pi * y)


def _log_sinpi(z):
    """``log(sin(pi*z))`` modulo 2*pi*i, finite for large ``|Im z|``; -inf at integers."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z.imag) < 1.0
    with np.errstate(divide="ignore"):
        out[small] = np.log(sinpi(z[small]))
    up = ~small & (z.imag > 0)
    lo = ~small & (z.imag < 0)
    # sin(pi z) = e^{-i pi z} (i/2) (1 - e^{2 pi i z}) and its mirror image
    out[up] = -1j * np.pi * z[up] + np.log(0.5j) + np.log1p(-np.exp(2j * np.pi * z[up]))
    out[lo] = 1j * np.pi * z[lo] + np.log(-0.5j) + np.log1p(-np.exp(-2j * np.pi * z[lo]))
    return out


def stirling_gamma_bound(x: float, eta: float) -> float:
    """Upper bound for ``Gamma(x/eta)``: ``sqrt(2*pi/t) (t/e)**t exp(1/(12 t))``, ``t = x/eta``."""
    return math.exp(log_stirling_gamma_bound(x, eta)) if log_stirling_gamma_bound(x, eta) < 709 else math.inf


def log_stirling_gamma_bound(x: float, eta: float) -> float:
    if not x > 0 or not eta > 0:
        raise ParameterError("x and eta must be positive")
    t = x / eta
    return 0.5 * math.log(TWO_PI / t) + t * (math.log(t) - 1.0) + 1.0 / (12.0 * t)


def _ray_truncation(cert, pref, p, tol):
    """Radius T with the scaled ray tail below ``tol``.

    ``pref`` is the log of the scaled prefactor, ``p = max(-Re z)``; the tail
    ``int_T^inf t**p M e^{-t**eta} dt/t`` is bounded through
    ``eta*t**eta - p >= eta*T**eta/2``.
    """
    eta = cert.eta
    T = max(1.0, (2.0 * (abs(p) + 1.0) / eta) ** (1.0 / eta))
    for _ in range(200):
        Te = T ** eta
        tail = pref + math.log(cert.M) + p * math.log(T) - Te + math.log(2.0 / (eta * Te))
        if eta * Te - p >= eta * Te / 2 and tail < math.log(tol):
            return T
        T *= 1.5
    raise CertificateError("ray truncation diverged: the certificate decays too slowly for these points")


# ---------------------------------------------------------------------------
# core evaluation of the interpolant


def _r_candidates(entire, zmax):
    if entire:
        return np.geomspace(0.05, max(1.0, 3.0 * zmax + 3.0), 48)
    return np.geomspace(0.05, 0.9, 24)


def _peaks(g, theta, zs, r, T_guess, ns=65, nu=48):
    """Per-point peak log-moduli of the circle and ray integrands (before scaling)."""
    s = np.linspace(theta, theta + TWO_PI, ns)
    lg_c = _log_g(g, r * np.exp(1j * s))
    circ = (-zs[:, None] * math.log(r) - 1j * zs[:, None] * s[None, :] + lg_c[None, :]).real.max(axis=1)
    u = np.linspace(math.log(r), math.log(T_guess), nu)
    lg_r = _log_g(g, np.exp(u + 1j * theta))
    ray = (-zs[:, None] * u[None, :] + lg_r[None, :]).real.max(axis=1)
    pref = (_log_sinpi(zs) - math.log(math.pi) - 1j * zs * (math.pi + theta)).real
    return circ, ray + pref


def _choose_r(g, cert, cfg, zs, entire):
    if cfg.r is not None:
        if not entire and cfg.r >= 1:
            raise ParameterError("r must lie in (0, 1) unless g is entire")
        return np.full(zs.size, float(cfg.r))
    T_guess = _ray_truncation(cert, 0.0, float(np.max(-zs.real, initial=0.0)), 1e-16)
    cands = _r_candidates(entire, float(np.max(np.abs(zs), initial=0.0)))
    costs = np.array([np.maximum(*_peaks(g, cfg.theta, zs, r, max(T_guess, 2 * r))) for r in cands])
    return cands[np.argmin(costs, axis=0)]


def _evaluate_group(g, cert, cfg, zs, r):
    """Interpolant at points ``zs`` sharing the circle radius ``r``."""
    theta = cfg.theta
    log_r = math.log(r)
    p = float(np.max(-zs.real))
    circ_peak, ray_peak = _peaks(g, theta, zs, r, _ray_truncation(cert, 0.0, max(p, 0.0), 1e-16) + 2 * r)
    shift = np.maximum(circ_peak, np.where(np.isfinite(ray_peak), ray_peak, -np.inf))
    shift = np.where(np.isfinite(shift), shift, 0.0)
    tol_scaled = cfg.quad_tol * 1e-2

    def circle(s):
        lg = _log_g(g, r * np.exp(1j * s))
        e = -zs[None, :] * log_r - 1j * zs[None, :] * s[:, None] + lg[:, None] - shift[None, :]
        return np.exp(np.where(e.real < _LOG_FLOOR, -np.inf, e)) / TWO_PI

    c = integrate(circle, theta, theta + TWO_PI, rtol=cfg.quad_tol, atol=tol_scaled,
                  limit=cfg.limit, initial=8)

    # log of sin(pi z)/pi e^{-iz(pi+theta)}, scaled; the minus sign is applied after integrating
    pref = _log_sinpi(zs) - math.log(math.pi) - 1j * zs * (math.pi + theta) - shift
    live = np.isfinite(pref.real)
    ray_val = np.zeros(zs.size, dtype=complex)
    ray_err = np.zeros(zs.size)
    T = math.nan
    if live.any():
        zl, pl = zs[live], pref[live]
        T = cfg.ray_truncation
        if T is None:
            T = _ray_truncation(cert, float(np.max(pl.real)), max(float(np.max(-zl.real)), 0.0), tol_scaled)
        T = max(T, 2.0 * r)
        edge = cert.margin(g, [T])
        if edge[0] < 0:
            raise CertificateError(f"decay certificate fails at the ray truncation T={T:.6g}")

        def ray(u):
            lg = _log_g(g, np.exp(u + 1j * theta))
            e = -zl[None, :] * u[:, None] + lg[:, None] + pl[None, :]
            return np.exp(np.where(e.real < _LOG_FLOOR, -np.inf, e))

        rr = integrate(ray, log_r, math.log(T), rtol=cfg.quad_tol, atol=tol_scaled,
                       limit=cfg.limit, initial=16)
        ray_val[live] = -np.asarray(rr.value)
        ray_err[live] = np.asarray(rr.error)
        ok_ray = rr.converged
    else:
        ok_ray = True
    scale = np.exp(shift)
    with np.errstate(over="ignore", invalid="ignore"):
        val = (np.asarray(c.value) + ray_val) * scale
        err = (np.asarray(c.error) + ray_err) * scale
    return val, err, bool(c.converged and ok_ray), T


def evaluate_interpolant(g, cert: DecayCertificate, cfg: InterpolantConfig, Z) -> list[InterpolantResult]:
    """The interpolant at every point of ``Z`` with error estimates."""
    g = as_function(g)
    zs = check_points(Z)
    entire = bool(getattr(g, "entire", False))
    if cfg.r is not None and cfg.r >= 1 and not entire:
        raise ParameterError("r must lie in (0, 1) unless g is entire")
    rs = _choose_r(g, cert, cfg, zs, entire)
    out: list = [None] * zs.size
    for r in np.unique(rs):
        idx = np.flatnonzero(rs == r)
        val, err, ok, T = _evaluate_group(g, cert, cfg, zs[idx], float(r))
        if not ok:
            from .exceptions import AccuracyError

            raise AccuracyError("interpolant quadrature missed its tolerance", val, err)
        for k, i in enumerate(idx):
            out[i] = InterpolantResult(complex(val[k]), float(err[k]), float(r), cfg.theta, float(T))
    return out


def phi_interpolant(g, cert: DecayCertificate, cfg: InterpolantConfig, z) -> InterpolantResult:
    """Value and error estimate of the interpolant at a single point ``z``."""
    return evaluate_interpolant(g, cert, cfg, [complex(z)])[0]


def check_r_independence(g, cert, theta, z, r_list, quad_tol=1e-12) -> float:
    """Largest pairwise deviation of the interpolant at ``z`` over the radii ``r_list``."""
    vals = [phi_interpolant(g, cert, InterpolantConfig(r=r, theta=theta, quad_tol=quad_tol), z).value
            for r in r_list]
    return max((abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1:]), default=0.0)


# ---------------------------------------------------------------------------
# deformed-contour representation


def _deformed_group(F, cert, delta, zs, quad_tol, limit):
    r = math.exp(-delta)
    log_r = -delta
    # peaks: arc |r^-z e^{-izs}| and rays |t^-z e^{+-iz delta}|
    s = np.linspace(-delta, delta, 33)
    lg_a = _log_g(F, r * np.exp(1j * s))
    arc_peak = (-zs[:, None] * log_r - 1j * zs[:, None] * s[None, :] + lg_a[None, :]).real.max(axis=1)
    p = max(float(np.max(-zs.real)), 0.0)
    T0 = _ray_truncation(cert, 0.0, p, 1e-16)
    u = np.linspace(log_r, math.log(max(T0, 2.0)), 48)
    peaks = []
    for sgn in (1, -1):
        lg = _log_g(F, np.exp(u + 1j * sgn * delta))
        peaks.append((-zs[:, None] * u[None, :] + lg[None, :] - 1j * sgn * zs[:, None] * delta).real.max(axis=1))
    shift = np.max([arc_peak, *peaks], axis=0)
    shift = np.where(np.isfinite(shift), shift, 0.0)
    tol_scaled = quad_tol * 1e-2

    def arc(s):
        lg = _log_g(F, r * np.exp(1j * s))
        e = -zs[None, :] * log_r - 1j * zs[None, :] * s[:, None] + lg[:, None] - shift[None, :]
        return np.exp(np.where(e.real < _LOG_FLOOR, -np.inf, e)) / TWO_PI

    def rays(u):
        lp = _log_g(F, np.exp(u + 1j * delta))
        lm = _log_g(F, np.exp(u - 1j * delta))
        base = -zs[None, :] * u[:, None] - shift[None, :]
        e_p = base + lp[:, None] - 1j * zs[None, :] * delta
        e_m = base + lm[:, None] + 1j * zs[None, :] * delta
        vp = np.exp(np.where(e_p.real < _LOG_FLOOR, -np.inf, e_p))
        vm = np.exp(np.where(e_m.real < _LOG_FLOOR, -np.inf, e_m))
        return (vp - vm) / (2j * math.pi)

    T = _ray_truncation(cert, float(np.max(-shift)), p, tol_scaled)
    for sgn in (1, -1):
        if cert.margin(F, [T], sgn * delta)[0] < 0:
            raise CertificateError(f"decay certificate fails at T={T:.6g} on the ray at angle {sgn * delta:+.4g}")
    a = integrate(arc, -delta, delta, rtol=quad_tol, atol=tol_scaled, limit=limit, initial=4)
    b = integrate(rays, log_r, math.log(T), rtol=quad_tol, atol=tol_scaled, limit=limit, initial=16)
    scale = np.exp(shift)
    with np.errstate(over="ignore", invalid="ignore"):
        val = (np.asarray(a.value) + np.asarray(b.value)) * scale
        err = (np.asarray(a.error) + np.asarray(b.error)) * scale
    return val, err, bool(a.converged and b.converged), T


def deformed_certificate_angles(delta):
    """Rays on which the off-sector decay of ``F`` is sampled."""
    return [delta, -delta, (math.pi + delta) / 2, -(math.pi + delta) / 2, math.pi]


def evaluate_deformed(F, delta, Z, quad_tol=1e-10, cert: DecayCertificate | None = None, eta=0.25,
                      limit=4000) -> list[InterpolantResult]:
    """``-(2*pi*i)**-1`` times the integral of ``e^{(-z-1) Log zeta} F`` over the deformed boundary.

    ``r = exp(-delta)``; the contour runs in along the ray at ``+delta``,
    clockwise around the arc, out along the ray at ``-delta``.  Without a
    certificate one is fitted on the rays from :func:`deformed_certificate_angles`.
    """
    if not 0 < delta < math.pi:
        raise ParameterError(f"delta must lie in (0, pi), got {delta!r}")
    F = as_function(F)
    zs = check_points(Z)
    angles = deformed_certificate_angles(delta)
    if cert is None:
        cert = DecayCertificate.fit(F, delta, eta, angles=angles)
    else:
        cert = cert.verify(F, angles=angles)
    val, err, ok, T = _deformed_group(F, cert, delta, zs, quad_tol, limit)
    if not ok:
        from .exceptions import AccuracyError

        raise AccuracyError("deformed-contour quadrature missed its tolerance", val, err)
    r = math.exp(-delta)
    return [InterpolantResult(complex(v), float(e), r, delta, float(T)) for v, e in zip(val, err)]


def phi_deformed(F, delta, z, quad_tol=1e-10, cert: DecayCertificate | None = None) -> InterpolantResult:
    return evaluate_deformed(F, delta, [complex(z)], quad_tol, cert)[0]


# ---------------------------------------------------------------------------
# estimators


class CoefficientInterpolant(BaseEstimator):
    """Entire interpolant of the Taylor coefficients of ``g``.

    ``fit(g, cert)`` checks the decay certificate (fitting one with exponent
    ``eta`` when none is given); ``predict(Z)`` evaluates the interpolant.
    Instances are callable on arrays, so a fitted estimator can serve as the
    coefficient interpolant of a :class:`~holocont.continuation.SeriesSpec`.
    """

    def __init__(self, r=None, theta=0.0, quad_tol=1e-12, eta=0.4, ray_truncation=None, limit=4000):
        self.r = r
        self.theta = theta
        self.quad_tol = quad_tol
        self.eta = eta
        self.ray_truncation = ray_truncation
        self.limit = limit

    def fit(self, g, cert=None):
        g = as_function(g)
        self.config_ = InterpolantConfig(self.r, self.theta, self.quad_tol, self.ray_truncation, self.limit)
        if cert is None:
            cert = DecayCertificate.fit(g, self.theta, self.eta)
        elif cert.theta_ray != self.theta:
            raise ParameterError("certificate ray does not match theta")
        else:
            cert = cert.verify(g)
        self.g_ = g
        self.certificate_ = cert
        return self

    def evaluate(self, Z) -> list[InterpolantResult]:
        check_is_fitted(self, "g_")
        return evaluate_interpolant(self.g_, self.certificate_, self.config_, Z)

    def predict_with_error(self, Z):
        res = self.evaluate(Z)
        return np.array([r.value for r in res]), np.array([r.error for r in res])

    def predict(self, Z):
        return self.predict_with_error(Z)[0]

    def __call__(self, Z):
        scalar = np.ndim(Z) == 0
        out = self.predict(np.ravel(np.asarray(Z, dtype=complex)))
        return complex(out[0]) if scalar else out.reshape(np.shape(Z))


class DeformedInterpolant(BaseEstimator):
    """The interpolant through the deformed contour around ``[0, inf)``."""

    def __init__(self, delta=0.3, quad_tol=1e-10, eta=0.25, limit=4000):
        self.delta = delta
        self.quad_tol = quad_tol
        self.eta = eta
        self.limit = limit

    def fit(self, F, cert=None):
        F = as_function(F)
        angles = deformed_certificate_angles(self.delta)
        self.certificate_ = (DecayCertificate.fit(F, self.delta, self.eta, angles=angles) if cert is None
                             else cert.verify(F, angles=angles))
        self.F_ = F
        return self

    def evaluate(self, Z) -> list[InterpolantResult]:
        check_is_fitted(self, "F_")
        return evaluate_deformed(self.F_, self.delta, Z, self.quad_tol, self.certificate_, limit=self.limit)

    def predict(self, Z):
        return np.array([r.value for r in self.evaluate(Z)])

    def __call__(self, Z):
        scalar = np.ndim(Z) == 0
        out = self.predict(np.ravel(np.asarray(Z, dtype=complex)))
        return complex(out[0]) if scalar else out.reshape(np.shape(Z))
