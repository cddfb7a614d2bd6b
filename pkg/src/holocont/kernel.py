"""The summation kernel ``phi(zeta) * z**zeta / (exp(2*pi*i*zeta) - 1)`` and its
explicit majorants.

The kernel has simple poles at the integers with residues
``phi(n) * z**n / (2*pi*i)``; integrating it over a contour that threads
between those poles turns a tail of the power series into a contour integral.
"""

from __future__ import annotations

import functools
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .branches import cut_distance, log_branch
from .exceptions import BranchError, ConfigurationError, DomainError, ParameterError, PoleProximityError
from .expr import logabs_of

TWO_PI = 2.0 * np.pi
C_FAR = 1.0 / (1.0 - math.exp(-TWO_PI))
POLE_GUARD = 1e-9


@dataclass(frozen=True)
class KernelBoundConstants:
    """Constants in ``1/|exp(2*pi*i*zeta) - 1| <= c*exp(pi*Im - pi*|Im|)``.

    Valid for ``zeta`` outside the discs of radius ``r_exclusion`` around
    the integers.  ``c_prime`` is the minimum of the left side's reciprocal
    over the unit square with the discs removed, found at ``argmin``.
    """

    c_far: float
    c_near: float
    r_exclusion: float
    c: float
    c_prime: float
    argmin: complex

    def to_dict(self):
        d = asdict(self)
        d["argmin"] = [self.argmin.real, self.argmin.imag]
        return d


def _q(zeta):
    zeta = np.asarray(zeta, dtype=complex)
    y = zeta.imag
    # |e^{2 pi i zeta} - 1| * e^{pi y - pi |y|}, written without overflow
    e = np.exp(np.where(y >= 0, 2j * np.pi * zeta, -2j * np.pi * zeta))
    return np.abs(e - 1.0)


@functools.lru_cache(maxsize=32)
def reciprocal_bound_constant(r_exclusion: float = 0.25, grid_step: float = 1e-3) -> KernelBoundConstants:
    """Compute the kernel reciprocal bound for excluded-disc radius ``r_exclusion``.

    A dense grid over ``[-1, 1] x [-1, 1]`` (discs removed) locates the
    minimum; it is then refined by golden-section search along the circle
    ``|zeta| = r_exclusion``, where the minimum of a modulus of a
    non-vanishing holomorphic function sits.
    """
    if not 0 < r_exclusion < 0.5:
        raise ParameterError(f"r_exclusion must lie in (0, 1/2), got {r_exclusion!r}")
    n = int(round(2.0 / grid_step)) + 1
    xs = np.linspace(-1.0, 1.0, n)
    best_q, best_z = np.inf, 0j
    # row blocks keep memory bounded
    for start in range(0, n, 256):
        ys = xs[start:start + 256]
        zz = xs[None, :] + 1j * ys[:, None]
        near = np.abs(zz - np.round(zz.real)) < r_exclusion
        q = np.where(near, np.inf, _q(zz))
        k = np.argmin(q)
        if q.flat[k] < best_q:
            best_q, best_z = float(q.flat[k]), complex(zz.flat[k])

    def on_circle(t):
        return float(_q(r_exclusion * np.exp(1j * t)))

    ts = np.linspace(-np.pi, np.pi, 4097)
    qs = _q(r_exclusion * np.exp(1j * ts))
    k = int(np.argmin(qs))
    res = minimize_scalar(on_circle, bracket=(ts[max(k - 1, 0)], ts[k], ts[min(k + 1, ts.size - 1)]),
                          method="golden", tol=1e-12)
    if res.fun < best_q:
        best_q, best_z = float(res.fun), complex(r_exclusion * np.exp(1j * res.x))
    c_near = 1.0 / best_q
    return KernelBoundConstants(
        c_far=C_FAR, c_near=c_near, r_exclusion=r_exclusion,
        c=max(C_FAR, c_near), c_prime=best_q, argmin=best_z,
    )


def _log_z(z):
    z = complex(z)
    if z == 0:
        raise BranchError("z = 0 is not admissible")
    if z.imag == 0 and z.real >= 1:
        raise BranchError(f"z = {z} lies on the cut [1, inf)")
    return complex(log_branch(z, 0.0))


def kernel_values(zeta, log_z, phi):
    """Kernel at an array of ``zeta`` for a fixed ``log_z = log|z| + i*Arg z``.

    No argument checks; this is the quadrature inner loop.  For ``Im zeta < 0``
    the fraction is rewritten as ``exp(-2*pi*i*zeta) / (1 - exp(-2*pi*i*zeta))``
    so nothing overflows.
    """
    zeta = np.asarray(zeta, dtype=complex)
    lower = zeta.imag < 0
    expo = zeta * log_z + np.where(lower, -2j * np.pi * zeta, 0.0)
    w = np.exp(np.where(lower, -2j * np.pi * zeta, 2j * np.pi * zeta))
    den = np.where(lower, 1.0 - w, w - 1.0)
    if hasattr(phi, "scaled"):
        phase, s = phi.scaled(zeta)
        with np.errstate(invalid="ignore", over="ignore"):
            num = np.where(phase == 0, 0.0, phase * np.exp(expo + np.where(phase == 0, 0.0, s)))
    else:
        num = np.asarray(phi(zeta), dtype=complex) * np.exp(expo)
    return num / den


def kernel_g(zeta, z, phi):
    """``phi(zeta) * z**zeta / (exp(2*pi*i*zeta) - 1)`` with ``Arg z`` in ``[0, 2*pi)``."""
    zeta_a = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(zeta_a - np.round(zeta_a.real)) < POLE_GUARD):
        raise PoleProximityError("zeta is within 1e-9 of an integer pole")
    out = kernel_values(np.atleast_1d(zeta_a), _log_z(z), phi)
    return complex(out[0]) if zeta_a.ndim == 0 else out


def epsilon_of(phi, zeta):
    """``log|phi(zeta)| / |zeta|``; ``-inf`` at zeros of ``phi``."""
    zeta_a = np.asarray(zeta, dtype=complex)
    if np.any(zeta_a == 0):
        raise DomainError("epsilon is undefined at zeta = 0")
    out = logabs_of(phi, np.atleast_1d(zeta_a)) / np.abs(np.atleast_1d(zeta_a))
    return float(out[0]) if zeta_a.ndim == 0 else out


def integrand_bound(zeta, z, phi, consts: KernelBoundConstants):
    """``c * exp(log|z|*Re zeta - (pi - |Arg z - pi|)*|Im zeta| + log|phi(zeta)|)``.

    Dominates ``|kernel_g(zeta, z, phi)|`` off the excluded discs.
    """
    zeta_a = np.atleast_1d(np.asarray(zeta, dtype=complex))
    if np.any(np.abs(zeta_a - np.round(zeta_a.real)) < consts.r_exclusion):
        raise ParameterError("zeta lies inside an excluded disc around an integer")
    lz = _log_z(z)
    a = cut_distance(z)
    logphi = 0.0 if phi is None else logabs_of(phi, zeta_a)
    with np.errstate(over="ignore"):
        out = consts.c * np.exp(lz.real * zeta_a.real - a * np.abs(zeta_a.imag) + logphi)
    return float(out[0]) if np.ndim(zeta) == 0 else out


def log_ray_peak(z, theta, phi, consts: KernelBoundConstants, r_start: float, r_end: float, n: int = 2048) -> float:
    """Largest ``log`` of the integrand bound sampled along both rays between the radii."""
    t = np.geomspace(max(r_start, 1e-3), r_end, n)
    zeta = np.concatenate([t * np.exp(1j * theta), t * np.exp(-1j * theta)])
    lz = _log_z(z)
    logphi = 0.0 if phi is None else logabs_of(phi, zeta)
    vals = np.log(consts.c) + lz.real * zeta.real - cut_distance(z) * np.abs(zeta.imag) + logphi
    return float(np.max(vals))


def decay_rate(z, theta) -> float:
    """Exponential rate of the kernel majorant along the rays at angle ``+-theta``."""
    return float(_log_z(z).real * np.cos(theta) - cut_distance(z) * np.sin(theta))


def truncation_radius(z, theta, phi, consts: KernelBoundConstants, tol: float, r_min: float = 0.0) -> float:
    """Radius beyond which the ray tails of the contour integral are below ``tol``.

    Starts from ``c*exp(lambda*R)/|lambda| < tol`` (then doubled), and keeps
    doubling until the integrand bound at both ray endpoints, which includes
    the actual size of ``phi`` there, is below ``tol`` too.
    """
    lam = decay_rate(z, theta)
    if lam >= -1e-6:
        raise ConfigurationError(
            f"ray decay rate {lam:.3g} is not negative for z={z!r}, theta={theta!r}; increase theta"
        )
    R = max(np.log(consts.c / (tol * abs(lam))) / abs(lam), 1.0) * 2.0
    R = max(R, 2.0 * r_min)
    for _ in range(64):
        ends = R * np.exp(np.array([1j, -1j]) * theta)
        with np.errstate(all="ignore"):
            bounds = integrand_bound(ends, z, phi, consts) if _clear(ends, consts) else np.zeros(2)
        if np.all(bounds < tol):
            return float(R)
        R *= 2.0
    raise ConfigurationError("could not find a truncation radius: the interpolant grows too fast")


def _clear(zeta, consts):
    return bool(np.all(np.abs(zeta - np.round(zeta.real)) >= consts.r_exclusion))
