"""Branch-aware argument, logarithm and complex power.

``Arg_theta`` takes values in ``[theta, theta + 2*pi)`` and is continuous off
the ray ``{t*exp(i*theta): t >= 0}``.  Points on the ray itself get the
range-start value ``theta``.  The principal branch (values in ``(-pi, pi]``)
is exposed separately as :func:`principal_arg`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, ParameterError

TWO_PI = 2.0 * np.pi

# Width of the band around the cut that snaps to the range start.  It only
# absorbs the rounding of np.angle, so points a few ulps off the ray count
# as on it.
_SNAP = 16 * np.finfo(float).eps


@dataclass(frozen=True)
class BranchCut:
    """The ray at angle ``theta`` along which ``Arg_theta`` jumps by 2*pi."""

    theta: float = 0.0

    def __post_init__(self):
        if not (-np.pi <= self.theta < np.pi):
            raise ParameterError(f"cut angle must lie in [-pi, pi), got {self.theta!r}")


PRINCIPAL_CUT = BranchCut(-np.pi)


def _as_cut(cut) -> float:
    if isinstance(cut, BranchCut):
        return cut.theta
    return BranchCut(float(cut)).theta


def _clean(z):
    z = np.asarray(z, dtype=complex)
    # -0.0 imaginary parts would put points on the wrong side of the cut
    return z.real + 1j * (z.imag + 0.0)


def arg_branch(z, cut=0.0):
    """Argument of ``z`` with values in ``[theta, theta + 2*pi)``.

    Accepts scalars or arrays; raises :class:`DomainError` at ``z == 0``.
    """
    theta = _as_cut(cut)
    zc = _clean(z)
    if np.any(zc == 0):
        raise DomainError("argument of 0 is undefined")
    d = np.angle(zc) - theta
    d = np.where(d < 0, d + TWO_PI, d)
    d = np.where(d >= TWO_PI, d - TWO_PI, d)
    tol = _SNAP * (np.pi + abs(theta))
    d = np.where((d < tol) | (d > TWO_PI - tol), 0.0, d)
    out = theta + d
    return float(out) if np.ndim(out) == 0 else out


def log_branch(z, cut=0.0):
    """``log|z| + i*Arg_theta(z)``."""
    zc = _clean(z)
    if np.any(zc == 0):
        raise DomainError("logarithm of 0 is undefined")
    out = np.log(np.abs(zc)) + 1j * np.asarray(arg_branch(zc, cut))
    return complex(out) if np.ndim(out) == 0 else out


def power_cut0(z, zeta):
    """``z**zeta := exp(zeta*(log|z| + i*Arg z))`` with ``Arg`` in ``[0, 2*pi)``."""
    zeta = np.asarray(zeta, dtype=complex)
    out = np.exp(zeta * log_branch(z, 0.0))
    return complex(out) if np.ndim(out) == 0 else out


def principal_arg(z):
    """Main argument with values in ``(-pi, pi]``."""
    zc = _clean(z)
    if np.any(zc == 0):
        raise DomainError("argument of 0 is undefined")
    out = np.angle(zc)
    return float(out) if np.ndim(out) == 0 else out


def cut_distance(z):
    """``pi - |Arg z - pi|``: angular distance of ``z`` from the ray [0, inf)."""
    a = np.asarray(arg_branch(z, 0.0))
    out = np.pi - np.abs(a - np.pi)
    return float(out) if np.ndim(out) == 0 else out
