"""Dilogarithm on the principal sheet, off the cut ``[1, inf)``.

Inside ``|z| <= 1/2`` the defining series is summed directly.  Elsewhere in
the closed unit disc with ``Re z <= 1/2`` the series in ``u = -log(1 - z)``
with Bernoulli-number coefficients is used (``|u| <= pi/3`` there).  The rest
of the plane is reduced to those two regions by the reflection
``z -> 1 - z`` and the inversion ``z -> 1/z``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import bernoulli

_PI2_6 = math.pi ** 2 / 6
_NB = 40
# B_n / (n+1)! for n = 0.._NB (B_1 = -1/2)
_BCOEF = np.array([b / math.factorial(n + 1) for n, b in enumerate(bernoulli(_NB))])


def _series(z):
    n = np.arange(1, 61)
    return np.sum(z[..., None] ** n / n.astype(float) ** 2, axis=-1)


def _bernoulli_series(z):
    u = -np.log1p(-z)
    # Horner in u over the coefficient list, times u
    acc = np.zeros_like(u)
    for c in _BCOEF[::-1]:
        acc = acc * u + c
    return acc * u


def _core(z):
    """``|z| <= 1`` and ``Re z <= 1/2``."""
    out = np.empty_like(z)
    small = np.abs(z) <= 0.5
    out[small] = _series(z[small])
    out[~small] = _bernoulli_series(z[~small])
    return out


def _disc(z):
    """``|z| <= 1``, ``z`` not in ``(1, inf)``."""
    out = np.empty_like(z)
    left = z.real <= 0.5
    out[left] = _core(z[left])
    w = z[~left]
    # reflection; log(w) is finite since w != 0 here
    with np.errstate(divide="ignore", invalid="ignore"):
        out[~left] = _PI2_6 - np.log(w) * np.log1p(-w) - _core(1.0 - w)
    out[~left & (z == 1)] = _PI2_6
    return out


def dilog(z):
    """``Li_2(z) = sum z**n / n**2`` continued to ``C`` minus ``(1, inf)``."""
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty_like(z_arr)
    inside = np.abs(z_arr) <= 1.0
    out[inside] = _disc(z_arr[inside])
    w = z_arr[~inside]
    # inversion, principal log of -w
    out[~inside] = -_disc(1.0 / w) - _PI2_6 - 0.5 * np.log(-w) ** 2
    return complex(out[0]) if np.ndim(z) == 0 else out.reshape(np.shape(z))
