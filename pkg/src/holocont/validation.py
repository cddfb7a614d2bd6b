"""Input checking shared by the estimators and the CLI."""

from __future__ import annotations

import numpy as np

from .exceptions import DomainError, ParameterError


def check_points(Z) -> np.ndarray:
    """Coerce ``Z`` to a flat complex array of finite points.

    Accepts scalars, sequences of numbers, and ``(n, 2)`` real arrays read
    as ``(re, im)`` rows.
    """
    arr = np.asarray(Z)
    if arr.dtype == object:
        try:
            arr = arr.astype(complex)
        except (TypeError, ValueError):
            raise ParameterError("points must be numeric") from None
    if not np.issubdtype(arr.dtype, np.number):
        raise ParameterError(f"points must be numeric, got dtype {arr.dtype}")
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    elif arr.ndim > 1:
        raise ParameterError(f"expected a 1-D array of points or (n, 2) rows, got shape {arr.shape}")
    arr = np.atleast_1d(arr).astype(complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("points must be finite")
    return arr


def parse_point(text: str) -> complex:
    """``"re,im"`` (or a bare real) to a complex number."""
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ParameterError(f"cannot read a point from {text!r}; expected 're,im'")


def check_positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0:
        raise ParameterError(f"{name} must be positive, got {value!r}")
    return value
