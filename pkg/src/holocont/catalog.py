"""Built-in worked examples with closed forms.

Series entries pair a :class:`SeriesSpec` with the closed form of its
continuation.  Boundary entries pair a function ``g`` with a decay
certificate for the interpolant pipeline.  Every series entry is checked
against its own series at load time.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .continuation import SeriesSpec, direct_sum
from .exceptions import ConfigurationError, ParameterError
from .expr import FunctionExpr, parse_expr
from .interpolant import DecayCertificate


@dataclass(frozen=True)
class ExampleEntry:
    label: str
    spec: SeriesSpec
    closed_form: FunctionExpr
    notes: str = ""
    g: FunctionExpr | None = None
    cert: DecayCertificate | None = None


@dataclass(frozen=True)
class BoundaryEntry:
    label: str
    g: FunctionExpr
    cert: DecayCertificate
    notes: str = ""


def _disc_points(n=20, seed=7):
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.05, 0.9, n)
    t = rng.uniform(-math.pi, math.pi, n)
    return r * np.exp(1j * t)


def check_entry(entry: ExampleEntry, points=None, tol=1e-10) -> float:
    """Largest deviation between closed form and summed series; raises above ``tol``."""
    points = _disc_points() if points is None else points
    worst = 0.0
    for z in points:
        series = direct_sum(entry.spec, z).value
        closed = complex(entry.closed_form(z))
        worst = max(worst, abs(series - closed) / max(1.0, abs(closed)))
    if worst > tol:
        raise ConfigurationError(f"{entry.label}: closed form and series disagree by {worst:.3g}")
    return worst


def _entry(label, head, phi, n0, closed, notes, g=None, cert=None):
    spec = SeriesSpec(head, parse_expr(phi), n0, label)
    return ExampleEntry(label, spec, parse_expr(closed), notes, None if g is None else parse_expr(g), cert)


@functools.lru_cache(maxsize=1)
def builtin_registry() -> tuple[ExampleEntry, ...]:
    entries = (
        _entry("geometric", [1], "1", 0, "1/(1-z)", "a_n = 1"),
        _entry("log", [0], "1/z", 1, "-log(1-z)", "a_n = 1/n for n >= 1"),
        _entry("dilog", [0], "1/(z*z)", 1, "li2(z)", "a_n = 1/n^2 for n >= 1"),
        _entry("logshift", [1], "1/(z+1)", 0, "-log(1-z)/z", "a_n = 1/(n+1)"),
        _entry("expneg", [1, -1, 0.5], "exp(-i*pi*z)*rgamma(z+1)", 0, "exp(-z)",
               "a_n = (-1)^n/n!; the interpolant is the one built from g = exp(-z) on the ray at 0",
               g="exp(-z)", cert=DecayCertificate(math.e, 0.4, 0.0)),
    )
    for e in entries:
        check_entry(e)
    return entries


@functools.lru_cache(maxsize=1)
def boundary_registry() -> tuple[BoundaryEntry, ...]:
    return (
        BoundaryEntry("expneg", parse_expr("exp(-z)"), DecayCertificate(math.e, 0.4, 0.0),
                      "entire; decays on every ray with |angle| < pi/2"),
        BoundaryEntry("sqrtexp", parse_expr("exp(-sqrt(1-z))"), DecayCertificate(1.0, 0.4, -math.pi),
                      "cut [1, inf); decays like exp(-sqrt(t)) on the negative axis and off any sector around the cut"),
    )


def series_names() -> list[str]:
    return [e.label for e in builtin_registry()]


def get_entry(name: str) -> ExampleEntry:
    for e in builtin_registry():
        if e.label == name:
            return e
    raise ParameterError(f"unknown series {name!r}; built-ins are {', '.join(series_names())}")


def get_boundary(name: str) -> BoundaryEntry:
    for e in boundary_registry():
        if e.label == name:
            return e
    raise ParameterError(f"unknown boundary function {name!r}; built-ins are "
                         f"{', '.join(e.label for e in boundary_registry())}")
