"""Invariant checks for a continued series, shared by the CLI and the tests."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .continuation import (
    CompactParams,
    SeriesSpec,
    continue_at,
    head_sum,
    make_config,
    residue_partial_sum,
    select_theta,
    tail_integral,
)

RESIDUE_POINTS = (0.5, -0.5, 0.3 + 0.6j)
OFF_AXIS_POINTS = (-2.0, -1.0 + 1.5j, -0.5 - 2.0j, 2.0j)


class Check(NamedTuple):
    name: str
    passed: bool
    value: float
    tolerance: float

    def to_dict(self):
        return self._asdict()


def residue_identity(spec: SeriesSpec, points=RESIDUE_POINTS, ms=(5, 8), N=4000, tol=1e-7) -> Check:
    """Contour tail against the directly summed tail inside the disc."""
    worst = 0.0
    for z in points:
        for m in ms:
            ti = tail_integral(spec, z, make_config(spec, z, m=max(m, spec.n0))).value
            worst = max(worst, abs(ti - residue_partial_sum(spec, z, max(m, spec.n0), N)))
    return Check("residue identity", worst < tol, worst, tol)


def m_independence(spec: SeriesSpec, points=OFF_AXIS_POINTS, ms=(5, 8, 12), tol=1e-7) -> Check:
    worst = 0.0
    for z in points:
        vals = [continue_at(spec, z, make_config(spec, z, m=max(m, spec.n0))).value for m in ms]
        worst = max(worst, max(abs(v - vals[0]) for v in vals) / max(1.0, abs(vals[0])))
    return Check("m-independence", worst < tol, worst, tol)


def theta_independence(spec: SeriesSpec, points=OFF_AXIS_POINTS, tol=1e-7) -> Check:
    worst = 0.0
    for z in points:
        params = CompactParams.from_points(z)
        t0 = select_theta(params)
        # a smaller admissible angle: b*cot(t1) - a = -a/4
        t1 = math.atan2(4.0 * params.b, 3.0 * params.a) if params.b > 0 else math.pi / 6
        a, b = (tail_integral(spec, z, make_config(spec, z, theta=t)).value for t in (t0, t1))
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return Check("theta-independence", worst < tol, worst, tol)


def holomorphy_probe(spec: SeriesSpec, centres=(-1.0 + 1.0j, -2.0 - 0.5j), radius=0.05, n=16, tol=1e-6) -> Check:
    """Mean value of the continuation over a small circle against the centre value."""
    worst = 0.0
    for z0 in centres:
        ring = z0 + radius * np.exp(2j * math.pi * np.arange(n) / n)
        mean = np.mean([continue_at(spec, w).value for w in ring])
        centre = continue_at(spec, z0).value
        worst = max(worst, abs(mean - centre) / max(1.0, abs(centre)))
    return Check("holomorphy probe", bool(worst < tol), float(worst), tol)


def closed_form_agreement(spec: SeriesSpec, closed_form, points=OFF_AXIS_POINTS, tol=1e-8) -> Check:
    worst = 0.0
    for z in points:
        ref = complex(closed_form(z))
        worst = max(worst, abs(continue_at(spec, z).value - ref) / max(abs(ref), 1e-300))
    return Check("closed form", worst < tol, worst, tol)


def run_all(spec: SeriesSpec, closed_form=None) -> list[Check]:
    checks = [residue_identity(spec), m_independence(spec), theta_independence(spec), holomorphy_probe(spec)]
    if closed_form is not None:
        checks.append(closed_form_agreement(spec, closed_form))
    return checks


def head_tail_split(spec: SeriesSpec, z, m):
    """``(head, tail)`` of the continuation at ``z`` for split index ``m``."""
    cfg = make_config(spec, z, m=m)
    return head_sum(spec, z, m), tail_integral(spec, z, cfg).value
