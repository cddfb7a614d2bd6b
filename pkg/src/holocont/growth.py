"""Finite-radius estimates of exponential type, inner type, indicator and order.

Each functional is a limsup as ``|z| -> inf``.  The estimates sample the
function on a radial schedule and take the supremum over the outermost
``tail_fraction`` of the radii.  They are diagnostics calibrated on closed
forms, not certified values.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from .exceptions import EvaluationError, ParameterError
from .expr import logabs_of


@dataclass(frozen=True)
class RadialSchedule:
    r_min: float = 1.0
    r_max: float = 200.0
    count: int = 64
    spacing: str = "geometric"

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise ParameterError(f"need 0 < r_min < r_max, got {self.r_min!r}, {self.r_max!r}")
        if self.count < 2:
            raise ParameterError("a schedule needs at least two radii")
        if self.spacing not in ("geometric", "linear"):
            raise ParameterError(f"unknown spacing {self.spacing!r}")

    def radii(self) -> np.ndarray:
        if self.spacing == "geometric":
            return np.geomspace(self.r_min, self.r_max, self.count)
        return np.linspace(self.r_min, self.r_max, self.count)

    def tail(self, tail_fraction: float) -> np.ndarray:
        if not 0 < tail_fraction < 1:
            raise ParameterError("tail_fraction must lie in (0, 1)")
        r = self.radii()
        k = max(1, int(math.ceil(tail_fraction * r.size)))
        return r[-k:]


DEFAULT_SCHEDULE = RadialSchedule()


@dataclass
class GrowthReport:
    et_estimate: float
    iet_estimate: float
    indicator_samples: list
    order_estimate: float | None
    schedule: RadialSchedule
    tail_fraction: float = 0.25
    sector: tuple = (-math.pi / 2, math.pi / 2)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["indicator_samples"] = [[float(t), float(h)] for t, h in self.indicator_samples]
        d["sector"] = list(self.sector)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _log_ratio(f, angles, radii):
    """``log|f(R e^{i t})| / R`` on the grid (rows: radii, columns: angles)."""
    R = np.asarray(radii, dtype=float)[:, None]
    z = R * np.exp(1j * np.asarray(angles, dtype=float))[None, :]
    with np.errstate(all="ignore"):
        lg = logabs_of(f, z.ravel()).reshape(z.shape)
    if np.isnan(lg).any() or np.isposinf(lg).any():
        bad = z[~np.isfinite(lg) & ~np.isneginf(lg)][0]
        raise EvaluationError(f"function could not be evaluated at {complex(bad)!r}")
    return lg / R


def _sup(values):
    # zeros of f give -inf and are ignored
    finite = values[np.isfinite(values)]
    return float(finite.max()) if finite.size else -math.inf


def _sector_angles(sector, angular_mesh):
    t1, t2 = map(float, sector)
    if not t1 < t2:
        raise ParameterError("sector must have theta1 < theta2")
    if angular_mesh < 1:
        raise ParameterError("angular_mesh must be at least 1")
    return np.linspace(t1, t2, int(angular_mesh) + 1)


def exp_type(f, sector, sched: RadialSchedule = DEFAULT_SCHEDULE, angular_mesh: int = 32,
             tail_fraction: float = 0.25, angles=None) -> float:
    """``max(0, sup log|f(z)|/|z|)`` over the closed sector, outer radii only.

    ``angles`` overrides the uniform angular mesh (used for nested node sets).
    """
    if angles is None:
        angles = _sector_angles(sector, angular_mesh)
    return max(0.0, _sup(_log_ratio(f, angles, sched.tail(tail_fraction))))


def _ladder_angles(open_sector, margin, angular_mesh):
    t1, t2 = open_sector
    base = np.linspace(t1, t2, int(angular_mesh) + 1)
    lo, hi = t1 + margin, t2 - margin
    inner = base[(base > lo) & (base < hi)]
    return np.concatenate([[lo], inner, [hi]])


def inner_exp_type_ladder(f, open_sector, margin_ladder=(0.3, 0.1, 0.03), sched: RadialSchedule = DEFAULT_SCHEDULE,
                          angular_mesh: int = 64, tail_fraction: float = 0.25) -> list[tuple[float, float]]:
    """``(margin, exp_type on the closed subsector)`` for each margin.

    Subsector nodes are a fixed global mesh clipped to the subsector plus its
    two edges, so node sets grow as the margin shrinks.
    """
    t1, t2 = map(float, open_sector)
    if not t1 < t2:
        raise ParameterError("sector must have theta1 < theta2")
    margins = [float(m) for m in margin_ladder]
    if not margins:
        raise ParameterError("margin ladder is empty")
    if any(m <= 0 for m in margins) or any(b >= a for a, b in zip(margins, margins[1:])):
        raise ParameterError("margins must be positive and strictly decreasing")
    if margins[0] >= (t2 - t1) / 2:
        raise ParameterError("margin must be smaller than half the sector opening")
    return [(m, exp_type(f, None, sched, tail_fraction=tail_fraction,
                         angles=_ladder_angles((t1, t2), m, angular_mesh))) for m in margins]


def inner_exp_type(f, open_sector, margin_ladder=(0.3, 0.1, 0.03), sched: RadialSchedule = DEFAULT_SCHEDULE,
                   angular_mesh: int = 64, tail_fraction: float = 0.25) -> float:
    """Supremum of the exponential type over the closed subsectors of the ladder."""
    ladder = inner_exp_type_ladder(f, open_sector, margin_ladder, sched, angular_mesh, tail_fraction)
    return max(v for _, v in ladder)


def indicator_trace(f, theta, sched: RadialSchedule = DEFAULT_SCHEDULE):
    """``(R, log|f(R e^{i theta})|/R)`` over the whole schedule."""
    r = sched.radii()
    return r, _log_ratio(f, [theta], r)[:, 0]


def indicator(f, theta, sched: RadialSchedule = DEFAULT_SCHEDULE, tail_fraction: float = 0.25) -> float:
    """Running supremum of ``log|f(R e^{i theta})|/R`` over the outer radii."""
    return _sup(_log_ratio(f, [theta], sched.tail(tail_fraction)))


def max_modulus_log(f, radii, angular_mesh: int = 256):
    """``log max_{|z|=R} |f|`` sampled on an even mesh that contains 0 and pi."""
    n = int(angular_mesh) + int(angular_mesh) % 2
    angles = np.linspace(-math.pi, math.pi, n, endpoint=False)
    R = np.asarray(radii, dtype=float)
    with np.errstate(all="ignore"):
        lg = logabs_of(f, (R[:, None] * np.exp(1j * angles)[None, :]).ravel()).reshape(R.size, n)
    if np.isnan(lg).any():
        raise EvaluationError("function could not be evaluated on a sampling circle")
    return lg.max(axis=1)


def order_trace(f, sched: RadialSchedule = DEFAULT_SCHEDULE, angular_mesh: int = 256):
    """``(R, loglog M(R)/log R)``; radii with ``M(R) <= e`` or ``R <= 1`` give -inf."""
    _require_entire(f)
    r = sched.radii()
    logM = max_modulus_log(f, r, angular_mesh)
    with np.errstate(all="ignore"):
        out = np.where((logM > 0) & (r > 1), np.log(logM) / np.log(r), -np.inf)
    return r, out


def order_estimate(f, sched: RadialSchedule = DEFAULT_SCHEDULE, angular_mesh: int = 256,
                   tail_fraction: float = 0.25) -> float:
    """Running supremum of ``loglog M(R)/log R`` over the outer radii."""
    _require_entire(f)
    r = sched.tail(tail_fraction)
    logM = max_modulus_log(f, r, angular_mesh)
    keep = (logM > 0) & (r > 1)
    if not keep.any():
        return -math.inf
    return float(np.max(np.log(logM[keep]) / np.log(r[keep])))


def _require_entire(f):
    if getattr(f, "entire", True) is False:
        raise ParameterError("order is only defined for entire functions; this expression has cuts or poles")


class GrowthEstimator(BaseEstimator):
    """Bundle of the growth estimates of one function on one schedule.

    ``fit(f)`` samples ``f`` and stores a :class:`GrowthReport` in ``report_``.
    The order is skipped (``None``) for functions that are not entire.
    """

    def __init__(self, sector=(-math.pi / 2, math.pi / 2), r_min=1.0, r_max=200.0, count=64,
                 spacing="geometric", angular_mesh=64, tail_fraction=0.25, margins=(0.3, 0.1, 0.03),
                 indicator_angles=None):
        self.sector = sector
        self.r_min = r_min
        self.r_max = r_max
        self.count = count
        self.spacing = spacing
        self.angular_mesh = angular_mesh
        self.tail_fraction = tail_fraction
        self.margins = margins
        self.indicator_angles = indicator_angles

    def fit(self, f, y=None):
        sched = RadialSchedule(self.r_min, self.r_max, self.count, self.spacing)
        t1, t2 = map(float, self.sector)
        angles = self.indicator_angles
        if angles is None:
            # strictly inside the sector
            angles = np.linspace(t1, t2, 7)[1:-1]
        if any(not t1 < a < t2 for a in angles):
            raise ParameterError("indicator angles must lie strictly inside the sector")
        tf = self.tail_fraction
        self.et_estimate_ = exp_type(f, (t1, t2), sched, self.angular_mesh, tf)
        margins = [m for m in self.margins if m < (t2 - t1) / 2]
        self.iet_estimate_ = inner_exp_type(f, (t1, t2), margins, sched, self.angular_mesh, tf) if margins else 0.0
        self.indicator_samples_ = [(float(a), indicator(f, a, sched, tf)) for a in angles]
        entire = getattr(f, "entire", True)
        self.order_estimate_ = order_estimate(f, sched, 2 * self.angular_mesh, tf) if entire else None
        self.report_ = GrowthReport(self.et_estimate_, self.iet_estimate_, self.indicator_samples_,
                                    self.order_estimate_, sched, tf, (t1, t2))
        return self
