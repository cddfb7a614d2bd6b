"""Integration paths: rays, circular arcs and segments, and the fixed families
built from them.

Arcs are parameterised by angle and rays by arclength.  Unbounded rays have
no intrinsic end; the truncation radius is supplied when integrating, since
the right cut-off depends on how fast the integrand decays.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .exceptions import ParameterError
from .quadrature import IntegralResult, integrate

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Ray:
    """``{t*exp(i*theta): t >= r_start}``, traversed outward or inward."""

    r_start: float
    theta: float
    direction: str = "outward"
    kind: str = field(default="ray", init=False)

    def __post_init__(self):
        if not self.r_start > 0:
            raise ParameterError("ray start radius must be positive")
        if self.direction not in ("outward", "inward"):
            raise ParameterError(f"unknown ray direction {self.direction!r}")

    @property
    def sign(self) -> int:
        return 1 if self.direction == "outward" else -1

    @property
    def unit(self) -> complex:
        return complex(np.cos(self.theta), np.sin(self.theta))

    @property
    def start(self) -> complex:
        return self.r_start * self.unit

    def point(self, s):
        """Point at distance ``s`` from the finite end."""
        return (self.r_start + np.asarray(s)) * self.unit

    def derivative(self, s):
        return np.full(np.shape(s), self.unit, dtype=complex)

    def integrate(self, f, truncation, **kw) -> IntegralResult:
        """``int f(zeta) dzeta`` along the oriented ray cut at radius ``truncation``."""
        if truncation <= self.r_start:
            raise ParameterError("truncation radius must exceed the ray start")
        u = self.unit
        res = integrate(lambda s: _scale(f(self.point(s)), u), 0.0, truncation - self.r_start, **kw)
        return res._replace(value=self.sign * res.value)


@dataclass(frozen=True)
class Arc:
    """Circular arc ``radius*exp(i*t)`` for ``t`` from ``theta_from`` to ``theta_to``.

    Angles are kept unreduced, so a full circle is ``(a, a + 2*pi)`` and the
    orientation is ``ccw`` exactly when ``theta_to > theta_from``.
    """

    radius: float
    theta_from: float
    theta_to: float
    kind: str = field(default="arc", init=False)

    def __post_init__(self):
        if not self.radius > 0:
            raise ParameterError("arc radius must be positive")
        if self.theta_from == self.theta_to:
            raise ParameterError("arc must have nonzero angular extent")

    @property
    def orientation(self) -> str:
        return "ccw" if self.theta_to > self.theta_from else "cw"

    @property
    def extent(self) -> float:
        return abs(self.theta_to - self.theta_from)

    @property
    def start(self) -> complex:
        return complex(self.radius * np.exp(1j * self.theta_from))

    @property
    def end(self) -> complex:
        return complex(self.radius * np.exp(1j * self.theta_to))

    def point(self, t):
        return self.radius * np.exp(1j * np.asarray(t))

    def derivative(self, t):
        return 1j * self.radius * np.exp(1j * np.asarray(t))

    def integrate(self, f, **kw) -> IntegralResult:
        def h(t):
            return _scale(f(self.point(t)), self.derivative(t))

        return integrate(h, self.theta_from, self.theta_to, **kw)


@dataclass(frozen=True)
class Segment:
    start: complex
    end: complex
    kind: str = field(default="segment", init=False)

    def point(self, t):
        return self.start + np.asarray(t) * (self.end - self.start)

    def derivative(self, t):
        return np.full(np.shape(t), self.end - self.start, dtype=complex)

    def integrate(self, f, **kw) -> IntegralResult:
        d = self.end - self.start
        return integrate(lambda t: _scale(f(self.point(t)), d), 0.0, 1.0, **kw)


def _scale(values, factor):
    values = np.asarray(values)
    factor = np.asarray(factor)
    if values.ndim == 2 and factor.ndim == 1:
        return values * factor[:, None]
    return values * factor


def _endpoints(piece):
    """(start, end) of a piece; ``None`` stands for the point at infinity."""
    if isinstance(piece, Ray):
        return (piece.start, None) if piece.direction == "outward" else (None, piece.start)
    return piece.start, piece.end


@dataclass(frozen=True)
class Contour:
    pieces: tuple
    label: str = ""

    def __post_init__(self):
        for prev, nxt in zip(self.pieces, self.pieces[1:]):
            end, start = _endpoints(prev)[1], _endpoints(nxt)[0]
            if end is None or start is None:
                if end is not start:
                    raise ParameterError(f"{self.label}: pieces do not join")
                continue
            if abs(end - start) > 1e-12 * max(1.0, abs(end)):
                raise ParameterError(f"{self.label}: gap of {abs(end - start):g} between pieces")

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)

    def to_dict(self) -> dict:
        out = []
        for p in self.pieces:
            d = asdict(p)
            for k, v in list(d.items()):
                if isinstance(v, complex):
                    d[k] = [v.real, v.imag]
            if isinstance(p, Arc):
                d["orientation"] = p.orientation
            out.append(d)
        return {"label": self.label, "pieces": out}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def integrate(self, f, truncation=None, **kw) -> IntegralResult:
        """Sum of piece integrals; rays need ``truncation``."""
        value, error, ok, n = 0.0, 0.0, True, 0
        for p in self.pieces:
            if isinstance(p, Ray):
                if truncation is None:
                    raise ParameterError("contour has rays: a truncation radius is required")
                r = p.integrate(f, truncation, **kw)
            else:
                r = p.integrate(f, **kw)
            value = value + r.value
            error = error + r.error
            ok = ok and r.converged
            n += r.intervals
        return IntegralResult(value, error, ok, n)


def gamma_m_contour(m: int, theta: float) -> Contour:
    """Boundary of the sector ``|arg| <= theta`` minus the disc of radius m + 1/2.

    Oriented positively with respect to the unbounded region: in along the
    ray at ``+theta``, clockwise along the arc, out along the ray at
    ``-theta``.
    """
    if int(m) != m or m < 0:
        raise ParameterError(f"m must be a non-negative integer, got {m!r}")
    if not 0 < theta < np.pi / 2:
        raise ParameterError(f"theta must lie in (0, pi/2), got {theta!r}")
    rho = m + 0.5
    return Contour(
        (Ray(rho, theta, "inward"), Arc(rho, theta, -theta), Ray(rho, -theta, "outward")),
        label=f"Gamma_{m}",
    )


def deformed_boundary(r: float, delta: float) -> Contour:
    """Boundary of ``(C minus the sector |arg| <= delta)`` union ``r*D``, negatively oriented."""
    if not 0 < r < 1:
        raise ParameterError(f"r must lie in (0, 1), got {r!r}")
    if not 0 < delta < np.pi:
        raise ParameterError(f"delta must lie in (0, pi), got {delta!r}")
    return Contour(
        (Ray(r, delta, "inward"), Arc(r, delta, -delta), Ray(r, -delta, "outward")),
        label="deformed",
    )


def interpolant_contour(r: float, theta: float) -> tuple[Contour, Contour]:
    """Inward ray plus the full positive circle, and the outward ray, at angle ``theta``."""
    if not r > 0:
        raise ParameterError(f"r must be positive, got {r!r}")
    if not -np.pi <= theta < np.pi:
        raise ParameterError(f"theta must lie in [-pi, pi), got {theta!r}")
    first = Contour((Ray(r, theta, "inward"), Arc(r, theta, theta + TWO_PI)), label="ray-in+circle")
    second = Contour((Ray(r, theta, "outward"),), label="ray-out")
    return first, second


def winding_number(contour: Contour, point: complex, truncation: float = 1e6, n: int = 20001) -> float:
    """Winding number about ``point`` from the accumulated change of argument.

    Rays are truncated and the contour is closed by the large arc through
    the side that does not contain the point.
    """
    zs = []
    for p in contour.pieces:
        if isinstance(p, Ray):
            s = np.linspace(0.0, truncation - p.r_start, n)
            pts = p.point(s)
            zs.append(pts if p.direction == "outward" else pts[::-1])
        else:
            zs.append(p.point(np.linspace(0, 1, n) * (p.theta_to - p.theta_from) + p.theta_from)
                      if isinstance(p, Arc) else p.point(np.linspace(0, 1, n)))
    path = np.concatenate(zs)
    if abs(path[-1] - path[0]) > 1e-9:
        a0, a1 = np.angle(path[-1]), np.angle(path[0])
        # close through the short way round at large radius (ccw from end to start)
        sweep = (a1 - a0) % TWO_PI
        t = a0 + np.linspace(0, sweep, n)
        path = np.concatenate([path, truncation * np.exp(1j * t)])
    w = np.angle(path - point)
    dw = np.diff(np.unwrap(np.append(w, w[0])))
    return float(dw.sum() / TWO_PI)
