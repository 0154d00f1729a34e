"""Curves on the mass shell: circle arcs, geodesic segments and sampled polylines.

Every segment reduces to *pieces*, each parameterized by t in [0, 1] and able to
report ambient position/velocity ``(p, dp/dt)`` and chart position/velocity
``(z, dz/dt)`` at arrays of parameter values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import DomainError
from .lorentz import DEFAULT_TOL, is_on_shell, minkowski_dot
from .shell import ShellPoint, chart_coordinates, chart_velocity, embed

Endpoint = Union[ShellPoint, Sequence[float], np.ndarray]

#: endpoints of consecutive segments may differ by this much (relative to p0)
JOIN_TOL = 1e-9


def _sinh_ratio(t, d):
    """sinh(t d) / sinh(d) without overflow for large d (d > 0, broadcasts)."""
    t, d = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(d, dtype=float))
    small = np.minimum(d, 20.0)
    large = np.maximum(d, 20.0)
    direct = np.sinh(t * small) / np.sinh(small)
    scaled = np.exp((t - 1.0) * large) * (-np.expm1(-2.0 * t * large)) / (-np.expm1(-2.0 * large))
    return np.where(d < 20.0, direct, scaled)


def _cosh_ratio(t, d):
    """cosh(t d) / sinh(d) without overflow for large d (d > 0, broadcasts)."""
    t, d = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(d, dtype=float))
    small = np.minimum(d, 20.0)
    large = np.maximum(d, 20.0)
    direct = np.cosh(t * small) / np.sinh(small)
    scaled = np.exp((t - 1.0) * large) * (1.0 + np.exp(-2.0 * t * large)) / (-np.expm1(-2.0 * large))
    return np.where(d < 20.0, direct, scaled)


def _distances(ua, ub) -> np.ndarray:
    # 2 sinh(d/2) = |ua - ub| keeps precision for nearby points
    diff = ua - ub
    chord2 = np.maximum(-minkowski_dot(diff, diff), 0.0)
    return 2.0 * np.arcsinh(0.5 * np.sqrt(chord2))


def geodesic_distance(a, b, m: float) -> float:
    """Intrinsic distance between shell points in units of the curvature radius m."""
    return float(_distances(np.asarray(a, dtype=float) / m, np.asarray(b, dtype=float) / m))


class _GeodesicPiece:
    """One geodesic chord, or ``count`` chords evaluated together.

    Outputs are flattened chord-major: shape (count * len(t), 4).
    """

    def __init__(self, a, b, m: float):
        self.m = m
        self.ua = np.atleast_2d(np.asarray(a, dtype=float)) / m
        self.ub = np.atleast_2d(np.asarray(b, dtype=float)) / m
        self.count = len(self.ua)
        self.d = _distances(self.ua, self.ub)

    def ambient(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        moving = self.d > 0.0
        d = np.where(moving, self.d, 1.0)[:, None]
        fa, fb = _sinh_ratio(1.0 - t, d), _sinh_ratio(t, d)
        ga, gb = _cosh_ratio(1.0 - t, d), _cosh_ratio(t, d)
        ua, ub = self.ua[:, None, :], self.ub[:, None, :]
        p = self.m * (fa[..., None] * ua + fb[..., None] * ub)
        pdot = self.m * d[..., None] * (-ga[..., None] * ua + gb[..., None] * ub)
        # zero-length chords sit still
        p = np.where(moving[:, None, None], p, self.m * ua)
        pdot = np.where(moving[:, None, None], pdot, 0.0)
        return p.reshape(-1, 4), pdot.reshape(-1, 4)

    def chart(self, t):
        p, pdot = self.ambient(t)
        return chart_coordinates(p), chart_velocity(p, pdot)

    @property
    def length(self) -> float:
        return float(self.m * self.d.sum())


class _CirclePiece:
    def __init__(self, rho, theta, phi_start, phi_end, m):
        self.rho, self.theta, self.m = float(rho), float(theta), m
        self.phi0, self.dphi = float(phi_start), float(phi_end) - float(phi_start)

    count = 1

    def ambient(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        phi = self.phi0 + t * self.dphi
        rs = self.rho * math.sin(self.theta)
        p = np.empty(t.shape + (4,))
        p[:, 0] = math.hypot(self.m, self.rho)
        p[:, 1] = rs * np.cos(phi)
        p[:, 2] = rs * np.sin(phi)
        p[:, 3] = self.rho * math.cos(self.theta)
        pdot = np.zeros_like(p)
        pdot[:, 1] = -rs * np.sin(phi) * self.dphi
        pdot[:, 2] = rs * np.cos(phi) * self.dphi
        return p, pdot

    def chart(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        z = np.empty(t.shape + (3,))
        z[:, 0] = self.rho
        z[:, 1] = self.theta
        z[:, 2] = self.phi0 + t * self.dphi
        zdot = np.zeros_like(z)
        zdot[:, 2] = self.dphi
        return z, zdot

    @property
    def length(self) -> float:
        return abs(self.rho * math.sin(self.theta) * self.dphi)


@dataclass(frozen=True)
class CircleArc:
    """Curve of constant (rho, theta); phi runs from phi_start to phi_end (increasing = positive)."""

    rho: float
    theta: float
    phi_start: float
    phi_end: float
    steps: int | None = None

    def pieces(self, m: float):
        if self.rho < 0:
            raise DomainError(f"circle radius rho must be >= 0, got {self.rho}")
        return [_CirclePiece(self.rho, self.theta, self.phi_start, self.phi_end, m)]


def _resolve(point: Endpoint, m: float) -> np.ndarray:
    if isinstance(point, ShellPoint):
        return embed(point, m)
    arr = np.asarray(point, dtype=float)
    if arr.shape == (3,):
        return embed(ShellPoint(*arr), m)
    if arr.shape != (4,):
        raise DomainError(f"endpoint must be chart (rho, theta, phi) or a four-vector, got shape {arr.shape}")
    if not is_on_shell(arr, m):
        raise DomainError(f"endpoint {arr} is not on the mass shell m = {m}")
    return arr


@dataclass(frozen=True)
class GeodesicSegment:
    start: Endpoint
    end: Endpoint
    steps: int | None = None

    def pieces(self, m: float):
        return [_GeodesicPiece(_resolve(self.start, m), _resolve(self.end, m), m)]


@dataclass(frozen=True)
class SampledCurve:
    """On-shell samples joined by geodesic chords (a single piece covering all chords)."""

    points: tuple
    steps: int | None = None

    def pieces(self, m: float):
        if len(self.points) < 2:
            raise DomainError("a sampled curve needs at least two points")
        pts = np.array([_resolve(p, m) for p in self.points])
        return [_GeodesicPiece(pts[:-1], pts[1:], m)]


Segment = Union[CircleArc, GeodesicSegment, SampledCurve]


@dataclass
class PathSpec:
    mass: float
    segments: list = field(default_factory=list)
    steps_per_segment: int = 1000
    closed: bool = False

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if int(self.steps_per_segment) < 1:
            raise DomainError("steps_per_segment must be a positive integer")
        self.steps_per_segment = int(self.steps_per_segment)
        if not self.segments:
            raise DomainError("a path needs at least one segment")
        for k, seg in enumerate(self.segments):
            if seg.steps is not None and int(seg.steps) < 1:
                raise DomainError(f"segment {k}: steps must be a positive integer")

    def segment_steps(self, seg, steps: int | None = None) -> int:
        if steps is not None:
            return int(steps)
        return int(seg.steps) if seg.steps is not None else self.steps_per_segment

    def pieces_with_steps(self, steps: int | None = None, divisor: int = 1):
        """(piece, n_steps) pairs, n_steps counted per chord of the piece.

        ``steps`` overrides every per-segment count; ``divisor`` coarsens all of
        them (used for step-halving error estimates). Sampled curves share their
        budget among chords.
        """
        out = []
        for seg in self.segments:
            n = max(1, self.segment_steps(seg, steps) // divisor)
            for pc in seg.pieces(self.mass):
                out.append((pc, max(1, math.ceil(n / pc.count))))
        return out

    def total_steps(self, steps: int | None = None) -> int:
        return sum(pc.count * n for pc, n in self.pieces_with_steps(steps))

    def validate(self, tol: float = JOIN_TOL) -> None:
        pcs = [pc for seg in self.segments for pc in seg.pieces(self.mass)]
        ends = [(pc.ambient(0.0)[0][0], pc.ambient(1.0)[0][-1]) for pc in pcs]
        for k, ((_, b), (a, _)) in enumerate(zip(ends[:-1], ends[1:])):
            if np.abs(a - b).max() > tol * max(1.0, abs(b[0])):
                raise DomainError(f"segment {k} ends at {b} but segment {k + 1} starts at {a}")
        if self.closed:
            first, last = ends[0][0], ends[-1][1]
            if np.abs(first - last).max() > tol * max(1.0, abs(first[0])):
                raise DomainError(f"path is flagged closed but starts at {first} and ends at {last}")

    def start_point(self) -> np.ndarray:
        return self.segments[0].pieces(self.mass)[0].ambient(0.0)[0][0]

    def end_point(self) -> np.ndarray:
        return self.segments[-1].pieces(self.mass)[-1].ambient(1.0)[0][-1]

    def length(self) -> float:
        return sum(pc.length for seg in self.segments for pc in seg.pieces(self.mass))


def geodesic_between(a, b, m: float, steps: int) -> np.ndarray:
    """``steps + 1`` samples of the geodesic from a to b (rows are four-vectors)."""
    if steps < 1:
        raise DomainError("steps must be >= 1")
    a, b = _resolve(a, m), _resolve(b, m)
    if minkowski_dot(a, b) <= 0:
        raise DomainError("endpoints must both be future-pointing")
    p, _ = _GeodesicPiece(a, b, m).ambient(np.linspace(0.0, 1.0, steps + 1))
    return p


def circle_path(rho0: float, m: float, steps: int = 10_000, theta: float = math.pi / 2) -> PathSpec:
    """The closed loop (rho0, theta, tau), tau in [0, 2 pi]."""
    return PathSpec(m, [CircleArc(rho0, theta, 0.0, 2.0 * math.pi)], steps, closed=True)


def triangle_path(pa, pb, pc, m: float, steps: int) -> PathSpec:
    return PathSpec(
        m,
        [GeodesicSegment(pa, pb), GeodesicSegment(pb, pc), GeodesicSegment(pc, pa)],
        steps,
        closed=True,
    )


__all__ = [
    "CircleArc",
    "GeodesicSegment",
    "SampledCurve",
    "PathSpec",
    "geodesic_between",
    "geodesic_distance",
    "circle_path",
    "triangle_path",
    "DEFAULT_TOL",
]
