import math

import numpy as np
import pytest

from twr_holonomy.errors import DomainError
from twr_holonomy.lorentz import minkowski_dot
from twr_holonomy.paths import (
    CircleArc,
    GeodesicSegment,
    PathSpec,
    SampledCurve,
    circle_path,
    geodesic_between,
    geodesic_distance,
)
from twr_holonomy.shell import ShellPoint, christoffel_array, embed

REST = np.array([1.0, 0, 0, 0])
B = np.array([1.25, 0.75, 0, 0])


def on_shell_residual(p, m):
    return np.abs(minkowski_dot(p, p) - m * m) / np.maximum(1.0, p[..., 0] ** 2)


def test_constant_geodesic():
    pts = geodesic_between(B, B, 1.0, 10)
    np.testing.assert_allclose(pts, np.tile(B, (11, 1)), atol=0)


def test_geodesic_midpoint_planar():
    pts = geodesic_between(REST, B, 1.0, 2)
    mid = pts[1]
    assert minkowski_dot(mid, mid) == pytest.approx(1.0, abs=1e-14)
    assert mid[2] == 0 and mid[3] == 0
    np.testing.assert_allclose(pts[0], REST, atol=1e-15)
    np.testing.assert_allclose(pts[-1], B, atol=1e-15)


def test_geodesic_samples_on_shell(rng):
    for _ in range(20):
        m = rng.uniform(0.2, 4.0)
        a = embed(ShellPoint(rng.uniform(0, 5), rng.uniform(0, math.pi), rng.uniform(0, 6)), m)
        b = embed(ShellPoint(rng.uniform(0, 5), rng.uniform(0, math.pi), rng.uniform(0, 6)), m)
        pts = geodesic_between(a, b, m, 200)
        assert on_shell_residual(pts, m).max() < 1e-12
        np.testing.assert_allclose(pts[-1], b, rtol=1e-12, atol=1e-12)


def test_geodesic_far_apart_stays_finite():
    m = 1.0
    b = embed(ShellPoint(1e12, 1.0, 2.0), m)
    c = embed(ShellPoint(1e12, 2.0, 5.0), m)
    assert geodesic_distance(REST, b, m) > 20
    for start, end in ((REST, b), (b, c)):
        pts = geodesic_between(start, end, m, 50)
        assert np.all(np.isfinite(pts))
        # endpoints this far out are themselves on-shell only to ~eps * p0^2, so
        # the samples inherit an error of order eps * p0 * max(endpoint p0)
        scale = pts[:, 0] * max(start[0], end[0])
        resid = np.abs(minkowski_dot(pts, pts) - m * m)
        assert np.all(resid <= 1e-13 * scale)
        np.testing.assert_allclose(pts[-1], end, rtol=1e-12)


def test_geodesic_equation_residual():
    m = 1.0
    a = embed(ShellPoint(0.8, 1.0, 0.3), m)
    b = embed(ShellPoint(1.9, 2.0, 2.1), m)
    piece = GeodesicSegment(a, b).pieces(m)[0]
    t = np.linspace(0.05, 0.95, 19)
    h = 1e-5
    z, zdot = piece.chart(t)

    def diff(step):
        return (piece.chart(t + step)[1] - piece.chart(t - step)[1]) / (2 * step)

    zdd = (4 * diff(h) - diff(2 * h)) / 3
    gam = christoffel_array(z[:, 0], z[:, 1], m)
    residual = zdd + np.einsum("nijk,nj,nk->ni", gam, zdot, zdot)
    assert np.abs(residual).max() < 1e-6


def test_geodesic_distance_matches_rapidity():
    # rest to the V = 0.6 point: rapidity atanh(0.6)
    assert geodesic_distance(REST, B, 1.0) == pytest.approx(math.atanh(0.6), abs=1e-15)


def test_geodesic_requires_on_shell():
    with pytest.raises(DomainError):
        geodesic_between(REST, (1.0, 0.5, 0, 0), 1.0, 5)
    with pytest.raises(DomainError):
        geodesic_between(REST, B, 1.0, 0)


def test_circle_path_length_and_closure():
    path = circle_path(0.75, 1.0, 100)
    assert path.closed
    path.validate()
    assert path.length() == pytest.approx(2 * math.pi * 0.75, rel=1e-15)
    np.testing.assert_allclose(path.start_point(), path.end_point(), atol=1e-15)


def test_path_validation():
    a, b = ShellPoint(1.0, 1.0, 0.0), ShellPoint(1.0, 1.0, 1.0)
    with pytest.raises(DomainError, match="segment 0 ends"):
        PathSpec(1.0, [GeodesicSegment(a, b), GeodesicSegment(a, b)]).validate()
    with pytest.raises(DomainError, match="closed"):
        PathSpec(1.0, [GeodesicSegment(a, b)], closed=True).validate()
    PathSpec(1.0, [GeodesicSegment(a, b), GeodesicSegment(b, a)], closed=True).validate()
    with pytest.raises(DomainError):
        PathSpec(0.0, [GeodesicSegment(a, b)])
    with pytest.raises(DomainError):
        PathSpec(1.0, [])
    with pytest.raises(DomainError):
        PathSpec(1.0, [GeodesicSegment(a, b)], steps_per_segment=0)
    with pytest.raises(DomainError):
        PathSpec(1.0, [CircleArc(-1.0, 1.0, 0, 1)]).validate()
    with pytest.raises(DomainError):
        SampledCurve((tuple(REST),)).pieces(1.0)


def test_step_allocation():
    pts = tuple(tuple(embed(ShellPoint(1.0, 1.0, p), 1.0)) for p in (0.0, 1.0, 2.0, 3.0))
    path = PathSpec(1.0, [SampledCurve(pts), CircleArc(1.0, 1.0, 3.0, 4.0, steps=7)], steps_per_segment=30)
    # the three chords of the sampled curve form one piece; counts are per chord
    assert [(pc.count, n) for pc, n in path.pieces_with_steps()] == [(3, 10), (1, 7)]
    assert [n for _, n in path.pieces_with_steps(divisor=2)] == [5, 3]
    assert [n for _, n in path.pieces_with_steps(steps=3)] == [1, 3]
    assert path.total_steps() == 37 and path.total_steps(steps=3) == 6


def test_sampled_chords_match_single_segments():
    pts = [embed(ShellPoint(*q), 1.0) for q in ((1.0, 1.0, 0.0), (2.0, 1.2, 0.5), (2.0, 1.2, 0.5), (0.3, 2.0, 3.0))]
    bundle = SampledCurve(tuple(map(tuple, pts))).pieces(1.0)[0]
    t = np.linspace(0, 1, 5)
    p, pdot = bundle.ambient(t)
    for k in range(3):
        single = GeodesicSegment(pts[k], pts[k + 1]).pieces(1.0)[0].ambient(t)
        np.testing.assert_allclose(p[5 * k:5 * k + 5], single[0], atol=1e-14)
        np.testing.assert_allclose(pdot[5 * k:5 * k + 5], single[1], atol=1e-14)
    # the repeated sample is a zero-length chord
    np.testing.assert_array_equal(pdot[5:10], 0.0)


def test_four_vector_and_chart_endpoints_agree():
    seg_chart = GeodesicSegment((0.75, math.pi / 2, 0.0), (1.0, 1.0, 1.0)).pieces(1.0)[0]
    seg_vec = GeodesicSegment(B, embed(ShellPoint(1.0, 1.0, 1.0), 1.0)).pieces(1.0)[0]
    t = np.linspace(0, 1, 7)
    np.testing.assert_allclose(seg_chart.ambient(t)[0], seg_vec.ambient(t)[0], atol=1e-15)
