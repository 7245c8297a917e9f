"""Shared generators for randomized tests.

All randomness is seeded per test via the ``rng`` fixture so the suite is
fully reproducible.
"""

import numpy as np
import pytest

from shapespline import CubicSegment, DataPolygon, triple


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_segment(rng, box=2.0, h_range=(0.5, 2.0), min_sep=0.4):
    """Generic cubic segment with healthy chord and tangent magnitudes."""
    while True:
        p0 = rng.uniform(-box, box, 3)
        p3 = rng.uniform(-box, box, 3)
        if np.linalg.norm(p3 - p0) < min_sep:
            continue
        m0 = rng.uniform(-2 * box, 2 * box, 3)
        m1 = rng.uniform(-2 * box, 2 * box, 3)
        if min(np.linalg.norm(m0), np.linalg.norm(m1)) < min_sep:
            continue
        h = rng.uniform(*h_range)
        return CubicSegment(p0, p3, m0, m1, float(h))


def random_nonplanar_segment(rng, min_twist=0.05):
    """Segment whose torsion numerator is bounded away from zero."""
    while True:
        seg = random_segment(rng)
        t = triple(seg.m0, seg.chord, seg.m1)
        floor = (
            np.linalg.norm(seg.m0)
            * np.linalg.norm(seg.chord)
            * np.linalg.norm(seg.m1)
        )
        if abs(t) > min_twist * floor:
            return seg


def random_planar_segment(rng, box=2.0):
    """Segment lying exactly in the z = 0 plane."""
    seg = random_segment(rng)
    flat = lambda v: np.array([v[0], v[1], 0.0])
    return CubicSegment(flat(seg.p0), flat(seg.p3), flat(seg.m0), flat(seg.m1), seg.h)


def random_polygon(rng, n_points, box=2.0, min_sep=0.3):
    while True:
        pts = rng.uniform(-box, box, (n_points, 3))
        if np.min(np.linalg.norm(np.diff(pts, axis=0), axis=1)) > min_sep:
            try:
                return DataPolygon(pts)
            except ValueError:
                continue


def random_noncoplanar_polygon(rng, n_points, min_twist=0.05):
    """Polygon whose every interior span has a twist bounded away from 0."""
    while True:
        poly = random_polygon(rng, n_points)
        n = poly.n_segments
        ok = True
        for i in range(2, n):
            floor = (
                poly.chord_length(i - 1) * poly.chord_length(i) * poly.chord_length(i + 1)
            )
            if abs(poly.span_torsion(i)) < min_twist * floor:
                ok = False
                break
        if ok:
            return poly


def random_rotation(rng):
    """Haar-ish random rotation matrix via QR."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
