import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_unit, regular_polygon
from qsteinitz import linalg
from qsteinitz.centers import centroid, steinitz_center, verify_center
from qsteinitz.errors import DegenerateBody
from qsteinitz.polytope import HPolytope, VPolytope, extreme_points, origin_interior, polar_v_to_h, vertex_enum


def shoelace_centroid(P):
    """Area centroid of a convex polygon, vertices sorted by angle."""
    c0 = P.mean(axis=0)
    P = P[np.argsort(np.arctan2(P[:, 1] - c0[1], P[:, 0] - c0[0]))]
    x, y = P[:, 0], P[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = cross.sum() / 2
    return np.array([((x + xn) * cross).sum(), ((y + yn) * cross).sum()]) / (6 * area)


def random_h_body(rng, d):
    while True:
        m = int(rng.integers(d + 1, 3 * d + 4))
        V = random_unit(rng, m, d) / rng.uniform(1.0, 2.0, size=(m, 1))
        if origin_interior(V):
            return HPolytope(V)


def test_triangle_centroid_exact():
    T = VPolytope([[1, 0], [0, 1], [-1, -1]]).to_exact()
    c = centroid(T)
    assert list(c) == [0, 0]
    T = VPolytope([[0, 0], [3, 0], [0, 3]]).to_exact()
    assert list(centroid(T)) == [1, 1]


def test_segment_and_degenerate():
    assert centroid(VPolytope([[-1], [3]], dim=1))[0] == 1
    with pytest.raises(DegenerateBody):
        centroid(VPolytope([[0, 0], [1, 1], [2, 2]]))


def test_polygon_centroid_matches_shoelace(rng):
    for _ in range(100):
        P = extreme_points(VPolytope(rng.standard_normal((int(rng.integers(3, 12)), 2)))).points
        if len(P) < 3:
            continue
        assert np.allclose(centroid(VPolytope(P)), shoelace_centroid(P), atol=1e-9)


def test_exact_and_qhull_centroids_agree(rng):
    for _ in range(20):
        d = int(rng.integers(2, 4))
        P = VPolytope(rng.integers(-5, 6, size=(int(rng.integers(d + 2, 9)), d)).astype(float))
        if linalg.rank(P.points[1:] - P.points[0]) < d:
            continue
        ce = centroid(P.to_exact())
        assert linalg.is_exact(ce)
        assert np.allclose(linalg.as_float(ce), centroid(P, method="qhull"), atol=1e-9)
        assert np.allclose(centroid(P, method="triangulate"), centroid(P, method="qhull"), atol=1e-9)


def test_centroid_monte_carlo(rng):
    for d in (3, 4):
        K = random_h_body(rng, d)
        V = vertex_enum(K).points
        lo, hi = V.min(axis=0), V.max(axis=0)
        X = rng.uniform(lo, hi, size=(400_000, d))
        inside = X[K.contains_many(X)]
        mc = inside.mean(axis=0)
        se = inside.std(axis=0) / math.sqrt(len(inside))
        assert np.all(np.abs(centroid(VPolytope(V)) - mc) < 6 * se + 1e-9)


def test_simplex_is_the_equality_case():
    for d in range(2, 6):
        # regular-ish simplex: standard basis plus the negative all-ones direction
        V = np.vstack([np.eye(d), -np.ones((1, d))])
        K = polar_v_to_h(VPolytope(V))
        verts = vertex_enum(K)
        c = centroid(verts)
        check = verify_center(K, c, d)
        assert check.holds and abs(check.margin) <= 1e-6
        assert not verify_center(K, c, d - 0.01).holds


def test_exact_simplex_margin_is_zero():
    K = HPolytope([[1, 0], [0, 1], [-1, -1]]).to_exact()
    c = centroid(vertex_enum(K))
    check = verify_center(K, c, 2)
    assert check.holds and check.margin == 0
    assert verify_center(K, c, Fraction(19, 10)).margin < 0


def test_vertex_based_check_agrees_with_lp(rng):
    for _ in range(30):
        d = int(rng.integers(2, 5))
        K = random_h_body(rng, d)
        verts = vertex_enum(K)
        c = centroid(verts)
        a = verify_center(K, c, d)
        b = verify_center(K, c, d, vertices=verts.points)
        assert a.holds and b.holds
        assert abs(a.margin - b.margin) < 1e-8


def test_symmetric_body_has_room():
    K = HPolytope(regular_polygon(8, 0.5))
    body = steinitz_center(K)
    assert np.allclose(body.center, 0, atol=1e-12)
    # centrally symmetric: K - c = -(K - c), so the slack at lambda = d is 1 - 1/d
    assert body.margin == pytest.approx(0.5, abs=1e-9)
    assert body.contraction == 2
