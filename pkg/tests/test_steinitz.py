import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from conftest import random_unit, regular_polygon
from qsteinitz.errors import InputLacksUnitBall
from qsteinitz.instances import experiment_instance
from qsteinitz.polytope import VPolytope
from qsteinitz.steinitz import (certify, check_contains_unit_ball, finite_subset_cover,
                                general_bound, select_from_points, select_vertices, steinitz_bound)

SQRT2_SQUARE = math.sqrt(2) * np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]])


def hull_inradius(P):
    """Origin-centered inradius straight from Qhull facets (0 if not interior)."""
    try:
        return max(0.0, float((-ConvexHull(P).equations[:, -1]).min()))
    except Exception:
        return 0.0


def test_bounds():
    assert steinitz_bound(2) == Fraction(1, 20)
    assert steinitz_bound(1) == 1
    assert general_bound(3) == Fraction(1, 54)


def test_scaled_square_keeps_everything():
    sel = select_vertices(VPolytope(SQRT2_SQUARE))
    assert sel.indices == [0, 1, 2, 3]
    assert sel.certified_radius.value == pytest.approx(math.sqrt(2))
    assert sel.certified_radius >= Fraction(1, 20)


def test_dimension_one_is_exact():
    for Q in (VPolytope([[-1.0], [1.0]], dim=1), VPolytope([[-1], [1]], dim=1).to_exact()):
        sel = select_vertices(Q)
        assert sel.indices == [0, 1]
        assert sel.certified_radius.squared == 1


def test_cube_in_three_dimensions():
    cube = math.sqrt(3) * np.array([[x, y, z] for x in (1, -1) for y in (1, -1) for z in (1, -1)], dtype=float)
    sel = select_vertices(VPolytope(cube))
    assert sel.size <= 6
    assert sel.certified_radius >= steinitz_bound(3)


def test_rejects_polytope_without_unit_ball():
    with pytest.raises(InputLacksUnitBall):
        select_vertices(VPolytope(regular_polygon(6, 1.0)))
    ok, margin = check_contains_unit_ball(VPolytope(regular_polygon(6, 1.0)))
    assert not ok and margin == pytest.approx(math.cos(math.pi / 6) - 1)


def test_trail_records_intermediate_checks():
    sel = select_vertices(VPolytope(regular_polygon(12, 1.2)))
    t = sel.trail
    assert t["k_max_vertex_norm"] <= 1 + 1e-9
    assert t["l_inradius"] >= 0.5 - 1e-9
    assert t["center_margin"] >= -1e-9
    assert t["certificate"].min_margin >= -1e-9
    assert t["certificate"].origin_in_selection
    assert 1 / sel.certified_radius.value <= t["polar_norm_bound"]
    d = sel.to_dict()
    assert d["trail"]["certificate"]["selected"] is not None


def test_random_instances_recertified_independently():
    for d in (2, 3, 4):
        for i in range(8):
            Q = experiment_instance(7, d, i)
            sel = select_vertices(Q)
            assert sel.size <= 2 * d
            r = hull_inradius(Q.points[sel.indices])
            assert abs(r - sel.certified_radius.value) < 1e-9
            assert r >= float(steinitz_bound(d)) - 1e-9


def test_certify_exact_subset():
    Q = VPolytope([[2, 2], [2, -2], [-2, 2], [-2, -2]]).to_exact()
    assert certify(Q, [0, 1, 2, 3]).squared == 4
    assert certify(Q, [0, 1, 2]).squared == 0


def test_finite_subset_cover_contains_shrunken_ball(rng):
    for d, n, eps in ((2, 400, 0.1), (2, 400, 0.05), (3, 1500, 1 / 6)):
        X = random_unit(rng, n, d) * 1.3
        if d == 2:
            X = regular_polygon(n, 1.05)
        idx = finite_subset_cover(X, eps)
        assert len(idx) < len(X)
        assert hull_inradius(X[idx]) >= 1 - eps - 1e-9


def test_select_from_points(rng):
    X = regular_polygon(300, 1.02)
    sel = select_from_points(X, eps=0.1)
    assert sel.size <= 4
    assert hull_inradius(X[sel.indices]) >= float(general_bound(2)) - 1e-9
    with pytest.raises(ValueError):
        select_from_points(X, eps=0.2)
