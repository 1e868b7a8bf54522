import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from conftest import regular_polygon
from qsteinitz.errors import EnumerationTooLarge
from qsteinitz.instances import experiment_instance
from qsteinitz.oracle import best_subset_radius
from qsteinitz.polytope import VPolytope
from qsteinitz.steinitz import select_vertices, steinitz_bound

UNIT_SQUARE = [[1, 1], [1, -1], [-1, 1], [-1, -1]]


def qhull_radius(P):
    try:
        hull = ConvexHull(P)
    except Exception:
        return 0.0
    return max(0.0, float((-hull.equations[:, -1]).min()))


def brute(P, k):
    k = min(k, len(P))
    return max(qhull_radius(P[list(S)]) for S in itertools.combinations(range(len(P)), k))


def test_square():
    Q = VPolytope(UNIT_SQUARE)
    r3 = best_subset_radius(Q, 3)
    assert r3.best_radius.squared == 0 and r3.best_indices == []
    assert r3.subsets_evaluated == 4 + 6 + 4
    r4 = best_subset_radius(Q, 4)
    assert r4.best_radius.squared == 1 and r4.best_indices == [0, 1, 2, 3]
    assert isinstance(r4.best_radius.squared, Fraction)


def test_inscribed_square_of_dodecagon():
    Q = VPolytope(regular_polygon(12, 1.2))
    for exact in (True, False):
        res = best_subset_radius(Q, 4, exact=exact)
        assert res.best_indices == [0, 3, 6, 9]
        assert res.best_radius.value == pytest.approx(1.2 * math.cos(math.pi / 4), abs=1e-12)


def test_matches_qhull_brute_force(rng):
    for _ in range(25):
        d = int(rng.integers(2, 4))
        n = int(rng.integers(d + 1, 9))
        P = rng.standard_normal((n, d)) * 2
        k = int(rng.integers(d + 1, 2 * d + 1))
        res = best_subset_radius(VPolytope(P, merge=False), k)
        assert res.best_radius.value == pytest.approx(brute(P, k), abs=1e-9)


def test_dominates_pipeline():
    for i in range(4):
        Q = experiment_instance(3, 2, i, max_facets=7)
        res = best_subset_radius(Q, 4)
        assert res.best_radius >= select_vertices(Q).certified_radius
        assert res.best_radius >= steinitz_bound(2)


def test_cap():
    Q = VPolytope(np.random.default_rng(0).standard_normal((60, 3)))
    with pytest.raises(EnumerationTooLarge):
        best_subset_radius(Q, 6)


def test_one_dimension():
    res = best_subset_radius(VPolytope([[-1], [1], [2]], dim=1), 2)
    assert res.best_indices == [0, 1] and res.best_radius.squared == 1
