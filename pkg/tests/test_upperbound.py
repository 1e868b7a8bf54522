import math

import numpy as np
import pytest

from conftest import random_unit
from qsteinitz.errors import SpanFailure
from qsteinitz.polytope import HPolytope, inscribed_radius_origin, vertex_enum
from qsteinitz.upperbound import (UnitVectorSystem, gram_operator, no_ball_certificate,
                                  strip_vertex_maximize, witness)


def test_strip_maximization_examples():
    p = strip_vertex_maximize(np.eye(2), np.eye(2))
    assert p @ p == pytest.approx(2.0)
    T = np.diag([3.0, 1.0])
    p = strip_vertex_maximize(np.eye(2), T)
    assert p @ T @ p == pytest.approx(4.0)


def test_trace_inverse_of_sixty_degree_pair():
    U = UnitVectorSystem([[1.0, 0.0], [0.5, math.sqrt(3) / 2]])
    w = witness(U)
    # A = [[5/4, sqrt3/4], [sqrt3/4, 3/4]]: trace 2, det 3/4
    assert w.trace_inverse == pytest.approx(8 / 3, abs=1e-12)
    assert w.norm_q ** 2 >= 8 / 3 - 1e-9


def test_orthonormal_basis_is_tight():
    for d in range(1, 6):
        U = UnitVectorSystem(np.eye(d))
        w = witness(U)
        assert abs(w.norm_q - math.sqrt(d)) < 1e-9
        r = inscribed_radius_origin(U.absolute_hull()).value
        assert abs(r - 1 / math.sqrt(d)) < 1e-9
        assert abs(w.threshold - r) < 1e-9


def test_witness_value_is_strip_maximum(rng):
    """Compare with the maximum over an independent vertex enumeration."""
    for _ in range(40):
        d = int(rng.integers(2, 4))
        n = int(rng.integers(d, 2 * d + 3))
        U = UnitVectorSystem(random_unit(rng, n, d))
        if not U.spans():
            continue
        w = witness(U)
        A = gram_operator(U)
        evals, evecs = np.linalg.eigh(A)
        N = evecs @ np.diag(evals ** -0.5) @ evecs.T
        V = U.vectors @ N
        verts = vertex_enum(HPolytope(np.vstack([V, -V]))).points
        T = N @ N
        best = max(x @ T @ x for x in verts)
        assert w.value == pytest.approx(best, rel=1e-9)


def test_random_systems_satisfy_the_bounds(rng):
    for _ in range(100):
        d = int(rng.integers(1, 6))
        n = int(rng.integers(d, 2 * d + 3))
        U = UnitVectorSystem(random_unit(rng, n, d))
        w = witness(U)
        assert np.abs(U.vectors @ w.q).max() <= 1 + 1e-9
        assert w.norm_q >= d / math.sqrt(n) - 1e-9
        assert w.trace_inverse >= d * d / n - 1e-9


def test_no_ball_certificate():
    U = UnitVectorSystem(np.eye(3))
    t = 1 / math.sqrt(3)
    assert no_ball_certificate(U, t * 1.001)
    assert not no_ball_certificate(U, t)
    assert not no_ball_certificate(U, 0.0)
    flat = UnitVectorSystem([[1.0, 0.0], [-1.0, 0.0]])
    assert no_ball_certificate(flat, 1e-3)


def test_input_validation():
    with pytest.raises(ValueError):
        UnitVectorSystem([[1.0, 1.0]])
    with pytest.raises(SpanFailure):
        witness(UnitVectorSystem([[1.0, 0.0], [-1.0, 0.0]]))
    U = UnitVectorSystem.normalized([[3.0, 4.0], [0.0, 2.0]])
    assert np.allclose(np.linalg.norm(U.vectors, axis=1), 1)
