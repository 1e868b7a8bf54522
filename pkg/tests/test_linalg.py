from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsteinitz import linalg
from qsteinitz.errors import NotPositiveDefinite, SingularMatrix


def cofactor_det(M):
    """Laplace expansion along the first row; the reference for small sizes."""
    n = len(M)
    if n == 1:
        return M[0][0]
    total = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * cofactor_det(minor)
    return total


def exact(rows):
    return linalg.as_exact(np.array(rows, dtype=object))


def test_solve_small_system():
    x = linalg.solve_linear(exact([[2, 1], [1, 2]]), exact([3, 3]))
    assert list(x) == [1, 1]
    assert np.allclose(linalg.solve_linear(np.array([[2.0, 1], [1, 2]]), [3.0, 3]), [1, 1])


def test_determinant_examples():
    assert linalg.determinant(exact([[1, 2], [3, 4]])) == -2
    assert linalg.determinant(linalg.identity(4, exact=True)) == 1
    assert linalg.determinant(np.zeros((0, 0))) == 1.0


def test_singular_raises():
    with pytest.raises(SingularMatrix):
        linalg.solve_linear(exact([[1, 2], [2, 4]]), exact([1, 1]))
    with pytest.raises(SingularMatrix):
        linalg.solve_linear(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones(2))


def test_exact_determinant_matches_cofactor_expansion(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        rows = [[Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4))) for _ in range(n)]
                for _ in range(n)]
        assert linalg.determinant(exact(rows)) == cofactor_det(rows)


def test_exact_solve_residual_is_zero(rng):
    for _ in range(200):
        n = int(rng.integers(1, 5))
        M = exact(rng.integers(-5, 6, size=(n, n)).tolist())
        b = exact(rng.integers(-5, 6, size=n).tolist())
        if linalg.determinant(M) == 0:
            with pytest.raises(SingularMatrix):
                linalg.solve_linear(M, b)
            continue
        x = linalg.solve_linear(M, b)
        assert all(r == 0 for r in M @ x - b)


def test_rank_and_null_vector():
    M = exact([[1, 1, 0], [0, 1, 1]])
    assert linalg.rank(M) == 2
    z = linalg.null_vector(M)
    assert all(v == 0 for v in M @ z) and any(v != 0 for v in z)
    assert linalg.null_vector(exact([[1, 0, 0]])) is None
    zf = linalg.null_vector(np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]]))
    assert np.allclose(np.array([[1, 1, 0], [0, 1, 1]]) @ zf, 0)
    assert linalg.rank(np.zeros((0, 3))) == 0


def test_tolerance_context_restores():
    with linalg.tolerance(1e-6):
        assert linalg.get_tolerance() == 1e-6
    assert linalg.get_tolerance() == linalg.DEFAULT_TOLERANCE
    with pytest.raises(ValueError):
        linalg.set_tolerance(0)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_jacobi_matches_lapack(n, seed):
    r = np.random.default_rng(seed)
    B = r.standard_normal((n, n))
    M = B + B.T
    w, V = linalg.sym_eig(M)
    assert np.all(np.diff(w) <= 1e-12)
    assert np.allclose(w, np.sort(np.linalg.eigvalsh(M))[::-1], atol=1e-10)
    assert np.allclose(V @ np.diag(w) @ V.T, M, atol=1e-10)
    assert np.allclose(V.T @ V, np.eye(n), atol=1e-12)


def test_jacobi_diagonal_and_repeated():
    w, V = linalg.sym_eig(np.diag([1.0, 3.0, 2.0]))
    assert list(w) == [3.0, 2.0, 1.0]
    w, _ = linalg.sym_eig(np.ones((3, 3)))
    assert np.allclose(w, [3, 0, 0], atol=1e-14)


def test_inverse_square_root(rng):
    B = rng.standard_normal((4, 4))
    M = B @ B.T + np.eye(4)
    N = linalg.inv_sqrt_psd(M)
    assert np.allclose(N @ M @ N, np.eye(4), atol=1e-10)
    with pytest.raises(NotPositiveDefinite):
        linalg.inv_sqrt_psd(np.diag([1.0, 0.0]))


def test_trace_inverse_exact_and_float():
    M = exact([[2, 1], [1, 2]])
    assert linalg.trace_inverse(M) == Fraction(4, 3)
    assert abs(linalg.trace_inverse(linalg.as_float(M)) - 4 / 3) < 1e-12


def test_outer_sum_trace_counts_unit_vectors(rng):
    U = rng.standard_normal((7, 3))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    A = linalg.outer_sum(U)
    assert abs(np.trace(A) - 7) < 1e-12
    assert np.allclose(A, sum(np.outer(u, u) for u in U))


def test_exact_policy_helpers():
    a = linalg.as_exact([0.5, 1])
    assert linalg.is_exact(a) and list(a) == [Fraction(1, 2), 1]
    assert linalg.zero_tol(a) == 0
    assert linalg.sqnorm(a) == Fraction(5, 4)
    assert linalg.as_float(a).dtype == np.float64
