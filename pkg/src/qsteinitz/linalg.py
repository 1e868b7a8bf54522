"""Scalar policy and dense linear algebra kernels.

Two arithmetic policies coexist.  Arrays of dtype ``object`` holding
:class:`fractions.Fraction` entries are *exact*: every kernel below keeps them
exact and compares against zero without tolerance.  Ordinary ``float64``
arrays use the global tolerance ``tau`` (default ``1e-9``) for every
comparison against zero.
"""
from __future__ import annotations

import contextlib
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import ConvergenceFailure, NotPositiveDefinite, SingularMatrix

Scalar = Union[float, Fraction]

DEFAULT_TOLERANCE = 1e-9
JACOBI_MAX_SWEEPS = 100

_tolerance = DEFAULT_TOLERANCE


def get_tolerance() -> float:
    return _tolerance


def set_tolerance(tau: float) -> None:
    global _tolerance
    if not tau > 0:
        raise ValueError(f"tolerance must be positive, got {tau!r}")
    _tolerance = float(tau)


@contextlib.contextmanager
def tolerance(tau: float) -> Iterator[float]:
    """Temporarily replace the global tolerance."""
    old = _tolerance
    set_tolerance(tau)
    try:
        yield tau
    finally:
        set_tolerance(old)


def is_exact(a) -> bool:
    if isinstance(a, np.ndarray):
        return a.dtype == object
    if isinstance(a, (list, tuple)):
        return len(a) > 0 and all(is_exact(x) for x in a)
    return isinstance(a, Rational)


def zero_tol(a) -> float:
    """Tolerance to use for comparisons involving ``a``: 0 when exact."""
    return 0.0 if is_exact(a) else _tolerance


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(float(x))


def as_exact(a) -> np.ndarray:
    """Exact copy of ``a``; binary floats convert without rounding."""
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = to_fraction(x)
    return out


def as_float(a) -> np.ndarray:
    return np.asarray(a, dtype=object).astype(np.float64) if is_exact(a) else np.asarray(a, dtype=np.float64)


def like(a, values) -> np.ndarray:
    """Convert ``values`` to the arithmetic policy of ``a``."""
    return as_exact(values) if is_exact(a) else np.asarray(values, dtype=np.float64)


def identity(d: int, exact: bool = False) -> np.ndarray:
    if exact:
        out = np.full((d, d), Fraction(0), dtype=object)
        for i in range(d):
            out[i, i] = Fraction(1)
        return out
    return np.eye(d)


def sqnorm(x) -> Scalar:
    x = np.asarray(x)
    return sum((v * v for v in x), Fraction(0)) if x.dtype == object else float(x @ x)


# -- exact elimination ------------------------------------------------------

def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals (in place on a copy)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def _det_exact(M) -> Fraction:
    m = [list(map(to_fraction, row)) for row in M]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        piv = m[c][c]
        det *= piv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


# -- public kernels ---------------------------------------------------------

def determinant(M) -> Scalar:
    """Exact determinant for rational input, LU-based otherwise."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"determinant needs a square matrix, got shape {M.shape}")
    if M.shape[0] == 0:
        return Fraction(1) if M.dtype == object else 1.0
    if M.dtype == object:
        return _det_exact(M)
    return float(np.linalg.det(M))


def solve_linear(M, b) -> np.ndarray:
    """Solve ``M x = b``.

    Raises :class:`SingularMatrix` when ``det M`` is zero (exact) or within
    the tolerance of zero (float).
    """
    M = np.asarray(M)
    b = np.asarray(b)
    if M.dtype == object or b.dtype == object:
        M = as_exact(M)
        b = as_exact(b)
        n = M.shape[0]
        aug = [list(M[i]) + [b[i]] for i in range(n)]
        red, piv = _rref(aug)
        if piv != list(range(n)):
            raise SingularMatrix("matrix is singular")
        return np.array([red[i][n] for i in range(n)], dtype=object)
    if abs(np.linalg.det(M)) <= _tolerance:
        raise SingularMatrix(f"|det| <= {_tolerance:g}")
    return np.linalg.solve(M, b)


def rank(M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    if M.dtype == object:
        return len(_rref([list(r) for r in M])[1])
    return int(np.linalg.matrix_rank(M, tol=_tolerance * max(1.0, np.abs(M).max())))


def null_vector(M) -> np.ndarray | None:
    """A nonzero vector spanning ``ker M`` when the kernel is one-dimensional.

    Returns ``None`` if the kernel has any other dimension.  ``M`` is k x d.
    """
    M = np.asarray(M)
    k, d = M.shape if M.ndim == 2 else (0, M.shape[0] if M.ndim else 0)
    if M.dtype == object:
        if k == 0:
            return np.array([Fraction(1)], dtype=object) if d == 1 else None
        red, piv = _rref([list(r) for r in M])
        if len(piv) != d - 1:
            return None
        free = next(c for c in range(d) if c not in piv)
        z = [Fraction(0)] * d
        z[free] = Fraction(1)
        for row, c in zip(red, piv):
            z[c] = -row[free]
        return np.array(z, dtype=object)
    if k == 0:
        return np.ones(1) if d == 1 else None
    _, s, vt = np.linalg.svd(M)
    scale = max(1.0, s[0]) if s.size else 1.0
    r = int((s > _tolerance * scale).sum())
    if r != d - 1:
        return None
    return vt[-1]


def check_symmetric(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("symmetric matrix must be square")
    if M.dtype == object:
        ok = all(M[i, j] == M[j, i] for i in range(M.shape[0]) for j in range(i))
    else:
        ok = np.allclose(M, M.T, rtol=0.0, atol=_tolerance)
    if not ok:
        raise ValueError("matrix is not symmetric")
    return M


def sym_eig(M) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(w, V)`` with eigenvalues ``w`` sorted in descending order and
    orthonormal eigenvectors in the columns of ``V``, so ``M = V diag(w) V^T``.
    """
    A = np.array(check_symmetric(as_float(M)), dtype=np.float64)
    A = (A + A.T) / 2
    n = A.shape[0]
    V = np.eye(n)
    scale = np.linalg.norm(A)
    if n > 1 and scale > 0:
        for _ in range(JACOBI_MAX_SWEEPS):
            off = np.linalg.norm(A - np.diag(np.diag(A)))
            if off <= 1e-15 * scale:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = A[p, q]
                    if abs(apq) <= 1e-300:
                        continue
                    theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                    if abs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    c = 1.0 / math.sqrt(t * t + 1.0)
                    s = t * c
                    # A <- J^T A J with J the (p, q) rotation
                    ap = A[:, p].copy()
                    aq = A[:, q].copy()
                    A[:, p] = c * ap - s * aq
                    A[:, q] = s * ap + c * aq
                    rp = A[p, :].copy()
                    rq = A[q, :].copy()
                    A[p, :] = c * rp - s * rq
                    A[q, :] = s * rp + c * rq
                    A[p, q] = A[q, p] = 0.0
                    vp = V[:, p].copy()
                    vq = V[:, q].copy()
                    V[:, p] = c * vp - s * vq
                    V[:, q] = s * vp + c * vq
        else:
            raise ConvergenceFailure(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def _require_pd(w: np.ndarray) -> None:
    if w.size and w[-1] <= _tolerance:
        raise NotPositiveDefinite(f"minimum eigenvalue {w[-1]:.3g} <= {_tolerance:g}")


def inv_sqrt_psd(M) -> np.ndarray:
    """Symmetric inverse square root of a positive definite matrix."""
    w, V = sym_eig(M)
    _require_pd(w)
    N = (V / np.sqrt(w)) @ V.T
    return (N + N.T) / 2


def trace_inverse(M) -> Scalar:
    """``tr(M^-1)``; exact for rational input, eigenvalue sum otherwise."""
    M = np.asarray(M)
    if M.dtype == object:
        d = M.shape[0]
        inv_cols = [solve_linear(M, identity(d, exact=True)[:, j]) for j in range(d)]
        tr = sum((inv_cols[j][j] for j in range(d)), Fraction(0))
        if tr <= 0:
            raise NotPositiveDefinite("matrix is not positive definite")
        return tr
    w, _ = sym_eig(M)
    _require_pd(w)
    return float((1.0 / w).sum())


def outer_sum(vectors: Sequence) -> np.ndarray:
    """``sum_i u_i u_i^T`` in the arithmetic policy of the input."""
    U = np.asarray(vectors)
    return U.T @ U
