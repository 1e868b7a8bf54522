"""Witnesses that the absolute hull of n unit vectors misses a large ball.

For unit vectors ``u_1..u_n`` spanning R^d with frame operator
``A = sum u_i u_i^T``, there is a point ``p`` in the strips
``|<p, A^{-1/2} u_i>| <= 1`` with ``<p, A^{-1} p> >= tr A^{-1}``.  Then
``q = A^{-1/2} p`` satisfies ``|<q, u_i>| <= 1`` for all i, so the
half-space ``<q, x> <= 1`` contains ``conv{+-u_i}``, while
``|q|^2 >= tr A^{-1} >= d^2 / n``.  No ball of radius above ``1 / |q|``
(hence none above ``sqrt(n) / d``) fits in the absolute hull.

The point ``p`` is found by maximizing the convex quadratic
``<x, T x>`` over the strip polytope, whose maximum sits at a vertex.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg
from .errors import EnumerationTooLarge, PropositionViolated, SpanFailure, Unbounded
from .polytope import VPolytope

ENUMERATION_CAP = 10**7
_CHUNK = 2048


@dataclass
class UnitVectorSystem:
    vectors: np.ndarray

    def __post_init__(self):
        U = np.asarray(self.vectors, dtype=float)
        if U.ndim != 2 or U.shape[0] == 0:
            raise ValueError("expected a non-empty n x d array of vectors")
        norms = np.linalg.norm(U, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1) > linalg.get_tolerance())
        if bad.size:
            raise ValueError(f"vector {int(bad[0])} has norm {norms[bad[0]]:.12g}, expected 1")
        self.vectors = U

    @classmethod
    def normalized(cls, vectors) -> "UnitVectorSystem":
        U = np.asarray(vectors, dtype=float)
        return cls(U / np.linalg.norm(U, axis=1, keepdims=True))

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    def spans(self) -> bool:
        w, _ = linalg.sym_eig(gram_operator(self))
        return bool(w[-1] > linalg.get_tolerance())

    def absolute_hull(self) -> VPolytope:
        return VPolytope(np.vstack([self.vectors, -self.vectors]), self.dim)


@dataclass
class UpperBoundWitness:
    p: np.ndarray
    q: np.ndarray
    norm_q: float
    bound: float
    trace_inverse: float
    value: float

    @property
    def threshold(self) -> float:
        """Largest radius a ball in the absolute hull can have."""
        return 1.0 / self.norm_q

    def to_dict(self) -> dict:
        return {
            "q": self.q.tolist(),
            "norm_q": self.norm_q,
            "threshold": self.threshold,
            "bound_d_over_sqrt_n": self.bound,
            "p": self.p.tolist(),
            "trace_inverse": self.trace_inverse,
        }


def gram_operator(U: UnitVectorSystem) -> np.ndarray:
    """Frame operator ``sum_i u_i u_i^T``; its trace is n."""
    return linalg.outer_sum(U.vectors)


def strip_vertex_maximize(V, T) -> np.ndarray:
    """Vertex ``p`` of ``{x : |<v_i, x>| <= 1 for all i}`` maximizing ``<x, T x>``.

    Every vertex solves ``<v_i, x> = s_i`` for a nonsingular d-subset of the
    ``v_i`` and signs ``s in {-1, 1}^d``; all such candidates are generated,
    filtered for feasibility, and the first maximizer is returned.  Raises
    :class:`PropositionViolated` if the maximum falls below ``tr T``.
    """
    V = np.asarray(V, dtype=float)
    T = np.asarray(T, dtype=float)
    n, d = V.shape
    tau = linalg.get_tolerance()
    if np.linalg.matrix_rank(V, tol=tau) < d:
        raise Unbounded("strip intersection is unbounded: vectors do not span")
    count = math.comb(n, d) * 2**d
    if count > ENUMERATION_CAP:
        raise EnumerationTooLarge(f"{count} strip vertex candidates exceed {ENUMERATION_CAP}")
    signs = np.array(list(itertools.product([1.0, -1.0], repeat=d))).T  # d x 2^d
    combos = np.array(list(itertools.combinations(range(n), d)), dtype=np.intp)
    best_val, best_x = -math.inf, None
    for start in range(0, len(combos), _CHUNK):
        B = V[combos[start:start + _CHUNK]]
        ok = np.abs(np.linalg.det(B)) > tau
        if not ok.any():
            continue
        X = np.linalg.solve(B[ok], np.broadcast_to(signs, (ok.sum(), d, signs.shape[1])))
        X = np.swapaxes(X, 1, 2).reshape(-1, d)
        feasible = (np.abs(X @ V.T) <= 1 + tau).all(axis=1)
        X = X[feasible]
        if not len(X):
            continue
        vals = np.einsum("ij,jk,ik->i", X, T, X)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val, best_x = float(vals[k]), X[k]
    tr = float(np.trace(T))
    if best_x is None or best_val < tr - tau * max(1.0, abs(tr)):
        raise PropositionViolated(f"max <p, T p> = {best_val:.12g} < tr T = {tr:.12g}")
    return best_x


def witness(U: UnitVectorSystem) -> UpperBoundWitness:
    """Point ``q`` in the polar of the absolute hull with ``|q| >= d / sqrt(n)``."""
    d, n = U.dim, U.n
    tau = linalg.get_tolerance()
    A = gram_operator(U)
    w, _ = linalg.sym_eig(A)
    if w[-1] <= tau:
        raise SpanFailure(f"vectors do not span R^{d} (min eigenvalue {w[-1]:.3g})")
    N = linalg.inv_sqrt_psd(A)
    T = N @ N
    p = strip_vertex_maximize(U.vectors @ N, T)
    q = N @ p
    tr_inv = linalg.trace_inverse(A)
    value = float(p @ T @ p)
    worst = float(np.abs(U.vectors @ q).max())
    if worst > 1 + tau:
        raise PropositionViolated(f"q violates a strip: |<q, u_i>| = {worst:.12g}")
    norm_q = float(np.linalg.norm(q))
    bound = d / math.sqrt(n)
    if norm_q * norm_q < tr_inv - tau * max(1.0, tr_inv) or norm_q < bound - tau:
        raise PropositionViolated(f"|q| = {norm_q:.12g} below d/sqrt(n) = {bound:.12g}")
    return UpperBoundWitness(p, q, norm_q, bound, float(tr_inv), value)


def no_ball_certificate(U: UnitVectorSystem, rho: float,
                        wit: Optional[UpperBoundWitness] = None) -> bool:
    """True iff the witness proves ``rho * B^d`` is not inside ``conv{+-u_i}``.

    The point ``rho q / |q|`` of the ball violates ``<q, x> <= 1`` exactly
    when ``rho |q| > 1``; the comparison keeps a ``tau`` safety margin.  For
    non-spanning systems the hull is flat and every ``rho > 0`` is excluded.
    """
    if rho <= 0:
        return False
    if not U.spans():
        return True
    if wit is None:
        wit = witness(U)
    return rho * wit.norm_q > 1 + linalg.get_tolerance()
