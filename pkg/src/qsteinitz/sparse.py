"""Sparse approximation: at most 2d vertices ``L'`` of ``L`` with
``L  inside  -(lam + 2) d * L'`` whenever ``L  inside  -lam * L``.

Construction:

1. ``v_1..v_d``: vertices spanning a simplex ``conv{0, v_1..v_d}`` that is
   maximal under single-vertex swaps (globally maximal in exact mode).  Then
   every vertex has coordinates in ``[-1, 1]`` in the basis ``v_i``.
2. ``y``: where the ray from 0 along ``-(v_1 + ... + v_d)`` leaves ``L``.
3. ``v'_1..v'_k``, ``k <= d``: vertices of a face of ``L`` whose hull holds ``y``.

The selection is the union.  The inclusion is not assumed: every vertex
``w`` of ``L`` is checked to have gauge at most one for
``-(lam + 2) d * conv(selection)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import linalg
from .errors import (CertificateViolated, DegenerateInput, EnumerationTooLarge,
                     InclusionPreconditionFailed, NotMember, OriginNotInterior)
from .linalg import Scalar, is_exact, zero_tol
from .lp import linprog
from .polytope import VPolytope, gauge, membership_residual, origin_interior

EXACT_MODE_CAP = 10**6
# "auto" enumerates all d-subsets up to this many, else greedy + swaps
AUTO_EXACT_LIMIT = 10**5
_CHUNK = 8192


@dataclass
class SimplexBasis:
    indices: list[int]
    vertices: np.ndarray
    volume: Scalar
    mode: str


@dataclass
class RayExit:
    point: np.ndarray
    t: Scalar
    weights: np.ndarray


@dataclass
class Decomposition:
    indices: list[int]
    weights: np.ndarray


@dataclass
class SparseCertificate:
    selected: list[int]
    factor: Scalar
    lam: Scalar
    margins: list
    basis: SimplexBasis
    exit: RayExit
    caratheodory: Decomposition
    basis_coefficient: Scalar
    origin_in_selection: bool
    exact_margins: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def min_margin(self) -> Scalar:
        return min(self.margins)

    def to_dict(self) -> dict:
        return {
            "selected": list(self.selected),
            "factor": self.factor,
            "lambda": self.lam,
            "margins": list(self.margins),
            "simplex": list(self.basis.indices),
            "caratheodory": list(self.caratheodory.indices),
            "basis_coefficient": self.basis_coefficient,
        }


# -- maximal volume simplex ---------------------------------------------------

def _volume(det: Scalar, d: int) -> Scalar:
    return abs(det) / math.factorial(d)


def _max_volume_exact(P: np.ndarray) -> tuple[list[int], Scalar]:
    n, d = P.shape
    best, best_idx = None, None
    if is_exact(P):
        for rows in itertools.combinations(range(n), d):
            det = abs(linalg.determinant(P[list(rows)]))
            if best is None or det > best:
                best, best_idx = det, list(rows)
        return best_idx, best
    combos = np.array(list(itertools.combinations(range(n), d)), dtype=np.intp).reshape(-1, d)
    dets = np.concatenate([np.abs(np.linalg.det(P[combos[s:s + _CHUNK]]))
                           for s in range(0, len(combos), _CHUNK)])
    top = dets.max()
    # lexicographically first subset within relative tolerance of the max
    k = int(np.flatnonzero(dets >= top * (1 - linalg.get_tolerance()))[0])
    return combos[k].tolist(), float(dets[k])


def _basis_coordinates(P: np.ndarray, idx: Sequence[int]) -> np.ndarray:
    """Coordinates of every point of ``P`` in the basis ``P[idx]`` (d x n)."""
    B = P[list(idx)].T
    if is_exact(P):
        d = B.shape[0]
        inv = np.array([linalg.solve_linear(B, linalg.identity(d, exact=True)[:, j])
                        for j in range(d)], dtype=object).T
        return inv @ P.T
    return np.linalg.solve(B, P.T)


def _greedy_start(P: np.ndarray) -> list[int]:
    """Grow a basis by repeatedly taking the point farthest from the current span."""
    Pf = linalg.as_float(P)
    n, d = Pf.shape
    chosen: list[int] = []
    R = Pf.copy()
    for _ in range(d):
        norms = np.einsum("ij,ij->i", R, R)
        norms[chosen] = -1.0
        j = int(np.argmax(norms))
        if norms[j] <= linalg.get_tolerance() ** 2:
            raise DegenerateInput("points do not span R^d")
        chosen.append(j)
        u = R[j] / math.sqrt(norms[j])
        R = R - np.outer(R @ u, u)
    return chosen


def max_volume_simplex(V, mode: str = "auto") -> SimplexBasis:
    """Simplex ``conv{0, v_1..v_d}`` of maximal volume over the points ``V``.

    ``mode="exact"`` enumerates all d-subsets (ties go to the
    lexicographically first).  ``mode="greedy"`` grows a basis greedily and
    then swaps single vertices while some point has a basis coordinate of
    absolute value above ``1 + tau``; each swap multiplies the volume by that
    coordinate, so the loop ends in a swap-local maximum, which is all the
    containment argument needs.
    """
    P = V.points if isinstance(V, VPolytope) else np.asarray(V)
    n, d = P.shape
    count = math.comb(n, d)
    if mode == "auto":
        mode = "exact" if count <= AUTO_EXACT_LIMIT else "greedy"
    if mode == "exact":
        if count > EXACT_MODE_CAP:
            raise EnumerationTooLarge(f"C({n},{d}) = {count} exceeds {EXACT_MODE_CAP}")
        if count == 0:
            raise DegenerateInput("fewer than d points")
        idx, det = _max_volume_exact(P)
        if det <= zero_tol(P):
            raise DegenerateInput("no nondegenerate d-subset")
    elif mode == "greedy":
        idx = _greedy_start(P)
        tol = zero_tol(P)
        for _ in range(10_000):
            beta = _basis_coordinates(P, idx)
            mags = np.abs(beta) if not is_exact(P) else np.vectorize(abs, otypes=[object])(beta)
            flat = int(np.argmax(mags)) if not is_exact(P) else max(
                range(mags.size), key=lambda k: (mags.flat[k], -k))
            i, j = divmod(flat, n)
            if mags[i, j] <= 1 + tol:
                break
            idx[i] = j
        else:
            raise RuntimeError("swap search did not terminate")
        idx = sorted(idx)
        det = linalg.determinant(P[idx])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return SimplexBasis(list(idx), P[list(idx)].copy(), _volume(det, d), mode)


# -- ray exit and Caratheodory ------------------------------------------------

def _policy(P: np.ndarray, *vectors):
    exact = is_exact(P) or any(is_exact(np.asarray(v)) for v in vectors)
    if exact:
        return True, linalg.as_exact(P), [linalg.as_exact(v) for v in vectors]
    return False, np.asarray(P, dtype=float), [np.asarray(v, dtype=float) for v in vectors]


def ray_exit(V, direction) -> RayExit:
    """Boundary point ``y = t * direction`` of ``conv(V)`` with maximal ``t``.

    LP: maximize ``t`` subject to ``t * direction = sum alpha_i p_i``,
    ``sum alpha_i = 1``, ``alpha >= 0``.
    """
    P = V.points if isinstance(V, VPolytope) else np.asarray(V)
    exact, P, (u,) = _policy(P, direction)
    n, d = P.shape
    if all(x == 0 for x in u):
        raise ValueError("direction must be nonzero")
    if not origin_interior(P):
        raise OriginNotInterior("origin is not interior to conv(V)")
    one = Fraction(1) if exact else 1.0
    zero = one - one
    c = np.array([zero] * n + [-one], dtype=P.dtype)
    A_eq = np.empty((d + 1, n + 1), dtype=P.dtype)
    A_eq[:d, :n] = P.T
    A_eq[:d, n] = -u
    A_eq[d, :n] = one
    A_eq[d, n] = zero
    b_eq = np.array([zero] * d + [one], dtype=P.dtype)
    res = linprog(c, A_eq=A_eq, b_eq=b_eq, exact=exact)
    if not res.ok:
        raise OriginNotInterior(f"ray LP {res.status}")
    t = res.x[n]
    return RayExit(t * u, t, res.x[:n])


def _reduce_support(P: np.ndarray, idx: list[int], w: np.ndarray, exact: bool):
    """Classical Caratheodory step: remove affine dependencies from the support."""
    idx, w = list(idx), np.array(w)
    zero = Fraction(0) if exact else 0.0
    while len(idx) > 1:
        M = np.vstack([P[idx].T, linalg.like(P, np.ones(len(idx)))])
        if linalg.rank(M) == len(idx):
            break
        if exact:
            red, piv = linalg._rref([list(r) for r in M])
            free = next(c for c in range(len(idx)) if c not in piv)
            z = [Fraction(0)] * len(idx)
            z[free] = Fraction(1)
            for row, c in zip(red, piv):
                z[c] = -row[free]
            z = np.array(z, dtype=object)
        else:
            z = np.linalg.svd(linalg.as_float(M))[2][-1]
        if not any(v > 0 for v in z):
            z = -z
        theta = min(w[k] / z[k] for k in range(len(idx)) if z[k] > 0)
        w = w - theta * z
        drop = min((k for k in range(len(idx)) if z[k] > 0), key=lambda k: (w[k], k))
        w[drop] = zero
        keep = [k for k in range(len(idx)) if k != drop]
        idx = [idx[k] for k in keep]
        w = w[keep]
    return idx, w


def caratheodory_vertices(V, y) -> Decomposition:
    """At most d points of ``V`` (d + 1 if ``y`` is interior) with convex
    weights reproducing ``y``.

    Solves ``max s`` with ``s * y = sum alpha_i p_i``, ``sum alpha = 1``.  For a
    boundary point the optimum is ``s = 1`` and the basic solution has ``s``
    among its d + 1 basic variables, leaving at most d points.
    """
    P = V.points if isinstance(V, VPolytope) else np.asarray(V)
    exact, P, (y,) = _policy(P, y)
    n, d = P.shape
    tol = zero_tol(P)
    one = Fraction(1) if exact else 1.0
    zero = one - one
    if all(v == 0 for v in y) or not origin_interior(P):
        return _plain_decomposition(P, y, exact)
    c = np.array([zero] * n + [-one], dtype=P.dtype)
    A_eq = np.empty((d + 1, n + 1), dtype=P.dtype)
    A_eq[:d, :n] = P.T
    A_eq[:d, n] = -y
    A_eq[d, :n] = one
    A_eq[d, n] = zero
    b_eq = np.array([zero] * d + [one], dtype=P.dtype)
    res = linprog(c, A_eq=A_eq, b_eq=b_eq, exact=exact)
    s = res.x[n]
    if s < 1 - 10 * tol:
        raise NotMember(f"point lies outside the hull (gauge {float(1 / s):.6g})")
    if s > 1 + 10 * tol:
        return _plain_decomposition(P, y, exact)
    alpha = res.x[:n]
    idx = [i for i in range(n) if alpha[i] > tol]
    w = np.array([alpha[i] for i in idx], dtype=P.dtype)
    idx, w = _reduce_support(P, idx, w / w.sum(), exact)
    k = min(range(len(idx)), key=lambda k: (w[k], k))
    if len(idx) > d and w[k] <= 10 * tol:
        # boundary point up to rounding: the lightest point carries no weight
        idx = idx[:k] + idx[k + 1:]
        w = np.delete(w, k)
        w = w / w.sum()
    return Decomposition(idx, w)


def _plain_decomposition(P, y, exact) -> Decomposition:
    n, d = P.shape
    one = Fraction(1) if exact else 1.0
    A_eq = np.vstack([P.T, np.array([[one] * n], dtype=P.dtype)])
    b_eq = np.concatenate([y, np.array([one], dtype=P.dtype)])
    res = linprog(np.array([one - one] * n, dtype=P.dtype), A_eq=A_eq, b_eq=b_eq, exact=exact)
    if not res.ok:
        raise NotMember("point lies outside the hull")
    tol = zero_tol(P)
    idx = [i for i in range(n) if res.x[i] > tol]
    w = np.array([res.x[i] for i in idx], dtype=P.dtype)
    idx, w = _reduce_support(P, idx, w / w.sum(), exact)
    return Decomposition(idx, w)


# -- the approximation --------------------------------------------------------

def inclusion_gauges(points, selection, factor) -> list:
    """Gauge of ``-w / factor`` in ``conv(selection)`` for every point ``w``."""
    P = np.asarray(points)
    S = np.asarray(selection)
    if not is_exact(P) and len(S) > S.shape[1] > 1:
        # facets a.x <= b (b > 0) give gauge(x) = max a.x / b
        try:
            hull = ConvexHull(S)
        except QhullError:
            hull = None
        if hull is not None:
            b = -hull.equations[:, -1]
            if (b > zero_tol(P)).all():
                G = (-P / factor) @ hull.equations[:, :-1].T / b
                return list(np.maximum(G.max(axis=1), 0.0))
    return [gauge(S, -w / factor) for w in P]


def sparse_approximate(V: VPolytope, lam: Scalar, mode: str = "auto",
                       check_precondition: bool = True,
                       exact_margins: Optional[bool] = None,
                       debug: bool = False) -> SparseCertificate:
    """Select at most 2d points of ``V`` whose hull ``L'`` satisfies
    ``conv(V)  inside  -(lam + 2) d * L'``, with per-vertex margins.

    ``V`` should already be reduced to its extreme points.  Margins are
    ``1 - gauge(-w / factor)`` and are computed in exact arithmetic when
    ``exact_margins`` is true (default: for d <= 3).
    """
    P = V.points
    d = V.dim
    tol = zero_tol(P)
    if check_precondition:
        worst = max(inclusion_gauges(P, P, lam))
        if worst > 1 + tol:
            raise InclusionPreconditionFailed(
                f"conv(V) is not inside -{lam} conv(V) (gauge {float(worst):.6g})")
    basis = max_volume_simplex(P, mode)
    s = basis.vertices.sum(axis=0)
    exit_ = ray_exit(P, -s)
    car = caratheodory_vertices(P, exit_.point)
    selected = sorted(set(basis.indices) | set(car.indices))
    if len(selected) > 2 * d:
        raise CertificateViolated(f"{len(selected)} points selected in dimension {d}")
    factor = (lam + 2) * d
    if exact_margins is None:
        exact_margins = d <= 3
    Pm = linalg.as_exact(P) if exact_margins else P
    fm = linalg.to_fraction(factor) if exact_margins else factor
    margins = [1 - g for g in inclusion_gauges(Pm, Pm[selected], fm)]
    coeff = max(abs(b) for b in _basis_coordinates(P, basis.indices).flat)
    zero_vec = linalg.like(Pm, np.zeros(d))
    origin_in = membership_residual(Pm[selected], zero_vec) <= zero_tol(Pm)
    cert = SparseCertificate(selected, factor, lam, margins, basis, exit_, car, coeff,
                             bool(origin_in), exact_margins)
    if min(margins) < -zero_tol(Pm):
        raise CertificateViolated(f"vertex margin {float(min(margins)):.3g} < 0")
    if debug:
        if coeff > 1 + tol:
            raise CertificateViolated(f"vertex outside the parallelotope (coefficient {float(coeff):.6g})")
        if not origin_in:
            raise CertificateViolated("origin not in the selected hull")
    return cert
