"""Polytopes in V- and H-representation and the operations linking them.

An :class:`HPolytope` is always of the form ``{x : <x, v_i> <= 1}``, so the
origin is interior by construction and polarity is nothing more than a
change of representation: the polar of ``conv(P)`` is the H-polytope whose
normals are the points of ``P``, and vice versa.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import linalg
from .errors import (CenterNotInterior, DegenerateInput, EnumerationTooLarge,
                     OriginNotInterior, Unbounded)
from .linalg import Scalar, is_exact, zero_tol
from .lp import linprog

ENUMERATION_CAP = 10**7
# above this many d-subsets float enumeration hands over to Qhull
SUBSET_FAST_LIMIT = 20_000
_CHUNK = 4096


def _merge_duplicates(points: np.ndarray) -> list[int]:
    """Indices of first occurrences, merging points within ``10 * tau``."""
    if is_exact(points):
        seen: dict[tuple, int] = {}
        for i, p in enumerate(points):
            seen.setdefault(tuple(p), i)
        return sorted(seen.values())
    tol = 10 * linalg.get_tolerance()
    kept: list[int] = []
    for i in range(len(points)):
        if kept and np.abs(points[kept] - points[i]).max(axis=1).min() <= tol:
            continue
        kept.append(i)
    return kept


class VPolytope:
    """Convex hull of finitely many points in R^d.

    Points closer than ``10 * tau`` are merged on construction (exact input
    merges only identical points); ``full_dim=True`` additionally rejects
    point sets that do not affinely span R^d.
    """

    def __init__(self, points, dim: Optional[int] = None, full_dim: bool = False,
                 merge: bool = True):
        pts = np.asarray(points)
        if pts.dtype != object:
            pts = pts.astype(np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1) if dim == 1 else pts.reshape(-1, dim or len(pts))
        if dim is None:
            if pts.shape[0] == 0:
                raise ValueError("cannot infer dimension of an empty point set")
            dim = pts.shape[1]
        if pts.shape[1] != dim:
            raise ValueError(f"points have dimension {pts.shape[1]}, expected {dim}")
        self.dim = dim
        self.points = pts[_merge_duplicates(pts)] if merge and len(pts) else pts
        if full_dim and linalg.rank(self.points[1:] - self.points[0]) < dim:
            raise DegenerateInput("points do not affinely span R^%d" % dim)

    @property
    def exact(self) -> bool:
        return is_exact(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"VPolytope(dim={self.dim}, n={len(self)})"

    def to_exact(self) -> "VPolytope":
        return VPolytope(linalg.as_exact(self.points), self.dim, merge=False)

    def subset(self, indices: Sequence[int]) -> "VPolytope":
        """Sub-polytope on the given points, positions preserved."""
        return VPolytope(self.points[list(indices)], self.dim, merge=False)


@dataclass(frozen=True)
class Halfspace:
    """``{x : <x, normal> <= 1}``."""
    normal: np.ndarray

    def contains(self, x) -> bool:
        return np.dot(self.normal, x) <= 1 + zero_tol(self.normal)


class HPolytope:
    """Intersection of the half-spaces ``{x : <x, v_i> <= 1}``."""

    def __init__(self, normals, dim: Optional[int] = None):
        V = np.asarray(normals)
        if V.dtype != object:
            V = V.astype(np.float64)
        if dim is None:
            dim = V.shape[1]
        V = V.reshape(-1, dim)
        zero = (V == 0).all(axis=1)
        if zero.any():
            raise ValueError("half-space normal must be nonzero")
        self.dim = dim
        self.normals = V

    @property
    def exact(self) -> bool:
        return is_exact(self.normals)

    @property
    def halfspaces(self) -> list[Halfspace]:
        return [Halfspace(v) for v in self.normals]

    def __len__(self) -> int:
        return len(self.normals)

    def __repr__(self) -> str:
        return f"HPolytope(dim={self.dim}, m={len(self)})"

    def contains(self, x) -> bool:
        return bool((self.normals @ np.asarray(x) <= 1 + zero_tol(self.normals)).all())

    def contains_many(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=float) @ linalg.as_float(self.normals).T
                <= 1 + linalg.get_tolerance()).all(axis=1)

    def to_exact(self) -> "HPolytope":
        return HPolytope(linalg.as_exact(self.normals), self.dim)


@total_ordering
class Radius:
    """A nonnegative radius stored through its square.

    Under the exact policy the square of an inscribed radius is rational
    while the radius itself usually is not, so comparisons go through the
    squares and stay exact against rational thresholds.
    """

    __slots__ = ("squared", "interior")

    def __init__(self, squared: Scalar, interior: bool = True):
        self.squared = squared
        self.interior = interior

    @property
    def value(self) -> float:
        return math.sqrt(self.squared)

    def __float__(self) -> float:
        return self.value

    def _sq(self, other):
        if isinstance(other, Radius):
            return other.squared
        if other < 0:
            return None
        return other * other

    def __eq__(self, other):
        if not isinstance(other, (Radius, int, float, Fraction)):
            return NotImplemented
        sq = self._sq(other)
        return sq is not None and self.squared == sq

    def __lt__(self, other):
        if not isinstance(other, (Radius, int, float, Fraction)):
            return NotImplemented
        sq = self._sq(other)
        return sq is not None and self.squared < sq

    def __hash__(self):
        return hash(self.squared)

    def __repr__(self) -> str:
        return f"Radius({self.value:.12g}, squared={self.squared!r})"


# -- interior tests and polarity -------------------------------------------

def _recession_free(points: np.ndarray) -> bool:
    """True iff ``{x : <x, p> <= 0 for all p}`` is ``{0}`` (exact-friendly).

    A pointed cone is nontrivial iff it has an extreme ray, and every
    extreme ray is the kernel of ``d - 1`` independent active rows.
    """
    n, d = points.shape
    tol = zero_tol(points)
    if linalg.rank(points) < d:
        return False
    if math.comb(n, d - 1) > ENUMERATION_CAP:
        raise EnumerationTooLarge(f"C({n},{d - 1}) ray candidates")
    for rows in itertools.combinations(range(n), d - 1):
        z = linalg.null_vector(points[list(rows)] if rows else np.zeros((0, d), dtype=points.dtype))
        if z is None:
            continue
        vals = points @ z
        if (vals <= tol).all() or (vals >= -tol).all():
            return False
    return True


def origin_interior(points) -> bool:
    """Whether the origin lies in the interior of ``conv(points)``."""
    P = np.asarray(points)
    n, d = P.shape
    tol = zero_tol(P)
    if n < d + 1:
        return False
    if d == 1:
        return bool(P.max() > tol and P.min() < -tol)
    if is_exact(P):
        return _recession_free(P)
    try:
        hull = ConvexHull(P)
    except QhullError:
        return False
    return bool((-hull.equations[:, -1] > tol).all())


def polar_v_to_h(P: VPolytope, check: bool = True) -> HPolytope:
    """Polar body of ``conv(P)`` as an H-polytope with one half-space per point.

    A point at the origin imposes no constraint and is skipped.
    """
    if check and not origin_interior(P.points):
        raise OriginNotInterior("origin is not interior to conv(P)")
    nonzero = (P.points != 0).any(axis=1)
    return HPolytope(P.points[nonzero].copy(), P.dim)


def polar_h_to_v(P: HPolytope) -> VPolytope:
    """Polar of a bounded H-polytope: the convex hull of its normals."""
    if not origin_interior(P.normals):
        raise Unbounded("H-polytope is unbounded")
    return VPolytope(P.normals.copy(), P.dim)


def translate_h(P: HPolytope, c) -> HPolytope:
    """``P - c`` renormalized to offset one: ``v -> v / (1 - <c, v>)``.

    Positions are preserved, so normal ``i`` of the result comes from normal
    ``i`` of ``P``.
    """
    c = np.asarray(c)
    V = P.normals
    if is_exact(V) or is_exact(c):
        V, c = linalg.as_exact(V), linalg.as_exact(c)
    denom = 1 - V @ c
    if (denom <= zero_tol(V)).any():
        raise CenterNotInterior("center violates some half-space")
    return HPolytope(V / denom[:, None], P.dim)


# -- LP-backed queries ------------------------------------------------------

def membership_residual(points, x) -> Scalar:
    """``min_alpha || sum alpha_i p_i - x ||_inf`` over convex weights."""
    P = np.asarray(points)
    x = np.asarray(x)
    n, d = P.shape
    if is_exact(P) or is_exact(x):
        P, x = linalg.as_exact(P), linalg.as_exact(x)
        one, zero = Fraction(1), Fraction(0)
    else:
        one, zero = 1.0, 0.0
    # variables: alpha (n), s
    c = np.array([zero] * n + [one], dtype=P.dtype)
    A_ub = np.zeros((2 * d, n + 1), dtype=P.dtype)
    A_ub[:] = zero
    A_ub[:d, :n] = P.T
    A_ub[:d, n] = -one
    A_ub[d:, :n] = -P.T
    A_ub[d:, n] = -one
    b_ub = np.concatenate([x, -x])
    A_eq = np.array([[one] * n + [zero]], dtype=P.dtype)
    res = linprog(c, A_ub, b_ub, A_eq, np.array([one], dtype=P.dtype))
    return res.fun


def is_member_v(P: VPolytope, x) -> bool:
    """Whether ``x`` lies in ``conv(P)`` up to the tolerance."""
    return membership_residual(P.points, x) <= zero_tol(P.points)


def gauge(points, x) -> Scalar:
    """Minkowski gauge ``min{s >= 0 : x in s * conv(points)}`` by LP.

    Returns ``inf`` when no such ``s`` exists.
    """
    P = np.asarray(points)
    x = np.asarray(x)
    n, d = P.shape
    exact = is_exact(P) or is_exact(x)
    if exact:
        P, x = linalg.as_exact(P), linalg.as_exact(x)
    one = Fraction(1) if exact else 1.0
    zero = one - one
    # variables: beta (n), s ; sum beta p = x, sum beta = s
    c = np.array([zero] * n + [one], dtype=P.dtype)
    A_eq = np.empty((d + 1, n + 1), dtype=P.dtype)
    A_eq[:d, :n] = P.T
    A_eq[:d, n] = zero
    A_eq[d, :n] = one
    A_eq[d, n] = -one
    b_eq = np.concatenate([x, np.array([zero], dtype=P.dtype)])
    res = linprog(c, A_eq=A_eq, b_eq=b_eq)
    return res.x[n] if res.ok else math.inf


def _strictly_exposed(P: np.ndarray, i: int, tol: float) -> bool:
    """Cheap sufficient test: some direction is maximized by ``p_i`` alone."""
    others = np.delete(P, i, axis=0)
    if len(others) == 0:
        return True
    for direction in (P[i] - P.mean(axis=0), P[i]):
        scale = math.sqrt(linalg.sqnorm(direction)) if tol else 1.0
        if scale == 0:
            continue
        gap = np.dot(direction, P[i]) - (others @ direction).max()
        if gap > tol * scale:
            return True
    return False


def _qhull_candidates(pts: np.ndarray) -> Optional[dict[int, np.ndarray]]:
    """Qhull vertices mapped to the sum of their incident facet normals."""
    if pts.shape[1] < 2 or len(pts) <= pts.shape[1]:
        return None
    try:
        hull = ConvexHull(pts)
    except QhullError:
        return None
    out: dict[int, np.ndarray] = {}
    for simplex, eq in zip(hull.simplices, hull.equations):
        for i in simplex:
            out[int(i)] = out.get(int(i), 0) + eq[:-1]
    return out


def extreme_indices(P: VPolytope) -> list[int]:
    """Indices of the points that are not in the hull of the others."""
    pts = P.points
    tol = zero_tol(pts)
    cands = None if is_exact(pts) else _qhull_candidates(pts)
    keep = []
    for i in range(len(pts)):
        if cands is not None:
            # off the Qhull vertex list means within rounding of the hull
            if i not in cands:
                continue
            g = cands[i]
            others = np.delete(pts, i, axis=0)
            if g @ pts[i] - (others @ g).max() > tol * np.linalg.norm(g):
                keep.append(i)
                continue
        if _strictly_exposed(pts, i, tol):
            keep.append(i)
            continue
        others = np.delete(pts, i, axis=0)
        if membership_residual(others, pts[i]) > tol:
            keep.append(i)
    return keep


def extreme_points(P: VPolytope) -> VPolytope:
    return P.subset(extreme_indices(P))


def support(P: VPolytope, direction) -> Scalar:
    """Support function ``max_p <p, direction>``."""
    return (P.points @ np.asarray(direction)).max()


# -- vertex enumeration -----------------------------------------------------

def _enum_subsets_exact(V: np.ndarray) -> np.ndarray:
    m, d = V.shape
    found: dict[tuple, None] = {}
    ones = np.array([Fraction(1)] * d, dtype=object)
    for rows in itertools.combinations(range(m), d):
        B = V[list(rows)]
        if linalg.determinant(B) == 0:
            continue
        x = linalg.solve_linear(B, ones)
        if (V @ x <= 1).all():
            found.setdefault(tuple(x), None)
    return np.array(list(found), dtype=object).reshape(-1, d)


def _enum_subsets_float(V: np.ndarray) -> np.ndarray:
    m, d = V.shape
    tau = linalg.get_tolerance()
    combos = np.array(list(itertools.combinations(range(m), d)), dtype=np.intp).reshape(-1, d)
    out = []
    for start in range(0, len(combos), _CHUNK):
        B = V[combos[start:start + _CHUNK]]
        ok = np.abs(np.linalg.det(B)) > tau
        if not ok.any():
            continue
        X = np.linalg.solve(B[ok], np.ones((ok.sum(), d, 1)))[..., 0]
        feasible = (X @ V.T <= 1 + tau).all(axis=1)
        out.append(X[feasible])
    X = np.concatenate(out) if out else np.zeros((0, d))
    return X[_merge_duplicates(X)] if len(X) else X


def _enum_qhull(V: np.ndarray) -> np.ndarray:
    hull = ConvexHull(V)
    eq = hull.equations
    X = eq[:, :-1] / (-eq[:, -1])[:, None]
    X = X[_merge_duplicates(X)]
    order = np.lexsort(X.T[::-1])
    return X[order]


def vertex_enum(P: HPolytope, method: str = "auto") -> VPolytope:
    """All vertices of a bounded H-polytope.

    ``method="subsets"`` solves ``<x, v_i> = 1`` for every nonsingular
    d-subset of normals and keeps the feasible solutions, ordered by first
    subset index.  ``method="qhull"`` (float only) reads the vertices off the
    facets of ``conv(normals)``, ordered lexicographically.  ``"auto"`` uses
    subsets for exact input or when ``C(m, d) <= SUBSET_FAST_LIMIT``.
    """
    V = P.normals
    m, d = V.shape
    if not origin_interior(V):
        raise Unbounded("H-polytope is unbounded")
    count = math.comb(m, d)
    exact = is_exact(V)
    if method == "auto":
        method = "subsets" if exact or count <= SUBSET_FAST_LIMIT or d == 1 else "qhull"
    if method == "subsets":
        if count > ENUMERATION_CAP:
            raise EnumerationTooLarge(f"C({m},{d}) = {count} exceeds {ENUMERATION_CAP}")
        X = _enum_subsets_exact(V) if exact else _enum_subsets_float(V)
    elif method == "qhull":
        if exact:
            raise ValueError("qhull enumeration needs float input")
        X = _enum_qhull(V)
    else:
        raise ValueError(f"unknown method {method!r}")
    return VPolytope(X, d)


def inscribed_radius_origin(P: VPolytope) -> Radius:
    """Largest ``r`` with ``r * B^d`` inside ``conv(P)``.

    Equal to ``1 / max ||w||`` over the vertices ``w`` of the polar body.
    When the origin is not interior the result is ``Radius(0)`` with
    ``interior=False``.
    """
    pts = P.points
    zero = Fraction(0) if P.exact else 0.0
    if not origin_interior(pts):
        return Radius(zero, interior=False)
    W = vertex_enum(polar_v_to_h(P, check=False)).points
    far = max(linalg.sqnorm(w) for w in W)
    return Radius(1 / far)


def facet_distances(P: VPolytope) -> np.ndarray:
    """Distances from the origin to the facet hyperplanes of ``conv(P)`` (Qhull)."""
    pts = linalg.as_float(P.points)
    if P.dim == 1:
        return np.array([pts.max(), -pts.min()])
    return -ConvexHull(pts).equations[:, -1]
