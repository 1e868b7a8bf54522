"""Centers ``c`` of a body ``K`` with ``K - c`` inside ``-d (K - c)``.

The center used throughout is the centroid of the solid polytope.  The
inclusion is never taken on trust: :func:`verify_center` checks it by one
LP per facet of the target body and reports the minimal slack.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np
from scipy.spatial import ConvexHull

from . import linalg
from .errors import CenterVerificationFailed, DegenerateBody
from .linalg import Scalar, is_exact, zero_tol
from .lp import linprog
from .polytope import HPolytope, VPolytope, translate_h, vertex_enum


class CenterCheck(NamedTuple):
    holds: bool
    margin: Scalar


@dataclass
class CenteredBody:
    body: HPolytope
    center: np.ndarray
    contraction: Scalar
    margin: Scalar


# -- centroid -----------------------------------------------------------------

def _simplex_moments(X: np.ndarray, simplices, exact: bool):
    d = X.shape[1]
    fact = math.factorial(d)
    total = Fraction(0) if exact else 0.0
    moment = np.array([total] * d, dtype=object if exact else float)
    for s in simplices:
        S = X[list(s)]
        vol = abs(linalg.determinant(S[1:] - S[0])) / fact
        total = total + vol
        moment = moment + vol * S.sum(axis=0) / (d + 1)
    return total, moment


def _affine_dim(X: np.ndarray, idx) -> int:
    idx = sorted(idx)
    if len(idx) <= 1:
        return len(idx) - 1
    return linalg.rank(X[idx[1:]] - X[idx[0]])


def pulling_triangulation(X: np.ndarray, facets: list[frozenset], k: int) -> list[tuple]:
    """Triangulate a k-polytope from its vertices and facet incidence sets.

    A j-face is coned from its smallest vertex over the triangulations of
    its (j-1)-faces that avoid that vertex; the (j-1)-faces of a face ``F``
    are the sets ``F & G`` of dimension j-1 for facets ``G``.  Returns
    k-simplices as tuples of row indices of ``X``.
    """
    dims: dict[frozenset, int] = {}

    def dim(F):
        if F not in dims:
            dims[F] = _affine_dim(X, F)
        return dims[F]

    faces = [F for F in dict.fromkeys(facets) if dim(F) == k - 1]
    memo: dict[frozenset, list[tuple]] = {}

    def tri(F: frozenset, j: int) -> list[tuple]:
        if j == 0:
            return [(next(iter(F)),)]
        if F in memo:
            return memo[F]
        apex = min(F)
        out = []
        for S in sorted({F & G for G in faces if F & G != F}, key=sorted):
            if apex in S or dim(S) != j - 1:
                continue
            out.extend((apex,) + t for t in tri(S, j - 1))
        memo[F] = out
        return out

    return tri(frozenset(range(len(X))), k)


def _facet_incidence(X: np.ndarray, W: np.ndarray, seed: np.ndarray) -> list[frozenset]:
    vals = (X - seed) @ W.T
    if is_exact(X):
        hit = vals == 1
    else:
        hit = np.abs(vals - 1) <= 10 * linalg.get_tolerance()
    return [frozenset(np.flatnonzero(hit[:, i]).tolist()) for i in range(W.shape[0])]


def centroid(P: VPolytope, facets: Optional[HPolytope] = None, method: str = "auto") -> np.ndarray:
    """Centroid of the solid ``conv(P)``.

    The body is cut into simplices coned from the mean of the points over a
    triangulated boundary.  Float input takes the boundary triangulation
    from Qhull; exact input (or ``method="triangulate"``) uses an exact
    pulling triangulation driven by facet incidences.  ``facets`` may supply
    the H-form of ``conv(P)`` (origin interior) to skip recomputing it.
    """
    X = P.points
    d = P.dim
    exact = is_exact(X)
    if d == 1:
        hi, lo = X.max(), X.min()
        if hi - lo <= zero_tol(X):
            raise DegenerateBody("segment has zero length")
        return np.array([(hi + lo) / 2], dtype=X.dtype)
    seed = X.sum(axis=0) / len(X)
    if method == "auto":
        method = "triangulate" if exact else "qhull"
    if method == "qhull":
        Xf = linalg.as_float(X)
        try:
            hull = ConvexHull(Xf)
        except Exception as exc:
            raise DegenerateBody(f"Qhull rejected the body: {exc}") from None
        seedf = Xf.mean(axis=0)
        B = Xf[hull.simplices] - seedf
        vols = np.abs(np.linalg.det(B)) / math.factorial(d)
        total = vols.sum()
        if total <= linalg.get_tolerance():
            raise DegenerateBody(f"volume {total:.3g}")
        cents = (seedf + Xf[hull.simplices].sum(axis=1)) / (d + 1)
        return (vols[:, None] * cents).sum(axis=0) / total
    if method != "triangulate":
        raise ValueError(f"unknown method {method!r}")
    if facets is not None:
        W = facets.normals
        if exact and not is_exact(W):
            W = linalg.as_exact(W)
        # shift the H-form {<x, w> <= 1} to one centered at ``seed``
        W = translate_h(HPolytope(W, d), seed).normals
    else:
        W = vertex_enum(HPolytope(X - seed, d)).points
    incidence = _facet_incidence(X, W, seed)
    simplices = [(s, F) for F in incidence for s in _facet_simplices(X, F, incidence, d)]
    Y = np.vstack([X, seed[None, :]])
    apex = len(X)
    total, moment = _simplex_moments(Y, [s + (apex,) for s, _ in simplices], exact)
    if total <= zero_tol(X):
        raise DegenerateBody(f"volume {float(total):.3g}")
    return moment / total


def _facet_simplices(X, F, incidence, d):
    """(d-1)-simplices triangulating the facet with vertex set ``F``."""
    if _affine_dim(X, F) != d - 1:
        return []
    sub = sorted(F)
    local = {j: i for i, j in enumerate(sub)}
    ridges = [frozenset(local[j] for j in F & G) for G in incidence if F & G and F & G != F]
    return [tuple(sub[i] for i in t) for t in pulling_triangulation(X[sub], ridges, d - 1)]


# -- verification -------------------------------------------------------------

def verify_center(K: HPolytope, c, lam: Scalar, vertices: Optional[np.ndarray] = None) -> CenterCheck:
    """Check ``K - c`` inside ``-lam (K - c)``.

    With ``v'_i`` the normals of ``K - c``, the target body is
    ``{x : <x, -v'_i / lam> <= 1}``; each constraint is maximized over
    ``K - c`` and the margin is the minimal slack ``1 - max``.  If the
    vertices of ``K`` are passed, the maxima are read off them instead of
    solving LPs.
    """
    Kc = translate_h(K, c)
    V = Kc.normals
    d = K.dim
    exact = is_exact(V)
    if vertices is not None:
        Y = linalg.like(V, vertices) - (linalg.as_exact(c) if exact else np.asarray(c, dtype=float))
        lows = (Y @ V.T).min(axis=0)
    else:
        lows = []
        for v in V:
            res = linprog(v, A_ub=V, b_ub=linalg.like(V, np.ones(len(V))),
                          free=range(d), exact=exact)
            lows.append(res.fun)
    slacks = [1 - (-low) / lam for low in lows]
    margin = min(slacks)
    return CenterCheck(bool(margin >= -zero_tol(V)), margin)


def steinitz_center(K: HPolytope, vertices: Optional[VPolytope] = None) -> CenteredBody:
    """Centroid of ``K`` together with a verified contraction factor ``d``."""
    d = K.dim
    if vertices is None:
        vertices = vertex_enum(K)
    c = centroid(vertices, facets=K)
    check = verify_center(K, c, d, vertices=vertices.points)
    if not check.holds:
        if K.exact or d > 3:
            raise CenterVerificationFailed(f"margin {float(check.margin):.3g} at lambda = {d}")
        Ke = K.to_exact()
        ve = vertex_enum(Ke)
        c = centroid(ve, facets=Ke)
        check = verify_center(Ke, c, d, vertices=ve.points)
        if not check.holds:
            raise CenterVerificationFailed(f"exact margin {check.margin} at lambda = {d}")
        K = Ke
    return CenteredBody(K, c, d, check.margin)
