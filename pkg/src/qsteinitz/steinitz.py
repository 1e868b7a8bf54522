"""Select at most 2d vertices of a polytope ``Q`` containing the unit ball
whose hull still contains the ball of radius ``1 / (5 d^2)``.

The route goes through two polarities.  With ``K`` the polar of ``Q`` and
``c`` its centroid, ``L = (K - c)°`` satisfies ``L  inside  -d L`` and
``L  contains  B/2``; the sparse approximation of ``L`` picks at most 2d of
its vertices, and each vertex of ``L`` is the image of a vertex of ``Q``
under ``v -> v / (1 - <c, v>)``.  The selected vertices of ``Q`` are then
certified directly by computing the inscribed radius of their hull.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .centers import steinitz_center
from .errors import CertificateViolated, InputLacksUnitBall
from .linalg import zero_tol
from .polytope import (Radius, VPolytope, extreme_indices, inscribed_radius_origin,
                       polar_v_to_h, translate_h, vertex_enum)
from .sparse import SparseCertificate, caratheodory_vertices, sparse_approximate

# exact re-certification is used up to this dimension
EXACT_CERTIFY_MAX_DIM = 3


def steinitz_bound(d: int) -> Fraction:
    """Guaranteed radius ``1 / (5 d^2)`` for polytopes (``1`` when d = 1)."""
    return Fraction(1) if d == 1 else Fraction(1, 5 * d * d)


def general_bound(d: int) -> Fraction:
    """Guaranteed radius ``1 / (6 d^2)`` for arbitrary point sets."""
    return Fraction(1) if d == 1 else Fraction(1, 6 * d * d)


@dataclass
class Selection:
    indices: list[int]
    certified_radius: Radius
    bound: Fraction
    trail: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.indices)

    def to_dict(self, with_trail: bool = True) -> dict:
        out = {
            "indices": list(self.indices),
            "certified_radius": self.certified_radius.value,
            "certified_radius_squared": self.certified_radius.squared,
            "bound": self.bound,
        }
        if with_trail:
            t = self.trail
            cert: Optional[SparseCertificate] = t.get("certificate")
            out["trail"] = {
                "k_normals": t.get("k_normals"),
                "center": t.get("center"),
                "center_margin": t.get("center_margin"),
                "l_vertices": t.get("l_vertices"),
                "k_max_vertex_norm": t.get("k_max_vertex_norm"),
                "l_inradius": t.get("l_inradius"),
                "polar_norm_bound": t.get("polar_norm_bound"),
                "certificate": cert.to_dict() if cert is not None else None,
            }
        return out


def below(r: Radius, threshold) -> bool:
    """``r < threshold``: exact for exact radii, with slack ``tau`` otherwise."""
    if isinstance(r.squared, Fraction):
        return r < threshold
    return r.value < float(threshold) - linalg.get_tolerance()


def check_contains_unit_ball(Q: VPolytope) -> tuple[bool, float]:
    """Whether ``B^d`` lies in ``conv(Q)``; the margin is ``radius - 1``."""
    r = inscribed_radius_origin(Q)
    return not below(r, 1), r.value - 1


def certify(Q: VPolytope, indices: Sequence[int], exact: Optional[bool] = None) -> Radius:
    """Inscribed radius (origin-centered) of the hull of ``Q[indices]``.

    Exact rational arithmetic is used when ``exact`` is true, by default
    for d <= 3.
    """
    sub = Q.subset(indices)
    if exact is None:
        exact = Q.dim <= EXACT_CERTIFY_MAX_DIM
    if exact and not sub.exact:
        sub = sub.to_exact()
    return inscribed_radius_origin(sub)


def select_vertices(Q: VPolytope, mode: str = "auto", check_input: bool = True) -> Selection:
    """At most 2d vertices of ``Q`` with certified radius ``>= 1 / (5 d^2)``.

    ``Q`` must contain the unit ball.  ``mode`` is passed to the maximal
    volume simplex search.  All intermediate objects land in ``trail``.
    Raises :class:`InputLacksUnitBall` for invalid input and
    :class:`CertificateViolated` if any runtime certificate fails.
    """
    d = Q.dim
    tol = zero_tol(Q.points)
    if check_input:
        ok, margin = check_contains_unit_ball(Q)
        if not ok:
            raise InputLacksUnitBall(f"inscribed radius {1 + margin:.6g} < 1")
    ext = extreme_indices(Q)
    Qe = Q.subset(ext)

    K = polar_v_to_h(Qe, check=False)
    k_vertices = vertex_enum(K)
    k_max = max(linalg.sqnorm(v) for v in k_vertices.points)
    if k_max > 1 + 2 * tol:
        raise CertificateViolated(f"polar vertex of norm {math.sqrt(k_max):.6g} > 1")

    centered = steinitz_center(K, vertices=k_vertices)
    c = centered.center
    Kc = translate_h(centered.body, c)
    L = VPolytope(Kc.normals, d, merge=False)
    l_ext = extreme_indices(L)
    L = L.subset(l_ext)
    l_radius = inscribed_radius_origin(L)
    if below(l_radius, Fraction(1, 2)):
        raise CertificateViolated(f"L has inscribed radius {l_radius.value:.6g} < 1/2")

    # L contains -d L because K - c does; no need to re-check by LP
    cert = sparse_approximate(L, d, mode=mode, check_precondition=False)
    chosen = sorted(ext[l_ext[j]] for j in cert.selected)

    radius = certify(Q, chosen)
    bound = steinitz_bound(d)
    if below(radius, bound):
        raise CertificateViolated(f"certified radius {radius.value:.6g} below 1/(5d^2) = {float(bound):.6g}")
    polar_bound = 2 * (d + 2) * d + 1
    trail = {
        "extreme": ext,
        "k_normals": Qe.points,
        "k_vertices": k_vertices.points,
        "k_max_vertex_norm": math.sqrt(k_max),
        "center": c,
        "center_margin": centered.margin,
        "l_vertices": L.points,
        "l_inradius": l_radius.value,
        "certificate": cert,
        "polar_norm_bound": polar_bound,
        "polar_norm": 1 / radius.value if radius.squared else math.inf,
    }
    return Selection(chosen, radius, bound, trail)


def _cube_face_net(d: int, delta: float) -> np.ndarray:
    """Unit vectors such that every unit vector is within ``delta`` of one.

    Grid points on the faces of ``[-1, 1]^d`` with spacing ``h`` are within
    ``h sqrt(d - 1) / 2`` of every face point, and radial projection onto
    the ball is 1-Lipschitz outside it.
    """
    if d == 1:
        return np.array([[1.0], [-1.0]])
    h = 2 * delta / math.sqrt(d - 1)
    k = math.ceil(2 / h) + 1
    ticks = np.linspace(-1.0, 1.0, k)
    grid = np.array(np.meshgrid(*[ticks] * (d - 1), indexing="ij")).reshape(d - 1, -1).T
    pts = []
    for axis in range(d):
        for sign in (1.0, -1.0):
            face = np.insert(grid, axis, sign, axis=1)
            pts.append(face)
    P = np.concatenate(pts)
    P = np.unique(np.round(P, 12), axis=0)
    return P / np.linalg.norm(P, axis=1, keepdims=True)


def finite_subset_cover(points, eps: float) -> list[int]:
    """Indices of a finite subset whose hull contains ``(1 - eps) B^d``.

    Requires ``B^d`` inside ``conv(points)``.  A ``delta``-net of the unit
    sphere with ``delta = sqrt(2 eps - eps^2)`` has a hull containing
    ``(1 - eps) B^d``; each net point is written as a convex combination of
    at most ``d + 1`` input points and the union of the supports is returned.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    Q = VPolytope(points, merge=False)
    ok, margin = check_contains_unit_ball(Q)
    if not ok:
        raise InputLacksUnitBall(f"inscribed radius {1 + margin:.6g} < 1")
    P = linalg.as_float(Q.points)
    ext = extreme_indices(VPolytope(P, merge=False))
    E = P[ext]
    delta = math.sqrt(2 * eps - eps * eps)
    chosen: set[int] = set()
    for x in _cube_face_net(Q.dim, delta):
        dec = caratheodory_vertices(E, x)
        chosen.update(ext[i] for i in dec.indices)
    return sorted(chosen)


def select_from_points(points, eps: float = 0.1, mode: str = "auto") -> Selection:
    """At most 2d of ``points`` whose hull contains ``B^d / (6 d^2)``.

    ``conv(points)`` must contain ``B^d``.  The finite cover is rescaled by
    ``1 / (1 - eps)`` to meet the polytope hypothesis, which costs a factor
    ``1 - eps`` in the radius; ``eps <= 1/6`` keeps the result above
    ``1 / (6 d^2)``.
    """
    if eps > Fraction(1, 6):
        raise ValueError("eps must be at most 1/6")
    P = linalg.as_float(np.asarray(points))
    P = P.reshape(len(P), -1)
    cover = finite_subset_cover(P, eps)
    Qf = VPolytope(P[cover] / (1 - eps), merge=False)
    sel = select_vertices(Qf, mode=mode)
    chosen = sorted(cover[i] for i in sel.indices)
    Q = VPolytope(P, merge=False)
    radius = certify(Q, chosen)
    bound = general_bound(Q.dim)
    if below(radius, bound):
        raise CertificateViolated(f"certified radius {radius.value:.6g} below 1/(6d^2)")
    trail = dict(sel.trail, cover=cover, eps=eps)
    return Selection(chosen, radius, bound, trail)
