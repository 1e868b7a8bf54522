"""Seeded random instances.

Random numbers come from SplitMix64, chosen so that ports in other
languages reproduce instances bit for bit.  One step is::

    state = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    return z ^ (z >> 31)

A uniform double in [0, 1) is ``(z >> 11) * 2^-53``.  Unit vectors are drawn
by rejection from the cube ``[-1, 1]^d`` (keep ``x`` with ``0 < |x|^2 <= 1``)
followed by division by ``sqrt(|x|^2)``; only IEEE-exact operations are
involved.  Per-instance seeds come from :func:`derive_seed`.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import GenerationFailed, GeometryError
from .polytope import HPolytope, VPolytope, origin_interior, vertex_enum

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MAX_ROUNDS = 1000
STYLES = ("tangent", "sphere-points")


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    """Fold integer keys into a seed: ``s = mix64(s + (k + 1) * GOLDEN)`` per key."""
    s = seed & MASK64
    for k in keys:
        s = mix64((s + (k + 1) * GOLDEN) & MASK64)
    return s


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * 2.0**-53
        return lo + (hi - lo) * u

    def below(self, n: int) -> int:
        """Integer in ``[0, n)`` (multiply-shift; bias below 2^-32 for small n)."""
        return ((self.next_u64() >> 32) * n) >> 32

    def unit_vector(self, d: int) -> np.ndarray:
        while True:
            x = [self.uniform(-1.0, 1.0) for _ in range(d)]
            sq = math.fsum(t * t for t in x)
            if 0.0 < sq <= 1.0:
                r = math.sqrt(sq)
                return np.array([t / r for t in x])


def tangent_polytope(normals, offsets) -> VPolytope:
    """Vertices of ``{x : <x, v_i> <= 1 + s_i}`` for unit ``v_i`` and ``s_i >= 0``.

    Each facet is at distance ``1 + s_i >= 1`` from the origin, so the result
    contains the unit ball.  Raises :class:`GenerationFailed` if unbounded.
    """
    V = np.asarray(normals, dtype=float)
    s = np.asarray(offsets, dtype=float)
    H = HPolytope(V / (1.0 + s)[:, None], V.shape[1])
    if not origin_interior(H.normals):
        raise GenerationFailed("facet normals do not surround the origin")
    return vertex_enum(H)


def _tangent(rng: SplitMix64, d: int, m: int) -> VPolytope:
    for _ in range(MAX_ROUNDS):
        V = np.array([rng.unit_vector(d) for _ in range(m)])
        s = np.array([rng.uniform() for _ in range(m)])
        if origin_interior(V):
            return tangent_polytope(V, s)
    raise GenerationFailed(f"no bounded tangent instance after {MAX_ROUNDS} rounds")


def _sphere_points(rng: SplitMix64, d: int, m: int) -> VPolytope:
    from .steinitz import check_contains_unit_ball

    lo, hi = math.sqrt(d), 2 * math.sqrt(d)
    for _ in range(MAX_ROUNDS):
        P = np.array([rng.uniform(lo, hi) * rng.unit_vector(d) for _ in range(m)])
        Q = VPolytope(P, d)
        try:
            if check_contains_unit_ball(Q)[0]:
                return Q
        except GeometryError:
            continue
    raise GenerationFailed(f"no sphere-points instance contains B^{d} after {MAX_ROUNDS} rounds")


def generate(d: int, m: int, seed: int, style: str = "tangent") -> VPolytope:
    """Random V-polytope containing the unit ball.

    ``tangent``: ``m`` random facets at distances uniform in ``[1, 2]``;
    ``sphere-points``: ``m`` points at radii uniform in ``[sqrt d, 2 sqrt d]``.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    if m < d + 1:
        raise ValueError(f"need at least d + 1 = {d + 1} facets or points, got {m}")
    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}; expected one of {STYLES}")
    rng = SplitMix64(seed)
    if style == "tangent":
        return _tangent(rng, d, m)
    return _sphere_points(rng, d, m)


def instance_facets(seed: int, d: int, index: int, max_facets: int = 20) -> int:
    """Facet count for experiment instance ``index``: uniform in ``[d + 1, max_facets]``."""
    hi = max(max_facets, d + 1)
    return d + 1 + SplitMix64(derive_seed(seed, d, index, 1)).below(hi - d)


def experiment_instance(seed: int, d: int, index: int, max_facets: int = 20,
                        style: str = "tangent") -> VPolytope:
    m = instance_facets(seed, d, index, max_facets)
    return generate(d, m, derive_seed(seed, d, index), style)


def random_unit_system(seed: int, d: int, n: Optional[int] = None) -> np.ndarray:
    """``n`` random unit vectors in R^d (``n`` uniform in ``[d, 2d + 2]`` if omitted)."""
    rng = SplitMix64(seed)
    if n is None:
        n = d + rng.below(d + 3)
    return np.array([rng.unit_vector(d) for _ in range(n)])
