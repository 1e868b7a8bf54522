"""Brute-force ground truth: the best origin-centered inscribed radius
reachable by the hull of at most k vertices.

Everything is derived from two exact tables over the whole vertex set:

* for each nonsingular d-subset ``T``: the solution ``x_T`` of
  ``<x, q_t> = 1 (t in T)`` and the mask of vertices violating ``<x_T, q> <= 1``;
* for each (d-1)-subset ``R`` of rank d-1: its kernel direction ``z_R`` and
  the masks of vertices with ``<z_R, q>`` positive / negative.

For a subset ``S`` the polar ``{x : <x, q> <= 1, q in S}`` is bounded iff
some ``T`` inside ``S`` is nonsingular and no ``R`` inside ``S`` yields a
recession ray; its vertices are the ``x_T`` with ``T`` inside ``S`` and no
violators in ``S``.  The squared radius is ``1 / max |x_T|^2``.  No LP and no
floating point enter when the input is exact.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg
from .errors import EnumerationTooLarge, SingularMatrix
from .linalg import is_exact, zero_tol
from .polytope import Radius, VPolytope

SUBSET_CAP = 10**6
# exact arithmetic is the default up to this dimension
EXACT_MAX_DIM = 3


@dataclass
class OracleResult:
    best_indices: list[int]
    best_radius: Radius
    subsets_evaluated: int

    def to_dict(self) -> dict:
        return {
            "best_indices": list(self.best_indices),
            "best_radius": self.best_radius.value,
            "best_radius_squared": self.best_radius.squared,
            "subsets_evaluated": self.subsets_evaluated,
        }


def _mask(flags) -> int:
    m = 0
    for j, f in enumerate(flags):
        if f:
            m |= 1 << j
    return m


class _Tables:
    def __init__(self, P: np.ndarray):
        n, d = P.shape
        tol = zero_tol(P)
        exact = is_exact(P)
        ones = linalg.like(P, np.ones(d))
        self.vertex: dict[tuple, tuple] = {}
        for T in itertools.combinations(range(n), d):
            B = P[list(T)]
            try:
                if exact:
                    x = linalg.solve_linear(B, ones)
                else:
                    if abs(np.linalg.det(B)) <= tol:
                        continue
                    x = np.linalg.solve(B, ones)
            except SingularMatrix:
                continue
            vals = P @ x
            self.vertex[T] = (linalg.sqnorm(x), _mask(v > 1 + tol for v in vals))
        self.ray: dict[tuple, tuple] = {}
        for R in itertools.combinations(range(n), d - 1):
            rows = P[list(R)] if R else np.zeros((0, d), dtype=P.dtype)
            z = linalg.null_vector(rows)
            if z is None:
                continue
            vals = P @ z
            self.ray[R] = (_mask(v > tol for v in vals), _mask(v < -tol for v in vals))


def _subset_radius_sq(S: tuple, tables: _Tables, d: int, zero):
    smask = _mask(j in S for j in range(max(S) + 1))
    best = None
    for T in itertools.combinations(S, d):
        entry = tables.vertex.get(T)
        if entry is None:
            continue
        sq, bad = entry
        if bad & smask:
            continue
        if best is None or sq > best:
            best = sq
    if best is None:
        return zero  # no vertex: rank deficient
    for R in itertools.combinations(S, d - 1):
        entry = tables.ray.get(R)
        if entry is None:
            continue
        pos, neg = entry
        if not pos & smask or not neg & smask:
            return zero
    return 1 / best


def best_subset_radius(Q: VPolytope, k: int, exact: Optional[bool] = None) -> OracleResult:
    """Maximum inscribed radius over all subsets of at most ``k`` vertices.

    Subsets are visited by size, then lexicographically; the first maximizer
    wins.  Subsets whose hull misses the origin in its interior score 0.
    Exact rational arithmetic is the default for d <= 3.
    """
    d = Q.dim
    P = Q.points
    if exact is None:
        exact = d <= EXACT_MAX_DIM
    P = linalg.as_exact(P) if exact else linalg.as_float(P)
    n = len(P)
    k = min(k, n)
    total = sum(math.comb(n, j) for j in range(1, k + 1))
    if total > SUBSET_CAP:
        raise EnumerationTooLarge(f"{total} subsets exceed {SUBSET_CAP}")
    zero = Fraction(0) if exact else 0.0
    # float ties within tau count as ties so the lexicographic rule decides
    slack = 1 if exact else 1 + linalg.get_tolerance()
    tables = _Tables(P)
    best_sq, best_S = zero, ()
    for size in range(d + 1, k + 1):
        for S in itertools.combinations(range(n), size):
            sq = _subset_radius_sq(S, tables, d, zero)
            if sq > best_sq * slack and sq > zero:
                best_sq, best_S = sq, S
    return OracleResult(list(best_S), Radius(best_sq, interior=bool(best_sq > 0)), total)
