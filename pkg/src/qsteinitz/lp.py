"""Linear programming with the two arithmetic policies.

``linprog`` minimizes ``c @ x`` subject to ``A_ub @ x <= b_ub``,
``A_eq @ x == b_eq`` and ``x >= 0`` except for the indices listed in
``free``.  Float problems go to HiGHS through :func:`scipy.optimize.linprog`
(dual simplex, so solutions are basic).  Problems with any exact
(``Fraction``) data are solved by a dense two-phase tableau simplex with
Bland's rule, which terminates and returns an exact basic optimal solution.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog as _scipy_linprog

from .linalg import as_exact, is_exact

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: Optional[np.ndarray] = None
    fun: Optional[object] = None

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def _rows(A, n):
    if A is None:
        return np.zeros((0, n))
    A = np.asarray(A)
    return A.reshape(-1, n)


def linprog(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None,
            free: Sequence[int] = (), exact: Optional[bool] = None) -> LPResult:
    c = np.asarray(c)
    n = c.shape[0]
    A_ub, A_eq = _rows(A_ub, n), _rows(A_eq, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub).reshape(-1)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq).reshape(-1)
    if exact is None:
        exact = any(is_exact(a) for a in (c, A_ub, b_ub, A_eq, b_eq) if a.size)
    if exact:
        return _linprog_exact(c, A_ub, b_ub, A_eq, b_eq, free)
    bounds = [(0, None)] * n
    for j in free:
        bounds[j] = (None, None)
    res = _scipy_linprog(
        np.asarray(c, dtype=float),
        A_ub=np.asarray(A_ub, dtype=float) if A_ub.size else None,
        b_ub=np.asarray(b_ub, dtype=float) if A_ub.size else None,
        A_eq=np.asarray(A_eq, dtype=float) if A_eq.size else None,
        b_eq=np.asarray(b_eq, dtype=float) if A_eq.size else None,
        bounds=bounds, method="highs-ds",
    )
    if res.status == 0:
        return LPResult(OPTIMAL, np.asarray(res.x, dtype=float), float(res.fun))
    if res.status == 2:
        return LPResult(INFEASIBLE)
    if res.status == 3:
        return LPResult(UNBOUNDED)
    raise RuntimeError(f"HiGHS failed: {res.message}")


def _linprog_exact(c, A_ub, b_ub, A_eq, b_eq, free) -> LPResult:
    n = c.shape[0]
    free = sorted(set(free))
    # columns: x (n), negative parts of free vars, slacks of the <= rows
    nf, ns = len(free), A_ub.shape[0]
    ncols = n + nf + ns
    rows, rhs = [], []
    for i in range(A_ub.shape[0]):
        row = [Fraction(0)] * ncols
        for j in range(n):
            row[j] = Fraction(A_ub[i, j])
        for k, j in enumerate(free):
            row[n + k] = -row[j]
        row[n + nf + i] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(b_ub[i]))
    for i in range(A_eq.shape[0]):
        row = [Fraction(0)] * ncols
        for j in range(n):
            row[j] = Fraction(A_eq[i, j])
        for k, j in enumerate(free):
            row[n + k] = -row[j]
        rows.append(row)
        rhs.append(Fraction(b_eq[i]))
    cost = [Fraction(0)] * ncols
    for j in range(n):
        cost[j] = Fraction(c[j])
    for k, j in enumerate(free):
        cost[n + k] = -cost[j]
    status, z = simplex_standard(cost, rows, rhs)
    if status != OPTIMAL:
        return LPResult(status)
    x = [z[j] for j in range(n)]
    for k, j in enumerate(free):
        x[j] -= z[n + k]
    fun = sum((cost[j] * z[j] for j in range(ncols)), Fraction(0))
    return LPResult(OPTIMAL, np.array(x, dtype=object), fun)


def simplex_standard(c: list, A: list[list], b: list) -> tuple[str, Optional[list]]:
    """Exact two-phase simplex for ``min c.x  s.t.  A x = b, x >= 0``.

    Returns ``(status, x)`` with ``x`` a basic optimal solution.
    """
    m = len(A)
    n = len(c)
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    # tableau rows hold [coeffs (n + m artificials) | rhs]
    T = [A[i] + [Fraction(int(k == i)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m

    def pivot(r: int, col: int) -> None:
        inv = 1 / T[r][col]
        T[r] = [v * inv for v in T[r]]
        for i in range(m):
            if i != r and T[i][col] != 0:
                f = T[i][col]
                T[i] = [a - f * p for a, p in zip(T[i], T[r])]
        basis[r] = col

    def run(cost: list, allowed: int) -> str:
        while True:
            # reduced costs
            cb = [cost[j] for j in basis]
            entering = None
            for j in range(allowed):
                if j in basis:
                    continue
                red = cost[j] - sum((cb[i] * T[i][j] for i in range(m) if T[i][j] != 0), Fraction(0))
                if red < 0:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL
            best = None
            for i in range(m):
                a = T[i][entering]
                if a > 0:
                    ratio = T[i][-1] / a
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            pivot(best[1], entering)

    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    run(phase1, width)
    if sum((T[i][-1] for i in range(m) if basis[i] >= n), Fraction(0)) != 0:
        return INFEASIBLE, None
    # drive remaining (zero-valued) artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                continue  # redundant row
            pivot(i, col)
        keep.append(i)
    T = [T[i] for i in keep]
    basis = [basis[i] for i in keep]
    m = len(T)
    T = [row[:n] + [row[-1]] for row in T]
    width = n
    status = run(list(c), n)
    if status != OPTIMAL:
        return status, None
    x = [Fraction(0)] * n
    for i in range(m):
        x[basis[i]] = T[i][-1]
    return OPTIMAL, x


def exact_problem(*arrays):
    """Convert LP data to exact arrays, leaving ``None`` untouched."""
    return tuple(None if a is None else as_exact(a) for a in arrays)
