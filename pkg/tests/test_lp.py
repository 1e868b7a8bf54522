from fractions import Fraction

import numpy as np
from scipy.optimize import linprog as scipy_linprog

from qsteinitz import linalg
from qsteinitz.lp import INFEASIBLE, UNBOUNDED, linprog, simplex_standard


def F(rows):
    return linalg.as_exact(np.array(rows, dtype=object))


def test_small_exact_lp():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    res = linprog(F([-1, -1]), F([[1, 2], [3, 1]]), F([4, 6]))
    assert res.ok
    assert list(res.x) == [Fraction(8, 5), Fraction(6, 5)]
    assert res.fun == Fraction(-14, 5)


def test_statuses():
    assert linprog(F([-1]), F([[-1]]), F([-1])).status == UNBOUNDED
    assert linprog(F([1]), F([[1]]), F([-1])).status == INFEASIBLE
    assert linprog(np.array([-1.0]), np.array([[-1.0]]), np.array([-1.0])).status == UNBOUNDED
    assert linprog(np.array([1.0]), np.array([[1.0]]), np.array([-1.0])).status == INFEASIBLE


def test_free_variables_and_equalities():
    # min x s.t. x + y = 1, y <= 3 with x free
    res = linprog(F([1, 0]), F([[0, 1]]), F([3]), F([[1, 1]]), F([1]), free=[0])
    assert res.ok and res.x[0] == -2 and res.fun == -2


def test_bland_rule_terminates_on_cycling_example():
    # Beale's example cycles under the textbook largest-coefficient rule
    c = [Fraction(x) for x in ("-3/4", "150", "-1/50", "6")]
    A = [[Fraction(x) for x in row] for row in (("1/4", "-60", "-1/25", "9"),
                                                 ("1/2", "-90", "-1/50", "3"),
                                                 ("0", "0", "1", "0"))]
    res = linprog(F(c), F(A), F([0, 0, 1]))
    assert res.ok and res.fun == Fraction(-1, 20)


def test_redundant_equalities_are_dropped():
    status, x = simplex_standard([Fraction(1), Fraction(1)],
                                 [[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)]],
                                 [Fraction(1), Fraction(2)])
    assert status == "optimal" and sum(x) == 1


def test_exact_simplex_agrees_with_highs(rng):
    for _ in range(150):
        n, m = int(rng.integers(2, 6)), int(rng.integers(1, 6))
        A = rng.integers(-4, 5, size=(m, n))
        b = rng.integers(0, 8, size=m)
        c = rng.integers(-5, 6, size=n)
        # box keeps everything bounded
        A = np.vstack([A, np.eye(n, dtype=int)])
        b = np.concatenate([b, np.full(n, 5)])
        ref = scipy_linprog(c, A_ub=A, b_ub=b, method="highs")
        res = linprog(F(c.tolist()), F(A.tolist()), F(b.tolist()))
        assert res.ok == (ref.status == 0)
        if res.ok:
            assert abs(float(res.fun) - ref.fun) < 1e-7
            assert all(v <= bi for v, bi in zip(F(A.tolist()) @ res.x, b))
            assert all(v >= 0 for v in res.x)
