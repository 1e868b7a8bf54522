import json
import re
from fractions import Fraction

import numpy as np
import pytest

from qsteinitz.polytope import HPolytope, VPolytope
from qsteinitz.serialization import InputError, dumps, loads_polytope, polytope_to_dict


def test_float_round_trip(rng):
    P = VPolytope(rng.standard_normal((6, 3)))
    back = loads_polytope(json.dumps(polytope_to_dict(P)))
    assert np.array_equal(back.points, P.points)


def test_rational_entries_make_exact_polytope():
    Q = loads_polytope('{"dim": 2, "rep": "V", "data": [["1/2", 1], [-1, "-3/4"], [0, 1]]}')
    assert Q.exact and Q.points[0, 0] == Fraction(1, 2) and Q.points[0, 1] == 1
    again = loads_polytope(json.dumps(polytope_to_dict(Q)))
    assert again.exact and (again.points == Q.points).all()


def test_h_representation():
    H = loads_polytope('{"dim": 2, "rep": "H", "data": [[1, 0], [0, 1], [-1, -1]]}')
    assert isinstance(H, HPolytope) and len(H) == 3
    assert polytope_to_dict(H)["rep"] == "H"


@pytest.mark.parametrize("text, field", [
    ('{"rep": "V", "data": [[1]]}', "'dim'"),
    ('{"dim": 0, "rep": "V", "data": [[1]]}', "'dim'"),
    ('{"dim": 2, "rep": "X", "data": [[1, 2]]}', "'rep'"),
    ('{"dim": 2, "rep": "V", "data": [[1, 2], [3]]}', "'data[1]'"),
    ('{"dim": 2, "rep": "V", "data": [[1, "a/b"]]}', "'data[0][1]'"),
    ('{"dim": 2, "rep": "V", "data": [[1, true]]}', "'data[0][1]'"),
    ('{"dim": 2, "rep": "V", "data": "nope"}', "'data'"),
    ('{"dim": 2, "rep": "H", "data": [[0, 0]]}', "'data'"),
])
def test_diagnostics_name_the_field(text, field):
    with pytest.raises(InputError, match=re.escape(field)):
        loads_polytope(text)


def test_invalid_json_reports_position():
    with pytest.raises(InputError, match="line 1"):
        loads_polytope('{"dim": 2,')


def test_dumps_handles_fractions_and_arrays():
    out = json.loads(dumps({"a": Fraction(3, 4), "b": np.array([1.5, 2.0]), "c": Fraction(2)}))
    assert out == {"a": "3/4", "b": [1.5, 2.0], "c": 2}
