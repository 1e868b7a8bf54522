"""JSON (de)serialization.

Polytopes use ``{"dim": d, "rep": "V" | "H", "data": [[...], ...]}`` with one
row per point (V) or per half-space normal ``<x, v> <= 1`` (H).  Entries are
JSON numbers or rational strings such as ``"3/4"``; any string entry makes
the whole polytope exact.  Floats are written in shortest round-trip form,
so reading back yields the same doubles.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any, Union

import numpy as np

from .polytope import HPolytope, Radius, VPolytope


class InputError(ValueError):
    """Malformed input; the message names the offending field."""


def _entry(x, field: str):
    if isinstance(x, bool):
        raise InputError(f"field '{field}': expected a number, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InputError(f"field '{field}': non-finite number")
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"field '{field}': cannot parse {x!r} as a rational") from None
    raise InputError(f"field '{field}': expected a number, got {type(x).__name__}")


def parse_matrix(rows, field: str = "data", dim: int | None = None) -> np.ndarray:
    """Rows of numbers/rational strings to a float or Fraction array."""
    if not isinstance(rows, list):
        raise InputError(f"field '{field}': expected a list of rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise InputError(f"field '{field}[{i}]': expected a list of numbers")
        if dim is not None and len(row) != dim:
            raise InputError(f"field '{field}[{i}]': expected {dim} entries, got {len(row)}")
        out.append([_entry(x, f"{field}[{i}][{j}]") for j, x in enumerate(row)])
    if dim is None and out and len({len(r) for r in out}) > 1:
        raise InputError(f"field '{field}': rows have different lengths")
    exact = any(isinstance(x, Fraction) for r in out for x in r)
    if exact:
        A = np.empty((len(out), dim if dim is not None else len(out[0])), dtype=object)
        for i, r in enumerate(out):
            for j, x in enumerate(r):
                A[i, j] = Fraction(x)
        return A
    return np.array(out, dtype=float).reshape(len(out), -1 if out else (dim or 0))


def polytope_from_dict(obj: Any) -> Union[VPolytope, HPolytope]:
    if not isinstance(obj, dict):
        raise InputError("top level: expected a JSON object")
    for key in ("dim", "rep", "data"):
        if key not in obj:
            raise InputError(f"field '{key}': missing")
    d = obj["dim"]
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise InputError(f"field 'dim': expected a positive integer, got {d!r}")
    rep = obj["rep"]
    if rep not in ("V", "H"):
        raise InputError(f"field 'rep': expected \"V\" or \"H\", got {rep!r}")
    A = parse_matrix(obj["data"], "data", d)
    if len(A) == 0:
        raise InputError("field 'data': no rows")
    if rep == "V":
        return VPolytope(A, d, merge=False)
    try:
        return HPolytope(A, d)
    except ValueError as e:
        raise InputError(f"field 'data': {e}") from None


def loads_polytope(text: str) -> Union[VPolytope, HPolytope]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    return polytope_from_dict(obj)


def to_jsonable(x: Any) -> Any:
    """Plain JSON values; Fractions become ``"p/q"`` strings (integers stay ints)."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Radius):
        return x.value
    if isinstance(x, np.ndarray):
        return [to_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        f = float(x)
        return f if math.isfinite(f) else None
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def polytope_to_dict(P: Union[VPolytope, HPolytope]) -> dict:
    rep, data = ("V", P.points) if isinstance(P, VPolytope) else ("H", P.normals)
    return {"dim": P.dim, "rep": rep, "data": to_jsonable(data)}


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2)
