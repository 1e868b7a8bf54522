"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 a runtime certificate failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

from . import linalg
from .errors import CertificateError, GeometryError
from .experiment import COLUMNS, run_experiment, to_csv, to_svg
from .instances import STYLES, generate
from .oracle import best_subset_radius
from .polytope import HPolytope, VPolytope, vertex_enum
from .serialization import InputError, dumps, loads_polytope, parse_matrix, polytope_to_dict
from .steinitz import certify, select_from_points, select_vertices
from .upperbound import UnitVectorSystem, no_ball_certificate, witness

EXIT_OK, EXIT_INPUT, EXIT_CERTIFICATE = 0, 1, 2

EXPERIMENT_HELP = f"""\
Run random instances through the selection pipeline.

CSV columns: {", ".join(COLUMNS)}.
  seed             per-instance seed derived from --seed, d and the index
  d                dimension
  vertex_count     vertices of the generated polytope
  selection_size   number of selected vertices (at most 2d)
  certified_radius inscribed radius of the selected hull
  oracle_radius    best radius over all subsets of 2d vertices (--oracle, small instances)
  bound            1/(5 d^2)
  runtime_ms       wall time of generation + selection (--timing only)
"""


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _load_vpolytope(path: str, exact: bool) -> VPolytope:
    P = loads_polytope(_read_text(path))
    if isinstance(P, HPolytope):
        P = vertex_enum(P.to_exact() if exact else P)
    return P.to_exact() if exact and not P.exact else P


def _emit(payload: dict, args, columns: Optional[Sequence[str]] = None) -> None:
    if args.format == "csv":
        cols = list(columns or payload.keys())
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        row = []
        for c in cols:
            v = json.loads(dumps(payload[c]))
            row.append(json.dumps(v) if isinstance(v, (list, dict)) else v)
        w.writerow(row)
        _write(buf.getvalue(), args.out)
    else:
        _write(dumps(payload) + "\n", args.out)


def _parse_indices(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"field 'indices': expected comma-separated integers, got {text!r}") from None


def _parse_dims(text: str) -> list[int]:
    dims: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        try:
            if "-" in part:
                lo, hi = (int(t) for t in part.split("-", 1))
                dims.extend(range(lo, hi + 1))
            else:
                dims.append(int(part))
        except ValueError:
            raise InputError(f"field 'dim': cannot parse {part!r}") from None
    if any(d < 1 for d in dims):
        raise InputError("field 'dim': dimensions must be positive")
    return dims


# -- commands -----------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.dim is None or args.facets is None:
        raise InputError("field 'dim'/'facets': both --dim and --facets are required")
    Q = generate(int(args.dim), args.facets, args.seed, args.style)
    if args.format == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(
            [[repr(float(x)) for x in row] for row in Q.points])
        _write(buf.getvalue(), args.out)
    else:
        _write(dumps(polytope_to_dict(Q)) + "\n", args.out)
    return EXIT_OK


def cmd_select(args) -> int:
    Q = _load_vpolytope(args.input, args.exact)
    if args.eps is not None:
        sel = select_from_points(Q.points, args.eps)
    else:
        sel = select_vertices(Q)
    _emit(sel.to_dict(with_trail=not args.no_trail), args,
          ["indices", "certified_radius", "bound"] if args.format == "csv" else None)
    return EXIT_OK


def cmd_certify(args) -> int:
    Q = _load_vpolytope(args.input, args.exact)
    idx = _parse_indices(args.indices)
    bad = [i for i in idx if not 0 <= i < len(Q)]
    if bad:
        raise InputError(f"field 'indices': {bad[0]} out of range for {len(Q)} points")
    r = certify(Q, idx, exact=True if args.exact else None)
    _emit({"indices": idx, "certified_radius": r.value,
           "certified_radius_squared": r.squared}, args)
    return EXIT_OK


def cmd_oracle(args) -> int:
    Q = _load_vpolytope(args.input, args.exact)
    k = args.k if args.k is not None else 2 * Q.dim
    res = best_subset_radius(Q, k, exact=True if args.exact else None)
    _emit(res.to_dict(), args)
    return EXIT_OK


def cmd_witness(args) -> int:
    try:
        obj = json.loads(_read_text(args.input))
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    rows = obj.get("data") if isinstance(obj, dict) else obj
    if rows is None:
        raise InputError("field 'data': missing")
    U = linalg.as_float(parse_matrix(rows, "data", obj.get("dim") if isinstance(obj, dict) else None))
    if len(U) == 0:
        raise InputError("field 'data': no vectors")
    try:
        system = UnitVectorSystem.normalized(U) if args.normalize else UnitVectorSystem(U)
    except ValueError as e:
        raise InputError(f"field 'data': {e}") from None
    w = witness(system)
    payload = w.to_dict()
    if args.rho is not None:
        payload["rho"] = args.rho
        payload["excludes_ball"] = no_ball_certificate(system, args.rho, w)
    _emit(payload, args)
    return EXIT_OK


def cmd_experiment(args) -> int:
    dims = _parse_dims(args.dim if args.dim is not None else "2-5")
    records = run_experiment(dims, args.instances, args.seed, max_facets=args.facets or 20,
                             oracle=args.oracle, timing=args.timing, workers=args.workers,
                             style=args.style)
    _write(to_csv(records), args.out)
    if args.svg:
        _write(to_svg(records), args.svg)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tolerance", type=float, help="float comparison tolerance (default 1e-9)")
    common.add_argument("--exact", action="store_true", help="force rational arithmetic")

    parser = argparse.ArgumentParser(
        prog="qsteinitz",
        description="Select at most 2d vertices of a polytope containing the unit ball "
                    "whose hull contains a certified ball of radius 1/(5 d^2).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a random polytope containing B^d")
    p.add_argument("--dim", type=int)
    p.add_argument("--facets", type=int, help="facets (tangent) or points (sphere-points)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--style", choices=STYLES, default="tangent")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("select", parents=[common], help="select at most 2d vertices")
    p.add_argument("input", help="polytope JSON file or - for stdin")
    p.add_argument("--eps", type=float,
                   help="treat input as a point set and cover (1-eps)B^d first (eps <= 1/6)")
    p.add_argument("--no-trail", action="store_true", help="omit intermediate objects")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("certify", parents=[common], help="inscribed radius of a vertex subset")
    p.add_argument("input")
    p.add_argument("--indices", required=True, help="comma-separated vertex indices")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("oracle", parents=[common], help="best radius over all subsets of k vertices")
    p.add_argument("input")
    p.add_argument("--k", type=int, help="subset size bound (default 2d)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("witness", parents=[common],
                       help="point q certifying that conv{+-u_i} misses balls of radius > 1/|q|")
    p.add_argument("input", help='JSON {"dim": d, "data": [[...], ...]} of unit vectors')
    p.add_argument("--normalize", action="store_true", help="rescale the vectors to unit length")
    p.add_argument("--rho", type=float, help="also report whether rho*B^d is excluded")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("experiment", parents=[common], help="batch run, CSV and SVG output",
                       description=EXPERIMENT_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--dim", help="dimensions, e.g. 2-5 or 2,3 (empty string for none)")
    p.add_argument("--instances", type=int, default=10, help="instances per dimension")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--facets", type=int, help="maximal facet count (default 20)")
    p.add_argument("--style", choices=STYLES, default="tangent")
    p.add_argument("--svg", help="also write the scatter plot here")
    p.add_argument("--oracle", action="store_true", help="fill oracle_radius on small instances")
    p.add_argument("--timing", action="store_true", help="fill runtime_ms")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with linalg.tolerance(args.tolerance if args.tolerance is not None else linalg.get_tolerance()):
            return args.func(args)
    except CertificateError as e:
        print(f"certificate violated: {e}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except (InputError, GeometryError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
