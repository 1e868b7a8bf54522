"""Batch experiments: random instances through the selection pipeline.

CSV columns (fixed order)::

    seed, d, vertex_count, selection_size, certified_radius, oracle_radius, bound, runtime_ms

``seed`` is the per-instance seed, ``bound`` is ``1/(5 d^2)``,
``oracle_radius`` is filled only when the oracle is requested and feasible,
and ``runtime_ms`` only when timing is requested (timings would break
byte-identical reruns).  Rows are ordered by ``(d, instance index)``.
"""
from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import EnumerationTooLarge
from .instances import derive_seed, experiment_instance
from .oracle import best_subset_radius
from .steinitz import select_vertices, steinitz_bound

COLUMNS = ("seed", "d", "vertex_count", "selection_size", "certified_radius",
           "oracle_radius", "bound", "runtime_ms")
# the oracle runs only on instances this small
ORACLE_MAX_VERTICES = 12


@dataclass
class ExperimentRecord:
    seed: int
    d: int
    vertex_count: int
    selection_size: int
    certified_radius: float
    oracle_radius: Optional[float]
    bound: float
    runtime_ms: Optional[float]

    def row(self) -> list[str]:
        def num(x):
            return "" if x is None else repr(float(x))
        return [str(self.seed), str(self.d), str(self.vertex_count), str(self.selection_size),
                num(self.certified_radius), num(self.oracle_radius), num(self.bound),
                "" if self.runtime_ms is None else f"{self.runtime_ms:.3f}"]


def run_instance(seed: int, d: int, index: int, max_facets: int = 20, oracle: bool = False,
                 timing: bool = False, style: str = "tangent") -> ExperimentRecord:
    start = time.perf_counter()
    Q = experiment_instance(seed, d, index, max_facets, style)
    sel = select_vertices(Q)
    elapsed = (time.perf_counter() - start) * 1000
    oracle_r = None
    if oracle and len(Q) <= ORACLE_MAX_VERTICES:
        try:
            oracle_r = best_subset_radius(Q, 2 * d).best_radius.value
        except EnumerationTooLarge:
            pass
    return ExperimentRecord(derive_seed(seed, d, index), d, len(Q), sel.size,
                            sel.certified_radius.value, oracle_r, float(steinitz_bound(d)),
                            elapsed if timing else None)


def _run(args):
    return run_instance(*args)


def run_experiment(dims: Iterable[int], instances: int, seed: int, max_facets: int = 20,
                   oracle: bool = False, timing: bool = False, workers: int = 1,
                   style: str = "tangent") -> list[ExperimentRecord]:
    """One record per ``(d, index)``; ``workers > 1`` uses a process pool."""
    jobs = [(seed, d, i, max_facets, oracle, timing, style)
            for d in sorted(set(dims)) for i in range(instances)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run, jobs))
    return [_run(j) for j in jobs]


def to_csv(records: Sequence[ExperimentRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


# -- SVG ----------------------------------------------------------------------

WIDTH, HEIGHT = 1000, 700
_MARGIN = dict(left=90, right=40, top=60, bottom=80)


def _ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    span = hi - lo
    raw = span / n
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step) * step
    return [first + k * step for k in range(int((hi - first) / step + 1e-9) + 1)]


def to_svg(records: Sequence[ExperimentRecord]) -> str:
    """Scatter of ``rho d^2`` and ``rho sqrt(d)`` against ``d`` with the 1/5 line."""
    m = _MARGIN
    pw, ph = WIDTH - m["left"] - m["right"], HEIGHT - m["top"] - m["bottom"]
    dims = sorted({r.d for r in records}) or [1, 2]
    xlo, xhi = min(dims) - 0.5, max(dims) + 0.5
    ys = [r.certified_radius * r.d ** 2 for r in records] + \
         [r.certified_radius * math.sqrt(r.d) for r in records] + [0.0, 0.2]
    ylo, yhi = 0.0, max(ys) * 1.05 or 1.0

    def X(x):
        return m["left"] + (x - xlo) / (xhi - xlo) * pw

    def Y(y):
        return m["top"] + ph - (y - ylo) / (yhi - ylo) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="14">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<text x="{WIDTH / 2}" y="30" text-anchor="middle" font-size="18">'
           'Certified inscribed radius of the selected vertices, rescaled</text>']
    x0, y0 = m["left"], m["top"] + ph
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0 + pw}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{m["top"]}" x2="{x0}" y2="{y0}" stroke="black"/>')
    for d in dims:
        out.append(f'<line x1="{X(d):.2f}" y1="{y0}" x2="{X(d):.2f}" y2="{y0 + 6}" stroke="black"/>')
        out.append(f'<text x="{X(d):.2f}" y="{y0 + 24}" text-anchor="middle">{d}</text>')
    for t in _ticks(ylo, yhi):
        out.append(f'<line x1="{x0 - 6}" y1="{Y(t):.2f}" x2="{x0}" y2="{Y(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{x0 - 10}" y="{Y(t) + 5:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{x0 + pw / 2}" y="{HEIGHT - 25}" text-anchor="middle">dimension d</text>')
    out.append(f'<text transform="translate(25 {m["top"] + ph / 2}) rotate(-90)" '
               'text-anchor="middle">scaled certified radius</text>')
    out.append(f'<line x1="{x0}" y1="{Y(0.2):.2f}" x2="{x0 + pw}" y2="{Y(0.2):.2f}" '
               'stroke="gray" stroke-dasharray="6 4"/>')
    out.append(f'<text x="{x0 + pw - 4}" y="{Y(0.2) - 6:.2f}" text-anchor="end" fill="gray">'
               '1/5 (guaranteed for radius times d^2)</text>')
    counts: dict[int, int] = {}
    for r in records:
        k = counts.get(r.d, 0)
        counts[r.d] = k + 1
        # deterministic horizontal jitter keeps the points of one d apart
        jitter = ((k * 0.618034) % 1.0 - 0.5) * 0.3
        cx = X(r.d + jitter)
        out.append(f'<circle cx="{cx:.2f}" cy="{Y(r.certified_radius * r.d ** 2):.2f}" r="3" '
                   'fill="#1f77b4" fill-opacity="0.6"/>')
        out.append(f'<circle cx="{cx:.2f}" cy="{Y(r.certified_radius * math.sqrt(r.d)):.2f}" r="3" '
                   'fill="#d62728" fill-opacity="0.6"/>')
    lx, ly = x0 + 20, m["top"] + 10
    out.append(f'<circle cx="{lx}" cy="{ly}" r="5" fill="#1f77b4"/>')
    out.append(f'<text x="{lx + 12}" y="{ly + 5}">radius times d^2</text>')
    out.append(f'<circle cx="{lx}" cy="{ly + 24}" r="5" fill="#d62728"/>')
    out.append(f'<text x="{lx + 12}" y="{ly + 29}">radius times sqrt(d)</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
