"""Evaluation harness: fidelity-vs-sparsity curves, method comparison,
oracle gap reports, forward-count/timing reports, and DOT export.

Reports carry both a deterministic text table and a machine-readable dict;
only the bench timings depend on the environment, everything else is a pure
function of its inputs.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass

import numpy as np

from .explain import (
    Explanation,
    brute_force_best_subgraph,
    explain,
    fidelity_minus,
    fidelity_plus,
    ig_edge_scores,
    linear_gradient_scores,
    rank_edges,
    sa_edge_scores,
)
from .graphs import Graph
from .models import ModelSpec, forward

METHODS = ("linear-gradient", "sa", "ig")


@dataclass(frozen=True)
class CurvePoint:
    sparsity_level: float
    fidelity_plus: float
    fidelity_minus: float
    overall: float
    n_instances: int


def _method_scores(m: ModelSpec, g: Graph, c: int, method: str, counter=None):
    if method == "linear-gradient":
        return linear_gradient_scores(m, g, c, counter=counter)
    if method == "sa":
        return sa_edge_scores(m, g, c, counter=counter)
    if method == "ig":
        return ig_edge_scores(m, g, c, counter=counter)
    raise ValueError(f"unknown method {method!r}")


def fidelity_curve(
    m: ModelSpec, dataset, method: str, levels
) -> list[CurvePoint]:
    """Mean fidelity of the top-ceil((1 - level) * |E|) ranked edges per
    sparsity level, averaged over the dataset."""
    levels = list(levels)
    for level in levels:
        if not 0.0 <= level <= 1.0:
            raise ValueError(f"sparsity level {level} outside [0, 1]")
    rankings = []
    for rec in dataset:
        g = rec.graph
        original = forward(m, g)
        c = original.predicted_class
        ranked = rank_edges(_method_scores(m, g, c, method))
        rankings.append((g, c, original, ranked))
    points = []
    for level in levels:
        fplus_sum = fminus_sum = 0.0
        count = 0
        for g, c, original, ranked in rankings:
            k = math.ceil((1.0 - level) * g.num_undirected_edges)
            prefix = ranked[:k]
            fp = fidelity_plus(m, g, prefix, c, original=original)
            fm = fidelity_minus(m, g, prefix, c, original=original)
            fplus_sum += fp
            fminus_sum += fm
            count += 1
        points.append(
            CurvePoint(
                sparsity_level=level,
                fidelity_plus=fplus_sum / count,
                fidelity_minus=fminus_sum / count,
                overall=(fplus_sum - fminus_sum) / count,
                n_instances=count,
            )
        )
    return points


@dataclass(frozen=True)
class MethodSummary:
    method: str
    mean_overall: float
    mean_sparsity: float
    mean_forward_passes: float
    n_instances: int


def compare_methods(
    m: ModelSpec, dataset, methods=METHODS, k_range: str = "full"
) -> list[MethodSummary]:
    """Run every ranking method through the same prefix search and tabulate
    mean overall fidelity, chosen sparsity and forward passes."""
    summaries = []
    for method in methods:
        overall = spars = passes = 0.0
        for rec in dataset:
            e = explain(m, rec.graph, method=method, k_range=k_range)
            overall += e.overall
            spars += e.sparsity
            passes += e.forward_passes_used
        k = len(dataset)
        summaries.append(
            MethodSummary(
                method=method,
                mean_overall=overall / k,
                mean_sparsity=spars / k,
                mean_forward_passes=passes / k,
                n_instances=k,
            )
        )
    return summaries


@dataclass(frozen=True)
class OracleReport:
    n_evaluated: int
    n_skipped: int
    mean_gap: float
    max_gap: float
    mean_ratio: float  # mean over instances of search / oracle (1.0 when equal)
    gaps: tuple[float, ...]


def oracle_report(m: ModelSpec, dataset, cap: int = 14) -> OracleReport:
    """Exhaustive best vs prefix-search best per instance; the oracle can
    never lose, the report shows by how much it wins."""
    gaps = []
    ratios = []
    skipped = 0
    for rec in dataset:
        g = rec.graph
        if g.num_undirected_edges > cap:
            skipped += 1
            continue
        e = explain(m, g, method="linear-gradient", k_range="full")
        _, oracle_best = brute_force_best_subgraph(m, g, e.target_class, cap=cap)
        gaps.append(oracle_best - e.overall)
        if oracle_best > 0 and e.overall > 0:
            ratios.append(e.overall / oracle_best)
        else:
            ratios.append(1.0 if gaps[-1] == 0 else 0.0)
    if not gaps:
        return OracleReport(0, skipped, 0.0, 0.0, 0.0, ())
    return OracleReport(
        n_evaluated=len(gaps),
        n_skipped=skipped,
        mean_gap=float(np.mean(gaps)),
        max_gap=float(np.max(gaps)),
        mean_ratio=float(np.mean(ratios)),
        gaps=tuple(gaps),
    )


@dataclass(frozen=True)
class TimingRow:
    num_edges: int
    mean_seconds: float
    forward_passes: int


@dataclass(frozen=True)
class TimingReport:
    rows: tuple[TimingRow, ...]
    slope: float  # least-squares fit of forward passes vs |E|
    intercept: float
    max_residual: float


def _path_graph(num_edges: int, feature_dim: int) -> Graph:
    features = np.ones((num_edges + 1, feature_dim))
    return Graph.undirected(features, [(i, i + 1) for i in range(num_edges)])


def timing_report(m: ModelSpec, sizes, reps: int = 3) -> TimingReport:
    """Wall time plus exact forward-pass counts for path graphs of the given
    edge counts, with an affine fit of count vs |E|."""
    rows = []
    for size in sizes:
        g = _path_graph(size, m.input_dim)
        elapsed = []
        passes = None
        for _ in range(reps):
            t0 = time.perf_counter()
            e = explain(m, g, method="linear-gradient", k_range="full")
            elapsed.append(time.perf_counter() - t0)
            passes = e.forward_passes_used
        rows.append(
            TimingRow(
                num_edges=size,
                mean_seconds=float(np.mean(elapsed)),
                forward_passes=passes,
            )
        )
    if len(rows) >= 2:
        xs = np.array([r.num_edges for r in rows], dtype=np.float64)
        ys = np.array([r.forward_passes for r in rows], dtype=np.float64)
        slope, intercept = np.polyfit(xs, ys, 1)
        residual = float(np.max(np.abs(ys - (slope * xs + intercept))))
    elif rows:
        slope, intercept, residual = 0.0, float(rows[0].forward_passes), 0.0
    else:
        slope = intercept = residual = 0.0
    return TimingReport(
        rows=tuple(rows),
        slope=float(slope),
        intercept=float(intercept),
        max_residual=residual,
    )


def export_dot(g: Graph, explanation: Explanation | None, path) -> None:
    """DOT rendering with explanation edges bold red, the rest gray."""
    chosen = set(explanation.subgraph.edges) if explanation is not None else set()
    lines = ["graph explanation {"]
    lines.append('  node [shape=circle, fontsize=10];')
    for v in range(g.n):
        lines.append(f"  {v};")
    for i in range(g.num_undirected_edges):
        u, v = g.undirected_endpoints(i)
        if i in chosen:
            attrs = 'color="red", penwidth=3.0'
        else:
            attrs = 'color="gray", penwidth=1.0'
        lines.append(f"  {u} -- {v} [{attrs}];")
    lines.append("}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def curve_to_obj(points) -> list[dict]:
    return [
        {
            "sparsity_level": p.sparsity_level,
            "fidelity_plus": p.fidelity_plus,
            "fidelity_minus": p.fidelity_minus,
            "overall": p.overall,
            "n_instances": p.n_instances,
        }
        for p in points
    ]


def summaries_to_obj(summaries) -> list[dict]:
    return [
        {
            "method": s.method,
            "mean_overall": s.mean_overall,
            "mean_sparsity": s.mean_sparsity,
            "mean_forward_passes": s.mean_forward_passes,
            "n_instances": s.n_instances,
        }
        for s in summaries
    ]


def oracle_report_to_obj(r: OracleReport) -> dict:
    return {
        "n_evaluated": r.n_evaluated,
        "n_skipped": r.n_skipped,
        "mean_gap": r.mean_gap,
        "max_gap": r.max_gap,
        "mean_ratio": r.mean_ratio,
        "gaps": list(r.gaps),
    }


def timing_report_to_obj(r: TimingReport) -> dict:
    return {
        "rows": [
            {
                "num_edges": row.num_edges,
                "mean_seconds": row.mean_seconds,
                "forward_passes": row.forward_passes,
            }
            for row in r.rows
        ],
        "slope": r.slope,
        "intercept": r.intercept,
        "max_residual": r.max_residual,
    }


def format_table(rows: list[dict]) -> str:
    """Fixed-width text table with deterministic column order."""
    if not rows:
        return "(empty)\n"
    cols = list(rows[0].keys())
    cells = [[_fmt(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    out.append("  ".join("-" * w for w in widths))
    for row in cells:
        out.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(out) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def write_report(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
