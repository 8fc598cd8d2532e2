"""Synthetic benchmark generators with ground-truth edge masks, plus the
rank-based AUC metric for edge attributions.

All randomness comes from numpy's default_rng (PCG64) seeded once per
corpus, so a (kind, args, seed) triple always reproduces byte-identical
datasets.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import DataFormatError, UndefinedMetricError
from .graphs import Graph, _graph_from_obj, graph_to_json

FEATURE_DIM = 10

HOUSE_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 4)]  # 5-cycle + roof chord
PENTAGON_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]
STAR_EDGES = [(0, 1), (0, 2)]  # center + two leaves


@dataclass(frozen=True)
class DatasetRecord:
    graph: Graph
    label: int
    gt_edge_mask: tuple[int, ...]  # 1 = planted motif edge
    motif_count: int

    def __post_init__(self):
        if len(self.gt_edge_mask) != self.graph.num_undirected_edges:
            raise DataFormatError("gt_edge_mask length != undirected edge count")


def _ba_tree_edges(num_nodes: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Preferential attachment with one edge per new node (m=1)."""
    edges = [(0, 1)]
    repeated = [0, 1]
    for v in range(2, num_nodes):
        target = repeated[rng.integers(0, len(repeated))]
        edges.append((target, v))
        repeated.extend((target, v))
    return edges


def _attach_motif(
    base_edges: list[tuple[int, int]],
    base_nodes: int,
    motif: list[tuple[int, int]],
    offset: int,
    rng: np.random.Generator,
) -> tuple[list[tuple[int, int]], list[int]]:
    """Append a motif copy at node offset, joined to the base by one
    unflagged edge; returns (all edges, mask of the appended edges)."""
    anchor = int(rng.integers(0, base_nodes))
    edges = list(base_edges)
    mask = [0] * len(base_edges)
    edges.append((anchor, offset))
    mask.append(0)
    for u, v in motif:
        edges.append((offset + u, offset + v))
        mask.append(1)
    return edges, mask


def gen_ba2motifs_mini(
    n_graphs: int, base_nodes: int = 20, seed: int = 0
) -> list[DatasetRecord]:
    """Balanced two-class corpus: preferential-attachment base plus one
    planted motif, house (class 0) or pentagon (class 1)."""
    if base_nodes < 5:
        raise ValueError("base_nodes must be >= 5")
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n_graphs):
        label = i % 2
        motif = HOUSE_EDGES if label == 0 else PENTAGON_EDGES
        base = _ba_tree_edges(base_nodes, rng)
        edges, mask = _attach_motif(base, base_nodes, motif, base_nodes, rng)
        features = np.ones((base_nodes + 5, FEATURE_DIM))
        records.append(
            DatasetRecord(
                graph=Graph.undirected(features, edges, label=label),
                label=label,
                gt_edge_mask=tuple(mask),
                motif_count=1,
            )
        )
    return records


def gen_varsize_motifs(
    n_graphs: int, max_motifs: int = 3, base_nodes: int = 12, seed: int = 0
) -> list[DatasetRecord]:
    """Class 1 graphs carry 1..max_motifs vertex-disjoint 3-node stars, so
    ground-truth explanations vary in size and can be disconnected; class 0
    graphs carry none."""
    if max_motifs < 1:
        raise ValueError("max_motifs must be >= 1")
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n_graphs):
        label = i % 2
        edges = _ba_tree_edges(base_nodes, rng)
        mask = [0] * len(edges)
        count = 0
        total_nodes = base_nodes
        if label == 1:
            count = int(rng.integers(1, max_motifs + 1))
            for _ in range(count):
                edges, extra = _attach_motif(
                    edges, base_nodes, STAR_EDGES, total_nodes, rng
                )
                mask = mask + extra[len(mask) :]
                total_nodes += 3
        features = np.ones((total_nodes, FEATURE_DIM))
        records.append(
            DatasetRecord(
                graph=Graph.undirected(features, edges, label=label),
                label=label,
                gt_edge_mask=tuple(mask),
                motif_count=count,
            )
        )
    return records


def edge_mask_auc(scores, gt_mask) -> float:
    """ROC AUC of per-edge scores against a binary mask, rank-based; tied
    scores contribute half credit per tied pair."""
    scores = np.asarray(scores, dtype=np.float64)
    gt = np.asarray(gt_mask, dtype=np.int64)
    if scores.shape != gt.shape:
        raise ValueError("scores and mask must have equal length")
    pos = int(gt.sum())
    neg = len(gt) - pos
    if pos == 0 or neg == 0:
        raise UndefinedMetricError("mask must contain a positive and a negative")
    ranks = rankdata(scores)
    return float((ranks[gt == 1].sum() - pos * (pos + 1) / 2) / (pos * neg))


def record_to_json(rec: DatasetRecord) -> str:
    obj = {
        "graph": json.loads(graph_to_json(rec.graph)),
        "label": rec.label,
        "gt_edge_mask": list(rec.gt_edge_mask),
        "motif_count": rec.motif_count,
    }
    return json.dumps(obj, separators=(",", ":"))


def save_dataset(records, path) -> None:
    """One JSON record per line."""
    with open(path, "w") as fh:
        for rec in records:
            fh.write(record_to_json(rec))
            fh.write("\n")


def load_dataset(path) -> list[DatasetRecord]:
    records = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                records.append(
                    DatasetRecord(
                        graph=_graph_from_obj(obj["graph"]),
                        label=int(obj["label"]),
                        gt_edge_mask=tuple(int(x) for x in obj["gt_edge_mask"]),
                        motif_count=int(obj["motif_count"]),
                    )
                )
            except (KeyError, ValueError, json.JSONDecodeError) as exc:
                raise DataFormatError(f"line {lineno}: {exc}") from exc
    return records


def dataset_checksum(records) -> str:
    """SHA-256 over the serialized records; pins generator determinism."""
    digest = hashlib.sha256()
    for rec in records:
        digest.update(record_to_json(rec).encode())
        digest.update(b"\n")
    return digest.hexdigest()
