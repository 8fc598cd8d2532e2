import numpy as np
import pytest

from edgelens import (
    DataFormatError,
    UndefinedMetricError,
    dataset_checksum,
    edge_mask_auc,
    gen_ba2motifs_mini,
    gen_varsize_motifs,
    load_dataset,
    save_dataset,
)
from edgelens.data import DatasetRecord, record_to_json
from edgelens.graphs import Graph, connected_components, induce_by_edges


def pair_counting_auc(scores, mask):
    """Oracle: probability a random positive outranks a random negative,
    ties worth half, by direct O(p*n) pair sweep."""
    pos = [s for s, m in zip(scores, mask) if m == 1]
    neg = [s for s, m in zip(scores, mask) if m == 0]
    total = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                total += 1.0
            elif p == n:
                total += 0.5
    return total / (len(pos) * len(neg))


class TestBa2MotifsMini:
    def test_counts_and_balance(self):
        records = gen_ba2motifs_mini(40, base_nodes=10, seed=0)
        assert len(records) == 40
        assert sum(r.label for r in records) == 20
        assert [r.label for r in records[:4]] == [0, 1, 0, 1]

    def test_flagged_edges_match_motif_shape(self):
        for rec in gen_ba2motifs_mini(20, base_nodes=8, seed=1):
            flagged = [
                e for e, bit in enumerate(rec.gt_edge_mask) if bit == 1
            ]
            # house carries the extra chord, pentagon is the bare cycle
            assert len(flagged) == (6 if rec.label == 0 else 5)
            sub = induce_by_edges(rec.graph, flagged)
            assert len(sub.components) == 1
            assert len(sub.nodes) == 5
            degrees = sorted(
                sum(1 for a, b in (rec.graph.undirected_endpoints(e) for e in flagged) if v in (a, b))
                for v in sub.nodes
            )
            assert degrees == ([2, 2, 2, 3, 3] if rec.label == 0 else [2, 2, 2, 2, 2])

    def test_attachment_edge_not_flagged(self):
        for rec in gen_ba2motifs_mini(10, base_nodes=8, seed=2):
            base_n = rec.graph.n - 5
            for e, bit in enumerate(rec.gt_edge_mask):
                u, v = rec.graph.undirected_endpoints(e)
                crosses = (u < base_n) != (v < base_n)
                if crosses:
                    assert bit == 0

    def test_graph_is_connected(self):
        for rec in gen_ba2motifs_mini(10, base_nodes=12, seed=3):
            assert len(connected_components(rec.graph)) == 1

    def test_deterministic(self):
        a = gen_ba2motifs_mini(15, base_nodes=9, seed=4)
        b = gen_ba2motifs_mini(15, base_nodes=9, seed=4)
        assert dataset_checksum(a) == dataset_checksum(b)
        c = gen_ba2motifs_mini(15, base_nodes=9, seed=5)
        assert dataset_checksum(a) != dataset_checksum(c)

    def test_base_nodes_floor(self):
        with pytest.raises(ValueError):
            gen_ba2motifs_mini(2, base_nodes=4)


class TestVarsizeMotifs:
    def test_class0_has_no_flags(self):
        for rec in gen_varsize_motifs(20, seed=6):
            if rec.label == 0:
                assert rec.motif_count == 0
                assert all(b == 0 for b in rec.gt_edge_mask)

    def test_class1_flag_count_tracks_motifs(self):
        saw_multi = False
        for rec in gen_varsize_motifs(40, max_motifs=3, seed=7):
            if rec.label == 1:
                assert 1 <= rec.motif_count <= 3
                assert sum(rec.gt_edge_mask) == 2 * rec.motif_count
                saw_multi = saw_multi or rec.motif_count > 1
        assert saw_multi

    def test_flagged_subgraph_is_disjoint_stars(self):
        for rec in gen_varsize_motifs(30, max_motifs=3, seed=8):
            if rec.label != 1:
                continue
            flagged = [e for e, b in enumerate(rec.gt_edge_mask) if b]
            sub = induce_by_edges(rec.graph, flagged)
            assert len(sub.components) == rec.motif_count
            for comp in sub.components:
                assert len(comp.nodes) == 3 and len(comp.edges) == 2

    def test_mask_length_matches_edges(self):
        for rec in gen_varsize_motifs(30, seed=9):
            assert len(rec.gt_edge_mask) == rec.graph.num_undirected_edges


class TestEdgeMaskAuc:
    def test_perfect_and_inverted(self):
        assert edge_mask_auc([0.9, 0.8, 0.1, 0.2], [1, 1, 0, 0]) == 1.0
        assert edge_mask_auc([0.1, 0.2, 0.9, 0.8], [1, 1, 0, 0]) == 0.0

    def test_all_tied_is_half(self):
        assert edge_mask_auc([0.5] * 6, [1, 0, 1, 0, 0, 0]) == 0.5

    def test_matches_pair_counting_oracle(self):
        rng = np.random.default_rng(60)
        for _ in range(50):
            n = int(rng.integers(4, 30))
            mask = np.zeros(n, dtype=int)
            mask[rng.choice(n, size=int(rng.integers(1, n)), replace=False)] = 1
            if mask.sum() in (0, n):
                continue
            # quantize so ties actually happen
            scores = np.round(rng.uniform(0, 1, size=n), 1)
            assert edge_mask_auc(scores, mask) == pytest.approx(
                pair_counting_auc(scores, mask), abs=1e-12
            )

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(61)
        scores = rng.normal(size=10)
        mask = [1, 0, 1, 0, 0, 1, 0, 0, 0, 1]
        a = edge_mask_auc(scores, mask)
        assert edge_mask_auc(3 * scores + 7, mask) == pytest.approx(a, abs=1e-12)
        assert edge_mask_auc(np.exp(scores), mask) == pytest.approx(a, abs=1e-12)

    def test_degenerate_masks_rejected(self):
        with pytest.raises(UndefinedMetricError):
            edge_mask_auc([0.1, 0.2], [1, 1])
        with pytest.raises(UndefinedMetricError):
            edge_mask_auc([0.1, 0.2], [0, 0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            edge_mask_auc([0.1], [1, 0])


class TestDatasetIO:
    def test_round_trip(self, tmp_path):
        records = gen_ba2motifs_mini(6, base_nodes=8, seed=10)
        path = tmp_path / "d.jsonl"
        save_dataset(records, path)
        back = load_dataset(path)
        assert dataset_checksum(back) == dataset_checksum(records)
        assert [r.label for r in back] == [r.label for r in records]
        for a, b in zip(back, records):
            np.testing.assert_array_equal(a.graph.features, b.graph.features)
            assert a.graph.directed_edges == b.graph.directed_edges

    def test_save_then_save_is_byte_identical(self, tmp_path):
        records = gen_varsize_motifs(6, seed=11)
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        save_dataset(records, p1)
        save_dataset(load_dataset(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_parse_error_reports_line(self, tmp_path):
        records = gen_ba2motifs_mini(2, base_nodes=8, seed=12)
        path = tmp_path / "bad.jsonl"
        lines = [record_to_json(r) for r in records]
        lines.insert(1, "{not json")
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(DataFormatError, match="line 2"):
            load_dataset(path)

    def test_blank_lines_skipped(self, tmp_path):
        records = gen_ba2motifs_mini(2, base_nodes=8, seed=13)
        path = tmp_path / "gaps.jsonl"
        path.write_text(
            record_to_json(records[0]) + "\n\n" + record_to_json(records[1]) + "\n"
        )
        assert len(load_dataset(path)) == 2

    def test_mask_length_validated(self):
        g = Graph.undirected(np.ones((2, 1)), [(0, 1)])
        with pytest.raises(DataFormatError):
            DatasetRecord(graph=g, label=0, gt_edge_mask=(0, 1), motif_count=0)
