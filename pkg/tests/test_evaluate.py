import json

import numpy as np
import pytest

from edgelens import (
    compare_methods,
    explain,
    export_dot,
    fidelity_curve,
    oracle_report,
    timing_report,
)
from edgelens.data import DatasetRecord
from edgelens.evaluate import (
    _path_graph,
    curve_to_obj,
    format_table,
    summaries_to_obj,
    write_report,
)
from conftest import random_graph, random_model


@pytest.fixture
def mini_dataset():
    rng = np.random.default_rng(70)
    out = []
    for i in range(5):
        g = random_graph(rng, max_nodes=6, max_extra_edges=3, feature_dim=3)
        out.append(
            DatasetRecord(
                graph=g,
                label=i % 2,
                gt_edge_mask=tuple([1] + [0] * (g.num_undirected_edges - 1)),
                motif_count=0,
            )
        )
    return out


@pytest.fixture
def model():
    return random_model(np.random.default_rng(71), feature_dim=3)


class TestFidelityCurve:
    def test_endpoints_are_exact(self, model, mini_dataset):
        # level 0 keeps everything: fid- must be exactly 0; level 1 keeps
        # nothing: fid+ must be exactly 0
        pts = fidelity_curve(model, mini_dataset, "linear-gradient", [0.0, 1.0])
        assert pts[0].fidelity_minus == 0.0
        assert pts[1].fidelity_plus == 0.0

    def test_point_fields(self, model, mini_dataset):
        pts = fidelity_curve(model, mini_dataset, "linear-gradient", [0.5])
        (p,) = pts
        assert p.sparsity_level == 0.5
        assert p.n_instances == len(mini_dataset)
        assert p.overall == pytest.approx(p.fidelity_plus - p.fidelity_minus)

    def test_rejects_bad_level(self, model, mini_dataset):
        with pytest.raises(ValueError):
            fidelity_curve(model, mini_dataset, "linear-gradient", [1.5])

    def test_rejects_unknown_method(self, model, mini_dataset):
        with pytest.raises(ValueError):
            fidelity_curve(model, mini_dataset, "magic", [0.5])


class TestCompareMethods:
    def test_single_method_matches_explain(self, model, mini_dataset):
        (summary,) = compare_methods(model, mini_dataset, ["linear-gradient"])
        expected = [explain(model, r.graph) for r in mini_dataset]
        assert summary.mean_overall == pytest.approx(
            np.mean([e.overall for e in expected])
        )
        assert summary.mean_sparsity == pytest.approx(
            np.mean([e.sparsity for e in expected])
        )
        assert summary.n_instances == len(mini_dataset)

    def test_all_methods_present(self, model, mini_dataset):
        summaries = compare_methods(model, mini_dataset)
        assert [s.method for s in summaries] == ["linear-gradient", "sa", "ig"]


class TestOracleReport:
    def test_gaps_nonnegative(self, model, mini_dataset):
        r = oracle_report(model, mini_dataset)
        assert r.n_evaluated == len(mini_dataset)
        assert all(gap >= -1e-12 for gap in r.gaps)
        assert r.max_gap >= r.mean_gap >= 0 or r.mean_gap == 0.0

    def test_cap_skips_big_graphs(self, model, mini_dataset):
        r = oracle_report(model, mini_dataset, cap=3)
        assert r.n_evaluated + r.n_skipped == len(mini_dataset)


class TestTimingReport:
    def test_affine_forward_count(self, model):
        r = timing_report(model, [3, 5, 8], reps=1)
        assert r.max_residual < 1e-9
        assert r.slope == pytest.approx(3.0)
        assert r.intercept == pytest.approx(1.0)
        for row in r.rows:
            assert row.forward_passes == 3 * row.num_edges + 1

    def test_path_graph_shape(self):
        g = _path_graph(4, 3)
        assert g.n == 5
        assert g.num_undirected_edges == 4


class TestDotExport:
    def test_chosen_edges_red(self, tmp_path, model):
        g = _path_graph(3, 3)
        e = explain(model, g)
        path = tmp_path / "g.dot"
        export_dot(g, e, path)
        text = path.read_text()
        assert text.startswith("graph explanation {")
        assert text.count('color="red"') == e.chosen_k
        assert text.count('color="gray"') == g.num_undirected_edges - e.chosen_k

    def test_no_explanation_all_gray(self, tmp_path):
        g = _path_graph(3, 3)
        path = tmp_path / "g.dot"
        export_dot(g, None, path)
        text = path.read_text()
        assert 'color="red"' not in text
        assert text.count('color="gray"') == 3


class TestFormatting:
    def test_table_layout(self):
        rows = [{"a": 1, "b": 0.5}, {"a": 22, "b": 0.25}]
        text = format_table(rows)
        lines = text.strip().split("\n")
        assert lines[0].split() == ["a", "b"]
        assert lines[2].split() == ["1", "0.500000"]
        assert lines[3].split() == ["22", "0.250000"]

    def test_empty_table(self):
        assert format_table([]) == "(empty)\n"

    def test_write_report_round_trip(self, tmp_path, model, mini_dataset):
        pts = curve_to_obj(fidelity_curve(model, mini_dataset, "sa", [0.5]))
        comp = summaries_to_obj(compare_methods(model, mini_dataset, ["sa"]))
        path = tmp_path / "r.json"
        write_report({"curves": pts, "comparison": comp}, path)
        back = json.loads(path.read_text())
        assert back["curves"] == pts
        assert back["comparison"] == comp
