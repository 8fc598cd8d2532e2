import json

import pytest
from click.testing import CliRunner

from edgelens import gen_ba2motifs_mini, init_gcn, save_dataset, save_graph, save_model
from edgelens.cli import main


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def workspace(tmp_path):
    records = gen_ba2motifs_mini(4, base_nodes=8, seed=80)
    dataset = tmp_path / "data.jsonl"
    save_dataset(records, dataset)
    graph = tmp_path / "graph.json"
    save_graph(records[0].graph, graph)
    model = tmp_path / "model.json"
    save_model(init_gcn(10, 2, 8, 2, seed=81), model)
    return {"dir": tmp_path, "dataset": dataset, "graph": graph, "model": model}


class TestExplainCommand:
    def test_writes_explanation_and_dot(self, runner, workspace):
        out = workspace["dir"] / "exp.json"
        dot = workspace["dir"] / "exp.dot"
        result = runner.invoke(
            main,
            [
                "explain",
                "--model", str(workspace["model"]),
                "--graph", str(workspace["graph"]),
                "--out", str(out),
                "--dot", str(dot),
            ],
        )
        assert result.exit_code == 0, result.output
        obj = json.loads(out.read_text())
        assert obj["chosen_k"] >= 1
        assert "chosen_k=" in result.output
        assert dot.read_text().startswith("graph explanation {")

    def test_byte_reproducible(self, runner, workspace):
        outs = []
        for name in ("a.json", "b.json"):
            out = workspace["dir"] / name
            result = runner.invoke(
                main,
                [
                    "explain",
                    "--model", str(workspace["model"]),
                    "--graph", str(workspace["graph"]),
                    "--out", str(out),
                ],
            )
            assert result.exit_code == 0, result.output
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_explicit_class_and_method(self, runner, workspace):
        out = workspace["dir"] / "sa.json"
        result = runner.invoke(
            main,
            [
                "explain",
                "--model", str(workspace["model"]),
                "--graph", str(workspace["graph"]),
                "--class", "1",
                "--method", "sa",
                "--out", str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        obj = json.loads(out.read_text())
        assert obj["target_class"] == 1
        assert obj["method"] == "sa"

    def test_missing_file_is_usage_error(self, runner, workspace):
        result = runner.invoke(
            main,
            [
                "explain",
                "--model", str(workspace["dir"] / "nope.json"),
                "--graph", str(workspace["graph"]),
                "--out", str(workspace["dir"] / "x.json"),
            ],
        )
        assert result.exit_code == 2

    def test_corrupt_model_is_data_error(self, runner, workspace):
        bad = workspace["dir"] / "bad_model.json"
        bad.write_text("{}")
        result = runner.invoke(
            main,
            [
                "explain",
                "--model", str(bad),
                "--graph", str(workspace["graph"]),
                "--out", str(workspace["dir"] / "x.json"),
            ],
        )
        assert result.exit_code == 3


class TestEvaluateCommand:
    def test_report_and_table(self, runner, workspace):
        out = workspace["dir"] / "report.json"
        result = runner.invoke(
            main,
            [
                "evaluate",
                "--model", str(workspace["model"]),
                "--dataset", str(workspace["dataset"]),
                "--methods", "linear-gradient,sa",
                "--levels", "0.5,0.9",
                "--out", str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        obj = json.loads(out.read_text())
        assert set(obj["curves"]) == {"linear-gradient", "sa"}
        assert len(obj["curves"]["sa"]) == 2
        assert [row["method"] for row in obj["comparison"]] == ["linear-gradient", "sa"]
        assert "mean_overall" in result.output


class TestOracleCommand:
    def test_report(self, runner, workspace):
        out = workspace["dir"] / "oracle.json"
        result = runner.invoke(
            main,
            [
                "oracle",
                "--model", str(workspace["model"]),
                "--dataset", str(workspace["dataset"]),
                "--out", str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        obj = json.loads(out.read_text())
        assert obj["n_evaluated"] + obj["n_skipped"] == 4
        assert "mean_gap=" in result.output


class TestGenDatasetCommand:
    def test_generates_and_prints_checksum(self, runner, tmp_path):
        out = tmp_path / "gen.jsonl"
        result = runner.invoke(
            main,
            ["gen-dataset", "--kind", "ba2motifs-mini", "--n", "6",
             "--seed", "3", "--base-nodes", "8", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        assert result.output.startswith("checksum=")
        assert len(out.read_text().strip().split("\n")) == 6

    def test_same_seed_same_bytes(self, runner, tmp_path):
        blobs = []
        for name in ("g1.jsonl", "g2.jsonl"):
            out = tmp_path / name
            result = runner.invoke(
                main,
                ["gen-dataset", "--kind", "varsize", "--n", "4",
                 "--seed", "9", "--out", str(out)],
            )
            assert result.exit_code == 0, result.output
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]

    def test_unknown_kind_rejected(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["gen-dataset", "--kind", "mystery", "--n", "2",
             "--out", str(tmp_path / "x.jsonl")],
        )
        assert result.exit_code == 2


class TestTrainCommand:
    def test_trains_and_saves(self, runner, workspace):
        out = workspace["dir"] / "trained.json"
        trace = workspace["dir"] / "trace.tsv"
        result = runner.invoke(
            main,
            [
                "train",
                "--dataset", str(workspace["dataset"]),
                "--layers", "2",
                "--hidden", "8",
                "--epochs", "3",
                "--lr", "0.05",
                "--seed", "1",
                "--out", str(out),
                "--trace", str(trace),
            ],
        )
        assert result.exit_code == 0, result.output
        assert json.loads(out.read_text())["version"] == 1
        assert len(trace.read_text().strip().split("\n")) == 3
        assert "accuracy=" in result.output


class TestBenchCommand:
    def test_affine_fit_reported(self, runner, workspace):
        result = runner.invoke(
            main,
            ["bench", "--model", str(workspace["model"]),
             "--sizes", "3,5,8", "--reps", "1"],
        )
        assert result.exit_code == 0, result.output
        assert "fit: passes = 3.0000 * |E| + 1.0000" in result.output
