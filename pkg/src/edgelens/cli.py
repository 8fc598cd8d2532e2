"""Command-line entry point.

Exit codes: 0 ok, 2 usage error (click's default), 3 data error,
4 numerical failure.
"""

from __future__ import annotations

import sys

import click

from . import data as data_mod
from . import evaluate as eval_mod
from .errors import DataFormatError, EdgeLensError, ModelFormatError, NumericalFailureError
from .explain import explain as run_explain
from .explain import save_explanation
from .graphs import load_graph
from .models import load_model, save_model
from .training import TrainConfig, train_gcn

EXIT_DATA_ERROR = 3
EXIT_NUMERICAL = 4


def _guard(fn):
    try:
        return fn()
    except (DataFormatError, ModelFormatError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_DATA_ERROR)
    except NumericalFailureError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    except EdgeLensError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_DATA_ERROR)


@click.group()
def main():
    """Edge-level GNN explanation toolkit."""


@main.command("explain")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--class", "target_class", default="auto", show_default=True)
@click.option(
    "--method",
    default="linear-gradient",
    show_default=True,
    type=click.Choice(["linear-gradient", "sa", "ig"]),
)
@click.option(
    "--k-range", default="full", show_default=True, type=click.Choice(["full", "paper"])
)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--dot", "dot_path", default=None, type=click.Path())
def explain_cmd(model_path, graph_path, target_class, method, k_range, out_path, dot_path):
    """Explain one graph and write the explanation file (optionally DOT)."""

    def run():
        m = load_model(model_path)
        g = load_graph(graph_path)
        target = "auto" if target_class == "auto" else int(target_class)
        e = run_explain(m, g, target_class=target, method=method, k_range=k_range)
        save_explanation(e, g, out_path)
        if dot_path:
            eval_mod.export_dot(g, e, dot_path)
        click.echo(
            f"class={e.target_class} chosen_k={e.chosen_k} "
            f"overall={e.overall:.6f} sparsity={e.sparsity:.6f} "
            f"forwards={e.forward_passes_used}"
        )

    _guard(run)


@main.command("evaluate")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--methods", default="linear-gradient,sa,ig", show_default=True)
@click.option("--levels", default="0.5,0.6,0.7,0.8,0.9", show_default=True)
@click.option("--k-range", default="full", show_default=True, type=click.Choice(["full", "paper"]))
@click.option("--out", "out_path", required=True, type=click.Path())
def evaluate_cmd(model_path, dataset_path, methods, levels, k_range, out_path):
    """Fidelity curves plus the method-comparison table."""

    def run():
        m = load_model(model_path)
        dataset = data_mod.load_dataset(dataset_path)
        method_list = [s.strip() for s in methods.split(",") if s.strip()]
        level_list = [float(s) for s in levels.split(",") if s.strip()]
        curves = {
            method: eval_mod.curve_to_obj(
                eval_mod.fidelity_curve(m, dataset, method, level_list)
            )
            for method in method_list
        }
        comparison = eval_mod.summaries_to_obj(
            eval_mod.compare_methods(m, dataset, method_list, k_range)
        )
        eval_mod.write_report({"curves": curves, "comparison": comparison}, out_path)
        click.echo(eval_mod.format_table(comparison), nl=False)

    _guard(run)


@main.command("oracle")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--cap", default=14, show_default=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
def oracle_cmd(model_path, dataset_path, cap, out_path):
    """Exhaustive-search gap report over a dataset."""

    def run():
        m = load_model(model_path)
        dataset = data_mod.load_dataset(dataset_path)
        report = eval_mod.oracle_report(m, dataset, cap=cap)
        eval_mod.write_report(eval_mod.oracle_report_to_obj(report), out_path)
        click.echo(
            f"evaluated={report.n_evaluated} skipped={report.n_skipped} "
            f"mean_gap={report.mean_gap:.6f} max_gap={report.max_gap:.6f} "
            f"mean_ratio={report.mean_ratio:.6f}"
        )

    _guard(run)


@main.command("gen-dataset")
@click.option(
    "--kind",
    required=True,
    type=click.Choice(["ba2motifs-mini", "varsize"]),
)
@click.option("--n", "n_graphs", required=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--base-nodes", default=None, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
def gen_dataset_cmd(kind, n_graphs, seed, base_nodes, out_path):
    """Generate a synthetic corpus with ground-truth edge masks."""

    def run():
        if kind == "ba2motifs-mini":
            records = data_mod.gen_ba2motifs_mini(
                n_graphs, base_nodes=base_nodes or 20, seed=seed
            )
        else:
            records = data_mod.gen_varsize_motifs(
                n_graphs, base_nodes=base_nodes or 12, seed=seed
            )
        data_mod.save_dataset(records, out_path)
        click.echo(f"checksum={data_mod.dataset_checksum(records)}")

    _guard(run)


@main.command("train")
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--layers", default=3, show_default=True, type=int)
@click.option("--hidden", default=32, show_default=True, type=int)
@click.option("--classes", default=2, show_default=True, type=int)
@click.option("--epochs", default=500, show_default=True, type=int)
@click.option("--lr", default=0.05, show_default=True, type=float)
@click.option("--momentum", default=0.9, show_default=True, type=float)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--trace", "trace_path", default=None, type=click.Path())
def train_cmd(dataset_path, layers, hidden, classes, epochs, lr, momentum, seed, out_path, trace_path):
    """Train a GCN graph classifier and save the model file."""

    def run():
        dataset = data_mod.load_dataset(dataset_path)
        cfg = TrainConfig(
            epochs=epochs, learning_rate=lr, momentum=momentum, seed=seed
        )
        result = train_gcn(
            dataset,
            {"num_layers": layers, "hidden_dim": hidden, "num_classes": classes},
            cfg,
        )
        save_model(result.model, out_path)
        if trace_path:
            result.write_trace(trace_path)
        click.echo(
            f"epochs={len(result.trace)} loss={result.final_loss:.6f} "
            f"accuracy={result.final_accuracy:.4f}"
        )

    _guard(run)


@main.command("bench")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--sizes", default="5,10,20,50,100", show_default=True)
@click.option("--reps", default=3, show_default=True, type=int)
@click.option("--out", "out_path", default=None, type=click.Path())
def bench_cmd(model_path, sizes, reps, out_path):
    """Forward-pass accounting and wall-clock timing on path graphs."""

    def run():
        m = load_model(model_path)
        size_list = [int(s) for s in sizes.split(",") if s.strip()]
        report = eval_mod.timing_report(m, size_list, reps=reps)
        obj = eval_mod.timing_report_to_obj(report)
        if out_path:
            eval_mod.write_report(obj, out_path)
        click.echo(eval_mod.format_table(obj["rows"]), nl=False)
        click.echo(
            f"fit: passes = {report.slope:.4f} * |E| + {report.intercept:.4f} "
            f"(max residual {report.max_residual:.2e})"
        )

    _guard(run)


if __name__ == "__main__":
    main()
