"""Full-batch GCN training with hand-derived analytic gradients.

Keeps the acceptance experiments self-contained: plain gradient descent with
momentum over mean cross-entropy, reverse accumulation through pooling and
the normalized-adjacency message passing. Deterministic given the seed
(PRNG: numpy default_rng, i.e. PCG64, seeded directly with `seed`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import NumericalFailureError
from .graphs import Graph
from .models import Classifier, GCNLayer, ModelSpec, forward, softmax


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 500
    learning_rate: float = 0.05
    momentum: float = 0.9
    seed: int = 0
    init_scale: float = 0.3
    target_train_accuracy: float = 1.0

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must be in [0, 1)")


@dataclass(frozen=True)
class TraceEntry:
    epoch: int
    loss: float
    accuracy: float


@dataclass(frozen=True)
class TrainResult:
    model: ModelSpec
    trace: tuple[TraceEntry, ...]

    @property
    def final_accuracy(self) -> float:
        return self.trace[-1].accuracy

    @property
    def final_loss(self) -> float:
        return self.trace[-1].loss

    def write_trace(self, path) -> None:
        with open(path, "w") as fh:
            for t in self.trace:
                fh.write(f"{t.epoch}\t{float(t.loss)!r}\t{float(t.accuracy)!r}\n")


def init_gcn(
    input_dim: int,
    num_layers: int,
    hidden_dim: int,
    num_classes: int,
    pooling: str = "mean",
    seed: int = 0,
    init_scale: float = 0.3,
) -> ModelSpec:
    """Uniform(-init_scale, init_scale) on every parameter, biases included.

    Nonzero biases matter: with constant node features and zero biases each
    relu layer maps a nonnegative scalar multiple of a vector to another
    one, so the whole network collapses to a single scalar per graph.
    """
    rng = np.random.default_rng(seed)
    dims = [input_dim] + [hidden_dim] * num_layers
    layers = tuple(
        GCNLayer(
            weight=rng.uniform(-init_scale, init_scale, size=(dims[i], dims[i + 1])),
            bias=rng.uniform(-init_scale, init_scale, size=dims[i + 1]),
        )
        for i in range(num_layers)
    )
    classifier = Classifier(
        w1=rng.uniform(-init_scale, init_scale, size=(hidden_dim, hidden_dim)),
        b1=rng.uniform(-init_scale, init_scale, size=hidden_dim),
        w2=rng.uniform(-init_scale, init_scale, size=(hidden_dim, num_classes)),
        b2=rng.uniform(-init_scale, init_scale, size=num_classes),
    )
    return ModelSpec(
        conv_kind="gcn",
        layers=layers,
        classifier=classifier,
        pooling=pooling,
        num_classes=num_classes,
    )


def _normalized_adjacency(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=np.float64)
    for src, dst, w in g.directed_edges:
        a[src, dst] = w
    a_hat = a + np.eye(g.n)
    d_inv_sqrt = 1.0 / np.sqrt(a_hat.sum(axis=1))
    return d_inv_sqrt[:, None] * a_hat * d_inv_sqrt[None, :]


def _graph_loss_and_grads(
    m: ModelSpec, norm: np.ndarray, x: np.ndarray, label: int
) -> tuple[float, int, dict[str, np.ndarray]]:
    """Cross-entropy loss, predicted class and parameter gradients for one
    graph. ReLU subgradient at 0 is taken as 0 throughout."""
    n = x.shape[0]
    hs = [x]
    zs = []
    msgs = []  # norm @ h_{k-1}, cached for weight gradients
    h = x
    for layer in m.layers:
        msg = norm @ h
        z = msg @ layer.weight + layer.bias
        h = np.maximum(z, 0.0)
        msgs.append(msg)
        zs.append(z)
        hs.append(h)
    pooled = h.mean(axis=0) if m.pooling == "mean" else h.sum(axis=0)
    cls = m.classifier
    u1 = pooled @ cls.w1 + cls.b1
    a1 = np.maximum(u1, 0.0)
    logits = a1 @ cls.w2 + cls.b2
    probs = softmax(logits)
    loss = -np.log(max(probs[label], 1e-300))
    predicted = int(np.argmax(probs))

    dlogits = probs.copy()
    dlogits[label] -= 1.0
    grads = {
        "classifier.w2": np.outer(a1, dlogits),
        "classifier.b2": dlogits,
    }
    da1 = cls.w2 @ dlogits
    du1 = da1 * (u1 > 0)
    grads["classifier.w1"] = np.outer(pooled, du1)
    grads["classifier.b1"] = du1
    dpooled = cls.w1 @ du1
    if m.pooling == "mean":
        dh = np.tile(dpooled / n, (n, 1))
    else:
        dh = np.tile(dpooled, (n, 1))
    for k in range(len(m.layers) - 1, -1, -1):
        dz = dh * (zs[k] > 0)
        grads[f"layer{k}.weight"] = msgs[k].T @ dz
        grads[f"layer{k}.bias"] = dz.sum(axis=0)
        dh = norm.T @ dz @ m.layers[k].weight.T
    return loss, predicted, grads


def analytic_gradients(
    m: ModelSpec, dataset
) -> tuple[float, float, dict[str, np.ndarray]]:
    """Mean loss, train accuracy and mean-cross-entropy gradients over a
    dataset of records carrying `.graph` and `.label`."""
    if m.conv_kind != "gcn":
        raise ValueError("analytic gradients are implemented for GCN only")
    if not dataset:
        raise ValueError("dataset is empty")
    total: dict[str, np.ndarray] = {
        name: np.zeros_like(arr) for name, arr in m.parameter_arrays().items()
    }
    loss_sum = 0.0
    correct = 0
    for rec in dataset:
        g = rec.graph
        loss, predicted, grads = _graph_loss_and_grads(
            m, _normalized_adjacency(g), g.features, rec.label
        )
        loss_sum += loss
        correct += predicted == rec.label
        for name, grad in grads.items():
            total[name] += grad
    k = len(dataset)
    for name in total:
        total[name] /= k
    return loss_sum / k, correct / k, total


def _model_with_params(m: ModelSpec, params: dict[str, np.ndarray]) -> ModelSpec:
    layers = tuple(
        GCNLayer(weight=params[f"layer{i}.weight"], bias=params[f"layer{i}.bias"])
        for i in range(len(m.layers))
    )
    classifier = Classifier(
        w1=params["classifier.w1"],
        b1=params["classifier.b1"],
        w2=params["classifier.w2"],
        b2=params["classifier.b2"],
    )
    return ModelSpec(
        conv_kind="gcn",
        layers=layers,
        classifier=classifier,
        pooling=m.pooling,
        num_classes=m.num_classes,
    )


@dataclass(frozen=True)
class GradientCheckReport:
    max_relative_error: float
    tolerance: float
    passed: bool
    worst_parameter: str


def finite_difference_check(
    m: ModelSpec, dataset, h: float = 1e-5, tol: float = 1e-4
) -> GradientCheckReport:
    """Compare every analytic gradient entry against a central difference."""
    if not dataset:
        raise ValueError("dataset is empty")
    _, _, analytic = analytic_gradients(m, dataset)

    def mean_loss(params: dict[str, np.ndarray]) -> float:
        model = _model_with_params(m, params)
        total = 0.0
        for rec in dataset:
            probs = forward(model, rec.graph).probabilities
            total += -np.log(max(probs[rec.label], 1e-300))
        return total / len(dataset)

    base = {name: arr.copy() for name, arr in m.parameter_arrays().items()}
    worst = 0.0
    worst_name = ""
    for name, arr in base.items():
        flat = arr.reshape(-1)
        for j in range(flat.size):
            orig = flat[j]
            flat[j] = orig + h
            hi = mean_loss(base)
            flat[j] = orig - h
            lo = mean_loss(base)
            flat[j] = orig
            fd = (hi - lo) / (2 * h)
            an = analytic[name].reshape(-1)[j]
            rel = abs(an - fd) / max(abs(fd), 1e-6)
            if rel > worst:
                worst = rel
                worst_name = f"{name}[{j}]"
    return GradientCheckReport(
        max_relative_error=worst,
        tolerance=tol,
        passed=worst <= tol,
        worst_parameter=worst_name,
    )


class _Batch:
    """All graphs stacked into one block-diagonal system so an epoch is a
    handful of sparse matmuls instead of a Python loop over the dataset."""

    def __init__(self, dataset, pooling: str):
        self.norm = sp.block_diag(
            [_normalized_adjacency(rec.graph) for rec in dataset], format="csr"
        )
        self.x = np.vstack([rec.graph.features for rec in dataset])
        self.labels = np.array([rec.label for rec in dataset])
        sizes = [rec.graph.n for rec in dataset]
        g_count = len(dataset)
        rows = np.repeat(np.arange(g_count), sizes)
        if pooling == "mean":
            vals = np.concatenate([np.full(n, 1.0 / n) for n in sizes])
        else:
            vals = np.ones(self.x.shape[0])
        self.pool = sp.csr_matrix(
            (vals, (rows, np.arange(self.x.shape[0]))),
            shape=(g_count, self.x.shape[0]),
        )


def _batched_loss_and_grads(
    m: ModelSpec, batch: _Batch
) -> tuple[float, float, dict[str, np.ndarray]]:
    """Mean loss, accuracy and mean-cross-entropy gradients over the batch;
    same math as summing _graph_loss_and_grads over every graph."""
    h = batch.x
    msgs = []
    zs = []
    for layer in m.layers:
        msg = batch.norm @ h
        z = msg @ layer.weight + layer.bias
        h = np.maximum(z, 0.0)
        msgs.append(msg)
        zs.append(z)
    pooled = batch.pool @ h
    cls = m.classifier
    u1 = pooled @ cls.w1 + cls.b1
    a1 = np.maximum(u1, 0.0)
    logits = a1 @ cls.w2 + cls.b2
    shifted = np.exp(logits - logits.max(axis=1, keepdims=True))
    probs = shifted / shifted.sum(axis=1, keepdims=True)
    g_count = len(batch.labels)
    idx = np.arange(g_count)
    picked = np.maximum(probs[idx, batch.labels], 1e-300)
    loss = float(-np.log(picked).mean())
    accuracy = float((probs.argmax(axis=1) == batch.labels).mean())

    dlogits = probs.copy()
    dlogits[idx, batch.labels] -= 1.0
    dlogits /= g_count
    grads = {
        "classifier.w2": a1.T @ dlogits,
        "classifier.b2": dlogits.sum(axis=0),
    }
    du1 = (dlogits @ cls.w2.T) * (u1 > 0)
    grads["classifier.w1"] = pooled.T @ du1
    grads["classifier.b1"] = du1.sum(axis=0)
    dh = batch.pool.T @ (du1 @ cls.w1.T)
    for k in range(len(m.layers) - 1, -1, -1):
        dz = dh * (zs[k] > 0)
        grads[f"layer{k}.weight"] = msgs[k].T @ dz
        grads[f"layer{k}.bias"] = dz.sum(axis=0)
        if k > 0:
            dh = batch.norm.T @ (dz @ m.layers[k].weight.T)
    return loss, accuracy, grads


def train_gcn(dataset, arch: dict, cfg: TrainConfig) -> TrainResult:
    """Full-batch momentum gradient descent on mean cross-entropy.

    arch: {"num_layers", "hidden_dim", "num_classes", "pooling"(optional)}.
    Stops early once train accuracy reaches cfg.target_train_accuracy.
    """
    if not dataset:
        raise ValueError("dataset is empty")
    input_dim = dataset[0].graph.d
    for rec in dataset:
        if rec.graph.d != input_dim:
            raise ValueError("all graphs must share one feature dimension")
        if not 0 <= rec.label < arch["num_classes"]:
            raise ValueError(f"label {rec.label} out of range")
    pooling = arch.get("pooling", "mean")
    model = init_gcn(
        input_dim=input_dim,
        num_layers=arch["num_layers"],
        hidden_dim=arch["hidden_dim"],
        num_classes=arch["num_classes"],
        pooling=pooling,
        seed=cfg.seed,
        init_scale=cfg.init_scale,
    )
    params = {name: arr.copy() for name, arr in model.parameter_arrays().items()}
    velocity = {name: np.zeros_like(arr) for name, arr in params.items()}
    trace: list[TraceEntry] = []
    batch = _Batch(dataset, pooling)
    for epoch in range(cfg.epochs):
        current = _model_with_params(model, params)
        loss, accuracy, grads = _batched_loss_and_grads(current, batch)
        if not np.isfinite(loss):
            raise NumericalFailureError(
                "training diverged (non-finite loss); try a smaller learning rate"
            )
        trace.append(TraceEntry(epoch=epoch, loss=loss, accuracy=accuracy))
        if accuracy >= cfg.target_train_accuracy:
            break
        for name in params:
            velocity[name] = (
                cfg.momentum * velocity[name] - cfg.learning_rate * grads[name]
            )
            params[name] = params[name] + velocity[name]
    return TrainResult(model=_model_with_params(model, params), trace=tuple(trace))
