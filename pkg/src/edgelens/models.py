"""Deterministic forward inference for GCN and GIN graph classifiers.

Everything runs in float64 over a dense weighted adjacency, so setting an
edge weight to 0 is bitwise-identical to deleting the edge (degree
normalization is recomputed from the current weights). That identity is what
makes weight-0 base points sound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import ModelFormatError, NumericalFailureError
from .graphs import Graph, InducedSubgraph

MODEL_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class GCNLayer:
    weight: np.ndarray  # (d_in, d_out)
    bias: np.ndarray  # (d_out,)


@dataclass(frozen=True)
class GINLayer:
    # 2-layer MLP applied to (1 + eps) * h_v + sum_u w_uv h_u
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    epsilon: float = 0.0


@dataclass(frozen=True)
class Classifier:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray


@dataclass(frozen=True)
class ModelSpec:
    conv_kind: str  # "gcn" | "gin"
    layers: tuple
    classifier: Classifier
    pooling: str  # "mean" | "sum"
    num_classes: int

    def __post_init__(self):
        if self.conv_kind not in ("gcn", "gin"):
            raise ModelFormatError(f"unknown conv kind {self.conv_kind!r}")
        if self.pooling not in ("mean", "sum"):
            raise ModelFormatError(f"unknown pooling {self.pooling!r}")
        dim = self.input_dim
        for i, layer in enumerate(self.layers):
            if self.conv_kind == "gcn":
                if not isinstance(layer, GCNLayer):
                    raise ModelFormatError(f"layer {i} is not a GCN layer")
                shapes = [(layer.weight, layer.bias)]
            else:
                if not isinstance(layer, GINLayer):
                    raise ModelFormatError(f"layer {i} is not a GIN layer")
                shapes = [(layer.w1, layer.b1), (layer.w2, layer.b2)]
            for w, b in shapes:
                if w.shape[0] != dim or b.shape != (w.shape[1],):
                    raise ModelFormatError(
                        f"layer {i}: expected input dim {dim}, got {w.shape}/{b.shape}"
                    )
                dim = w.shape[1]
        cls = self.classifier
        if cls.w1.shape[0] != dim or cls.b1.shape != (cls.w1.shape[1],):
            raise ModelFormatError("classifier first layer dimension mismatch")
        if cls.w2.shape != (cls.w1.shape[1], self.num_classes) or cls.b2.shape != (
            self.num_classes,
        ):
            raise ModelFormatError("classifier output dimension mismatch")
        for arr in self.parameter_arrays().values():
            if not np.all(np.isfinite(arr)):
                raise ModelFormatError("model contains non-finite parameters")

    @property
    def input_dim(self) -> int:
        layer = self.layers[0]
        return layer.weight.shape[0] if self.conv_kind == "gcn" else layer.w1.shape[0]

    def parameter_arrays(self) -> dict[str, np.ndarray]:
        """Named view of every parameter array, in a fixed order."""
        out: dict[str, np.ndarray] = {}
        for i, layer in enumerate(self.layers):
            if self.conv_kind == "gcn":
                out[f"layer{i}.weight"] = layer.weight
                out[f"layer{i}.bias"] = layer.bias
            else:
                out[f"layer{i}.w1"] = layer.w1
                out[f"layer{i}.b1"] = layer.b1
                out[f"layer{i}.w2"] = layer.w2
                out[f"layer{i}.b2"] = layer.b2
        out["classifier.w1"] = self.classifier.w1
        out["classifier.b1"] = self.classifier.b1
        out["classifier.w2"] = self.classifier.w2
        out["classifier.b2"] = self.classifier.b2
        return out


@dataclass(frozen=True)
class Prediction:
    logits: np.ndarray
    probabilities: np.ndarray
    predicted_class: int


class ForwardCounter:
    """Counts forward passes within one explanation session."""

    def __init__(self):
        self.count = 0

    def tick(self):
        self.count += 1

    def reset(self):
        self.count = 0


def weighted_adjacency(
    g: Graph, overrides: Mapping[int, float] | None = None
) -> np.ndarray:
    """Dense adjacency from the current edge weights. `overrides` maps an
    undirected edge index to a replacement weight applied to both directions."""
    a = np.zeros((g.n, g.n), dtype=np.float64)
    for src, dst, w in g.directed_edges:
        a[src, dst] = w
    if overrides:
        for idx, w in overrides.items():
            if not 0 <= idx < g.num_undirected_edges:
                raise KeyError(f"unknown undirected edge index {idx}")
            for di in g.undirected_pairs[idx]:
                src, dst, _ = g.directed_edges[di]
                a[src, dst] = float(w)
    return a


def _relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits)
    e = np.exp(shifted)
    return e / e.sum()


def forward_dense(
    m: ModelSpec,
    adjacency: np.ndarray,
    features: np.ndarray,
    counter: ForwardCounter | None = None,
) -> Prediction:
    """One full model evaluation phi(A, X) over a dense adjacency."""
    if features.shape[1] != m.input_dim:
        raise NumericalFailureError(
            f"feature dim {features.shape[1]} != model input dim {m.input_dim}"
        )
    if counter is not None:
        counter.tick()
    h = features
    if m.conv_kind == "gcn":
        a_hat = adjacency + np.eye(adjacency.shape[0])
        deg = a_hat.sum(axis=1)
        d_inv_sqrt = 1.0 / np.sqrt(deg)
        norm = d_inv_sqrt[:, None] * a_hat * d_inv_sqrt[None, :]
        for layer in m.layers:
            h = _relu(norm @ h @ layer.weight + layer.bias)
    else:
        for layer in m.layers:
            agg = (1.0 + layer.epsilon) * h + adjacency @ h
            h = _relu(agg @ layer.w1 + layer.b1) @ layer.w2 + layer.b2
    pooled = h.mean(axis=0) if m.pooling == "mean" else h.sum(axis=0)
    cls = m.classifier
    hidden = _relu(pooled @ cls.w1 + cls.b1)
    logits = hidden @ cls.w2 + cls.b2
    if not np.all(np.isfinite(logits)):
        raise NumericalFailureError("non-finite logits")
    probs = softmax(logits)
    return Prediction(
        logits=logits,
        probabilities=probs,
        predicted_class=int(np.argmax(probs)),
    )


def forward(m: ModelSpec, g: Graph, counter: ForwardCounter | None = None) -> Prediction:
    return forward_dense(m, weighted_adjacency(g), g.features, counter)


def forward_with_override(
    m: ModelSpec,
    g: Graph,
    overrides: Mapping[int, float],
    counter: ForwardCounter | None = None,
) -> Prediction:
    """Forward with some undirected edges re-weighted; g itself is untouched."""
    return forward_dense(m, weighted_adjacency(g, overrides), g.features, counter)


def forward_on_induced(
    m: ModelSpec,
    s: InducedSubgraph,
    counter: ForwardCounter | None = None,
    empty_policy: str = "isolated-nodes",
) -> Prediction:
    """Forward on the standalone graph built from an induced subgraph.

    Empty subgraphs follow `empty_policy`: "isolated-nodes" evaluates all
    parent nodes under a zero adjacency, "reject" raises.
    """
    g = s.parent
    if s.num_nodes == 0:
        if empty_policy == "reject":
            raise NumericalFailureError("forward on an empty subgraph rejected")
        if empty_policy != "isolated-nodes":
            raise ValueError(f"unknown empty policy {empty_policy!r}")
        adjacency = np.zeros((g.n, g.n), dtype=np.float64)
        return forward_dense(m, adjacency, g.features, counter)
    index = {v: i for i, v in enumerate(s.nodes)}
    adjacency = np.zeros((len(s.nodes), len(s.nodes)), dtype=np.float64)
    for e in s.edges:
        u, v = g.undirected_endpoints(e)
        w = g.undirected_weight(e)
        adjacency[index[u], index[v]] = w
        adjacency[index[v], index[u]] = w
    feats = g.features[list(s.nodes), :]
    return forward_dense(m, adjacency, feats, counter)


def _arr_to_list(a: np.ndarray) -> list:
    return a.tolist()


def _layer_to_obj(m: ModelSpec, layer) -> dict:
    if m.conv_kind == "gcn":
        return {"weight": _arr_to_list(layer.weight), "bias": _arr_to_list(layer.bias)}
    return {
        "w1": _arr_to_list(layer.w1),
        "b1": _arr_to_list(layer.b1),
        "w2": _arr_to_list(layer.w2),
        "b2": _arr_to_list(layer.b2),
    }


def model_to_json(m: ModelSpec) -> str:
    obj = {
        "version": MODEL_SCHEMA_VERSION,
        "conv_kind": m.conv_kind,
        "pooling": m.pooling,
        "num_classes": m.num_classes,
        "layers": [_layer_to_obj(m, layer) for layer in m.layers],
        "classifier": {
            "w1": _arr_to_list(m.classifier.w1),
            "b1": _arr_to_list(m.classifier.b1),
            "w2": _arr_to_list(m.classifier.w2),
            "b2": _arr_to_list(m.classifier.b2),
        },
    }
    if m.conv_kind == "gin":
        obj["epsilons"] = [layer.epsilon for layer in m.layers]
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def save_model(m: ModelSpec, path) -> None:
    with open(path, "w") as fh:
        fh.write(model_to_json(m))


def model_from_json(text: str) -> ModelSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"invalid model JSON: {exc}") from exc
    if obj.get("version") != MODEL_SCHEMA_VERSION:
        raise ModelFormatError(f"unsupported model version {obj.get('version')!r}")
    for key in ("conv_kind", "pooling", "num_classes", "layers", "classifier"):
        if key not in obj:
            raise ModelFormatError(f"model file missing field {key!r}")
    kind = obj["conv_kind"]
    arr = lambda x: np.asarray(x, dtype=np.float64)
    layers: list = []
    if kind == "gcn":
        for lo in obj["layers"]:
            layers.append(GCNLayer(weight=arr(lo["weight"]), bias=arr(lo["bias"])))
    elif kind == "gin":
        eps = obj.get("epsilons", [0.0] * len(obj["layers"]))
        if len(eps) != len(obj["layers"]):
            raise ModelFormatError("epsilons length does not match layer count")
        for lo, e in zip(obj["layers"], eps):
            layers.append(
                GINLayer(
                    w1=arr(lo["w1"]),
                    b1=arr(lo["b1"]),
                    w2=arr(lo["w2"]),
                    b2=arr(lo["b2"]),
                    epsilon=float(e),
                )
            )
    else:
        raise ModelFormatError(f"unknown conv kind {kind!r}")
    cls = obj["classifier"]
    return ModelSpec(
        conv_kind=kind,
        layers=tuple(layers),
        classifier=Classifier(
            w1=arr(cls["w1"]), b1=arr(cls["b1"]), w2=arr(cls["w2"]), b2=arr(cls["b2"])
        ),
        pooling=obj["pooling"],
        num_classes=int(obj["num_classes"]),
    )


def load_model(path) -> ModelSpec:
    with open(path) as fh:
        return model_from_json(fh.read())
