"""Train a graph classifier from scratch and recover the planted motifs.

Generates a 200-graph corpus where every graph is a small random
preferential-attachment base with one planted motif — a house (5-cycle
plus a roof chord, class 0) or a pentagon (bare 5-cycle, class 1) — trains
a 3-layer GCN with plain full-batch gradient descent, then checks how well
the per-edge slope scores rank the planted motif edges on graphs the model
classifies correctly.

Takes a couple of minutes on one CPU.
"""

import numpy as np

from edgelens import (
    TrainConfig,
    edge_mask_auc,
    gen_ba2motifs_mini,
    linear_gradient_scores,
    train_gcn,
)
from edgelens.models import forward

dataset = gen_ba2motifs_mini(200, base_nodes=5, seed=7)
print(f"corpus: {len(dataset)} graphs, "
      f"{sum(r.label for r in dataset)} pentagons / "
      f"{sum(1 - r.label for r in dataset)} houses")

cfg = TrainConfig(
    epochs=30000,
    learning_rate=0.4,
    momentum=0.9,
    seed=7,
    init_scale=0.3,
    target_train_accuracy=0.95,
)
result = train_gcn(dataset, {"num_layers": 3, "hidden_dim": 32, "num_classes": 2}, cfg)
print(f"trained: {len(result.trace)} epochs, "
      f"train accuracy {result.final_accuracy:.3f}, loss {result.final_loss:.5f}")

aucs = []
for rec in dataset:
    pred = forward(result.model, rec.graph)
    if pred.predicted_class != rec.label:
        continue
    scores = linear_gradient_scores(result.model, rec.graph, rec.label, original=pred)
    aucs.append(edge_mask_auc(scores.values, rec.gt_edge_mask))

print(f"motif recovery on {len(aucs)} correctly classified graphs:")
print(f"  mean AUC {np.mean(aucs):.4f}   min {np.min(aucs):.4f}   max {np.max(aucs):.4f}")
print("(AUC 1.0 = every planted motif edge outranks every background edge)")
