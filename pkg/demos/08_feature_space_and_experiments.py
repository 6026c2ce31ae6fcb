"""Feature-space analysis plus the end-to-end experiment harness.

Projects the balanced image pool with PCA and t-SNE (the CSVs these
produce feed any scatter-plot tool), then runs a full seeded benchmark
method through the harness and emits the deterministic report files.
"""

import tempfile
from pathlib import Path

import numpy as np

from dmcnet.dataset import balanced_sample, scan_dataset
from dmcnet.dimred import TsneConfig, pca_encode, pca_fit, tsne_run
from dmcnet.harness import ExperimentConfig, ImageStore, emit_report, repeat_experiments, write_embedding_csv
from dmcnet.synthetic import generate_corpus

work = Path(tempfile.mkdtemp())
root = work / "corpus"
generate_corpus(root)
manifest = scan_dataset(root)
store = ImageStore(manifest)

balanced = balanced_sample(manifest, seed=0)
labels = balanced.labels()
X = store.flat_rgb(balanced.paths())  # 30000-dim flattened colour images
print(f"balanced pool: {X.shape[0]} images x {X.shape[1]} dims")

model = pca_fit(X, 2)
pca_points = pca_encode(model, X)
print(f"PCA explained variances: {model.variances[0]:.3g}, {model.variances[1]:.3g}")

emb = tsne_run(X, TsneConfig(perplexity=5.0, iterations=300, seed=0), labels=labels)
print(f"t-SNE KL: {emb.kl_history[0]:.3f} -> {emb.kl:.3f} over {len(emb.kl_history)} iterations")

for name, pts in (("pca", pca_points), ("tsne", emb.points)):
    out = work / f"embedding_{name}.csv"
    write_embedding_csv(out, pts, labels)
    print(f"wrote {out}")

# Per-class centroid distances in the embedding: the isolated class should
# sit away from the two that overlap.
cent = np.stack([emb.points[labels == c].mean(axis=0) for c in range(3)])
d01 = np.linalg.norm(cent[0] - cent[1])
d12 = np.linalg.norm(cent[1] - cent[2])
print(f"t-SNE centroid distances: class0-class1 {d01:.2f}, class1-class2 {d12:.2f}")

# One full harness method: three seeded repeats, aggregated, emitted.
summary = repeat_experiments(
    ExperimentConfig(method="hog_svm", repeats=3, base_seed=0), manifest, store
)
print(f"\nhog_svm over {len(summary.runs)} runs: mean {summary.mean:.3f} "
      f"std {summary.std:.3f} min {summary.min:.3f} max {summary.max:.3f}")
paths = emit_report([summary], work / "report")
print("report files:", ", ".join(str(p) for p in paths.values()))
