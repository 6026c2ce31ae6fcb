"""SVM training by sequential minimal optimization, checked two ways.

The XOR problem shows the RBF kernel earning its keep; the brute-force
grid oracle certifies the dual objective; and the one-vs-rest composition
handles the three-class case.
"""

import numpy as np

from dmcnet.svm import (
    KernelSpec,
    TrainConfig,
    decision,
    dual_grid_search,
    dual_objective,
    kernel_matrix,
    ovr_train,
    smo_train_binary,
)

# XOR: not linearly separable, trivial for an RBF machine.
X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
y = np.array([-1.0, -1.0, 1.0, 1.0])
kernel = KernelSpec("rbf", gamma=1.0)
cfg = TrainConfig(C=10.0, tol=1e-5, max_passes=50, seed=1)

trace = {}
model = smo_train_binary(X, y, cfg, kernel, on_update=lambda a, b: trace.update(alpha=a.copy()))
print("XOR decisions:", [f"{decision(model, x):+.3f}" for x in X], "labels", y.astype(int).tolist())

K = kernel_matrix(kernel, X, X)
smo_val = dual_objective(K, y, trace["alpha"])
grid_val = dual_grid_search(K, y, cfg.C)
print(f"dual objective: smo={smo_val:.6f} grid-search={grid_val:.6f} "
      f"(shortfall {grid_val - smo_val:+.2e})")
print(f"support vectors: {len(model.alphas)} of {len(y)} points, "
      f"sum(alpha*y) = {np.sum(model.alphas * model.labels):+.2e}")

# Three well-separated clusters through the one-vs-rest composition.
rng = np.random.default_rng(0)
centers = np.array([(0.0, 0.0), (5.0, 0.0), (0.0, 5.0)])
Xc = np.concatenate([rng.normal(c, 0.1, (20, 2)) for c in centers])
yc = np.repeat([0, 1, 2], 20)
clf = ovr_train(Xc, yc, TrainConfig(C=1.0, seed=0), KernelSpec("rbf", gamma=0.5))
acc = (clf.predict(Xc) == yc).mean()
print(f"\nthree-cluster one-vs-rest training accuracy: {acc:.3f}")
margins = clf.decision_matrix(Xc[:3])
print("per-class margins for three samples:")
for row in margins:
    print("  ", np.array2string(row, precision=3))
