"""dmcnet: engagement-classification toolkit built on numpy.

Classical descriptors (HOG, scale-space and blob keypoints), an SMO-trained
SVM, four small conv-net architectures with from-scratch backprop, a
classification metric suite, PCA/t-SNE feature-space analysis, and a
deterministic batch-experiment harness.
"""

__version__ = "0.1.0"

from . import dataset, dimred, features, harness, metrics, nn, svm, synthetic

__all__ = [
    "dataset",
    "dimred",
    "features",
    "harness",
    "metrics",
    "nn",
    "svm",
    "synthetic",
]
