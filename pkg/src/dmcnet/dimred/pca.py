"""PCA as top-l eigenvector projection with encode/decode semantics.

The covariance of the mean-centred data is eigendecomposed with the cyclic
Jacobi solver when the feature count is modest (n <= 512).  For wider data
(flattened images) the same eigenvectors come from the m x m Gram matrix:
if (X_c X_c^T) u = lambda u then X_c^T u, normalized, is an eigenvector of
the covariance with the same eigenvalue scaling.

Sign convention: each component's largest-magnitude entry is positive.
Centering can be disabled for the strict design-matrix formulation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch
from .jacobi import jacobi_eigh

GRAM_TRICK_THRESHOLD = 512


@dataclass
class PcaModel:
    mean: np.ndarray  # (n,)
    components: np.ndarray  # (n, l), orthonormal columns
    variances: np.ndarray  # (l,), descending
    rank_deficient: bool = False

    @property
    def l(self) -> int:
        return self.components.shape[1]


def _fix_signs(V: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def pca_fit(X: np.ndarray, l: int, center: bool = True) -> PcaModel:
    X = np.asarray(X, dtype=np.float64)
    m, n = X.shape
    if m < 2:
        raise ValueError(f"need at least 2 samples, got {m}")
    if l > min(m - 1, n) or l < 1:
        raise ValueError(f"l={l} out of range for {m}x{n} data")
    mean = X.mean(axis=0) if center else np.zeros(n)
    Xc = X - mean
    if n <= GRAM_TRICK_THRESHOLD:
        cov = (Xc.T @ Xc) / (m - 1)
        eigvals, eigvecs = jacobi_eigh(cov)
        floor = 1e-12 * max(1.0, float(eigvals[0]))
        positive = int(np.sum(eigvals > floor))
        # Jacobi yields a full orthonormal basis, so all l requested columns
        # are returned even past the rank (their variances are ~0).
        take = l
        rank_deficient = positive < l
    else:
        gram = (Xc @ Xc.T) / (m - 1)
        gvals, gvecs = jacobi_eigh(gram)
        keep = gvals > 1e-12 * max(1.0, float(gvals[0]))
        gvals, gvecs = gvals[keep], gvecs[:, keep]
        eigvecs = Xc.T @ gvecs
        eigvecs = eigvecs / np.linalg.norm(eigvecs, axis=0)
        eigvals = gvals
        # the Gram route only recovers range-space directions
        take = min(l, eigvecs.shape[1])
        rank_deficient = take < l
    components = _fix_signs(eigvecs[:, :take])
    return PcaModel(
        mean=mean,
        components=components,
        variances=np.maximum(eigvals[:take], 0.0),
        rank_deficient=rank_deficient,
    )


def pca_encode(model: PcaModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.mean.shape[0]:
        raise DimensionMismatch(f"expected {model.mean.shape[0]} dims, got {x.shape[-1]}")
    return (x - model.mean) @ model.components


def pca_decode(model: PcaModel, c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=np.float64)
    if c.shape[-1] != model.l:
        raise DimensionMismatch(f"expected {model.l} codes, got {c.shape[-1]}")
    return c @ model.components.T + model.mean


def pca_reconstruct(model: PcaModel, x: np.ndarray) -> np.ndarray:
    return pca_decode(model, pca_encode(model, x))
