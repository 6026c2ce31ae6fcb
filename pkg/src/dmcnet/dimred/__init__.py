"""Dimensionality reduction: eigenvector-projection PCA and t-SNE."""

from .jacobi import jacobi_eigh
from .pca import PcaModel, pca_decode, pca_encode, pca_fit, pca_reconstruct
from .tsne import Embedding, TsneConfig, tsne_affinities, tsne_kl, tsne_q, tsne_run

__all__ = [
    "Embedding",
    "PcaModel",
    "TsneConfig",
    "jacobi_eigh",
    "pca_decode",
    "pca_encode",
    "pca_fit",
    "pca_reconstruct",
    "tsne_affinities",
    "tsne_kl",
    "tsne_q",
    "tsne_run",
]
