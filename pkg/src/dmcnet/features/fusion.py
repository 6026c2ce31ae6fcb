"""Fixed-layout feature fusion and CSV interchange for descriptor matrices."""

from __future__ import annotations

import csv

import numpy as np

from ..errors import IoFailure


def concat_features(parts, targets) -> np.ndarray:
    """Pad or truncate each part to its target length, then concatenate.

    Zero-padding keeps fused vectors the same length across images with
    fewer keypoints than the layout allows.
    """
    if len(parts) != len(targets):
        raise ValueError(f"{len(parts)} parts but {len(targets)} targets")
    out = []
    for part, target in zip(parts, targets):
        arr = np.asarray(part, dtype=np.float64).ravel()
        if arr.size >= target:
            out.append(arr[:target])
        else:
            out.append(np.concatenate([arr, np.zeros(target - arr.size)]))
    if not out:
        return np.zeros(0)
    return np.concatenate(out)


def pack_keypoint_block(descriptors, max_keypoints: int, dim: int) -> np.ndarray:
    """Stack up to max_keypoints descriptor vectors into a fixed-length block."""
    parts = [d.values for d in descriptors[:max_keypoints]]
    parts += [np.zeros(dim)] * (max_keypoints - len(parts))
    return concat_features(parts, [dim] * max_keypoints)


def write_descriptor_csv(path, labels, matrix, layout: str) -> None:
    """One row per image: label then feature values; first row documents layout."""
    matrix = np.asarray(matrix, dtype=np.float64)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["layout", layout])
            for label, row in zip(labels, matrix):
                writer.writerow([int(label)] + [repr(float(v)) for v in row])
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_descriptor_csv(path):
    """Inverse of write_descriptor_csv; returns (labels, matrix, layout)."""
    try:
        with open(path, "r", newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            layout = header[1] if len(header) > 1 else ""
            labels, rows = [], []
            for row in reader:
                labels.append(int(row[0]))
                rows.append([float(v) for v in row[1:]])
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return np.array(labels, dtype=np.int64), np.array(rows, dtype=np.float64), layout
