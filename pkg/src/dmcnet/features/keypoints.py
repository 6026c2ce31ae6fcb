"""Keypoint record shared by the SIFT and SURF detectors."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Keypoint:
    x: float
    y: float
    scale: float
    orientation: float
    response: float


def top_k(keypoints, k: int):
    """Sort by |response| descending, break ties by (y, x) ascending, keep k."""
    ranked = sorted(keypoints, key=lambda p: (-abs(p.response), p.y, p.x))
    return ranked[:k]
