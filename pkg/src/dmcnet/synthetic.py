"""Deterministic synthetic PPM corpus for running the suite without real data.

The generator writes 60 small colour images whose class proportions mirror
the real dataset's imbalance (6 / 30 / 24, the same ratios at 1/74 scale).
Each class gets a visually distinct texture so that descriptors and
classifiers have actual signal to latch onto:

* class 0 (disengaged): dark background with a single bright blob,
* class 1 (partially_engaged): horizontal stripes,
* class 2 (engaged): checkerboard.

Sizes vary per image; everything derives from one PCG64 seed.
"""

from __future__ import annotations

import os

import numpy as np

from .dataset import CLASS_NAMES, RgbImage, save_ppm

DEFAULT_COUNTS = (6, 30, 24)


def _blob(h, w, rng):
    yy, xx = np.mgrid[0:h, 0:w]
    cy = rng.uniform(0.3, 0.7) * h
    cx = rng.uniform(0.3, 0.7) * w
    s = rng.uniform(0.08, 0.16) * min(h, w)
    blob = np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * s * s))
    img = 30 + 200 * blob[..., None] * np.array([1.0, 0.9, 0.7])
    return img


def _stripes(h, w, rng):
    yy = np.arange(h).reshape(-1, 1)
    period = rng.integers(6, 14)
    phase = rng.uniform(0, 2 * np.pi)
    wave = 0.5 + 0.5 * np.sin(2 * np.pi * yy / period + phase)
    img = np.broadcast_to(wave, (h, w))[..., None] * np.array([120.0, 200.0, 160.0]) + 40
    return img.copy()


def _checker(h, w, rng):
    cell = int(rng.integers(5, 12))
    yy, xx = np.mgrid[0:h, 0:w]
    board = ((yy // cell + xx // cell) % 2).astype(np.float64)
    img = board[..., None] * np.array([180.0, 140.0, 220.0]) + 30
    return img


_PATTERNS = (_blob, _stripes, _checker)


def generate_corpus(root, counts=DEFAULT_COUNTS, seed: int = 1234) -> str:
    """Write the corpus under ``root`` and return ``root``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    root = os.fspath(root)
    for label, name in enumerate(CLASS_NAMES):
        class_dir = os.path.join(root, name)
        os.makedirs(class_dir, exist_ok=True)
        for i in range(counts[label]):
            h = int(rng.integers(40, 120))
            w = int(rng.integers(40, 120))
            img = _PATTERNS[label](h, w, rng)
            img = img + rng.normal(0, 6.0, size=img.shape)
            pixels = np.clip(np.rint(img), 0, 255).astype(np.uint8)
            save_ppm(os.path.join(class_dir, f"{name}_{i:03d}.ppm"), RgbImage(pixels))
    return root
