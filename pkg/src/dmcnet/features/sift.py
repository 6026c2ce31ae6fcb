"""Scale-space keypoints and 128-value gradient-histogram descriptors.

Detection builds a difference-of-Gaussians pyramid (3 octaves, 3 detection
scales per octave, base sigma 1.6) on intensities scaled to [0, 1],
keeps strict 26-neighbourhood extrema with |DoG| >= 0.03, assigns each
keypoint the dominant gradient orientation in a Gaussian-weighted window,
and returns the strongest ``k`` by |response|.

Description samples a 16x16 grid around the keypoint (rotated to its
orientation, spaced by its scale), splits it into 4x4 sub-blocks, builds an
8-bin orientation histogram per sub-block, then clips at 0.2 and
L2-renormalizes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import GrayImage
from ..errors import ImageTooSmall
from .keypoints import Keypoint, top_k

N_OCTAVES = 3
N_SCALES = 3
SIGMA0 = 1.6
CONTRAST_THRESHOLD = 0.03


@dataclass
class SiftDescriptor:
    values: np.ndarray  # length 128

    def __len__(self) -> int:
        return self.values.size


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian with edge replication; identity for sigma <= 0."""
    if sigma <= 0:
        return img.copy()
    r = max(1, int(np.ceil(4.0 * sigma)))
    x = np.arange(-r, r + 1, dtype=np.float64)
    kern = np.exp(-(x * x) / (2 * sigma * sigma))
    kern /= kern.sum()
    h, w = img.shape
    padded = np.pad(img, ((r, r), (0, 0)), mode="edge")
    out = np.zeros_like(img)
    for i in range(2 * r + 1):
        out += kern[i] * padded[i : i + h, :]
    padded = np.pad(out, ((0, 0), (r, r)), mode="edge")
    out2 = np.zeros_like(img)
    for i in range(2 * r + 1):
        out2 += kern[i] * padded[:, i : i + w]
    return out2


def _build_pyramid(base: np.ndarray):
    """Gaussian and DoG pyramids; per octave, N_SCALES+3 blurred images."""
    k = 2.0 ** (1.0 / N_SCALES)
    sigmas = [SIGMA0 * k**i for i in range(N_SCALES + 3)]
    gaussians, dogs = [], []
    img = base
    for _ in range(N_OCTAVES):
        octave = [gaussian_blur(img, sigmas[0])]
        for i in range(1, len(sigmas)):
            # incremental blur: sigma_extra^2 = sigma_i^2 - sigma_{i-1}^2
            extra = np.sqrt(sigmas[i] ** 2 - sigmas[i - 1] ** 2)
            octave.append(gaussian_blur(octave[-1], extra))
        gaussians.append(octave)
        dogs.append([octave[i + 1] - octave[i] for i in range(len(octave) - 1)])
        # next octave starts from the image with sigma = 2 * SIGMA0
        img = octave[N_SCALES][::2, ::2]
    return gaussians, dogs


def _extrema_mask(below: np.ndarray, mid: np.ndarray, above: np.ndarray):
    """Strict 26-neighbourhood maxima/minima of the middle DoG layer."""
    h, w = mid.shape
    center = mid[1:-1, 1:-1]
    is_max = np.ones_like(center, dtype=bool)
    is_min = np.ones_like(center, dtype=bool)
    for layer in (below, mid, above):
        for dy in (0, 1, 2):
            for dx in (0, 1, 2):
                if layer is mid and dy == 1 and dx == 1:
                    continue
                neigh = layer[dy : dy + h - 2, dx : dx + w - 2]
                is_max &= center > neigh
                is_min &= center < neigh
    return is_max | is_min


def _dominant_orientation(gimg: np.ndarray, x: int, y: int, sigma_local: float) -> float:
    """Peak of a 36-bin gradient-orientation histogram around (x, y)."""
    h, w = gimg.shape
    radius = max(2, int(round(4.5 * sigma_local)))
    y0, y1 = max(1, y - radius), min(h - 1, y + radius + 1)
    x0, x1 = max(1, x - radius), min(w - 1, x + radius + 1)
    patch = gimg[y0 - 1 : y1 + 1, x0 - 1 : x1 + 1]
    dy = (patch[2:, 1:-1] - patch[:-2, 1:-1]) / 2.0
    dx = (patch[1:-1, 2:] - patch[1:-1, :-2]) / 2.0
    mag = np.hypot(dx, dy)
    ori = np.mod(np.arctan2(dy, dx), 2 * np.pi)
    yy, xx = np.mgrid[y0:y1, x0:x1]
    weight = np.exp(
        -((yy - y) ** 2 + (xx - x) ** 2) / (2 * (1.5 * sigma_local) ** 2)
    )
    bins = np.minimum((ori / (2 * np.pi) * 36).astype(np.int64), 35)
    hist = np.bincount(bins.ravel(), weights=(mag * weight).ravel(), minlength=36)
    peak = int(np.argmax(hist))
    return (peak + 0.5) * (2 * np.pi / 36)


def sift_keypoints(img: GrayImage, k: int = 10) -> list:
    if img.height < 32 or img.width < 32:
        raise ImageTooSmall(f"need at least 32x32 pixels, got {img.height}x{img.width}")
    base = img.pixels / 255.0
    gaussians, dogs = _build_pyramid(base)
    kscale = 2.0 ** (1.0 / N_SCALES)
    found = []
    for octave in range(N_OCTAVES):
        step = 2**octave
        for layer in range(1, N_SCALES + 1):
            below, mid, above = dogs[octave][layer - 1 : layer + 2]
            if min(mid.shape) < 3:
                continue
            mask = _extrema_mask(below, mid, above)
            mask &= np.abs(mid[1:-1, 1:-1]) >= CONTRAST_THRESHOLD
            ys, xs = np.nonzero(mask)
            sigma_local = SIGMA0 * kscale**layer
            for py, px in zip(ys + 1, xs + 1):
                theta = _dominant_orientation(gaussians[octave][layer], px, py, sigma_local)
                found.append(
                    Keypoint(
                        x=float(px * step),
                        y=float(py * step),
                        scale=sigma_local * step,
                        orientation=theta,
                        response=float(mid[py, px]),
                    )
                )
    return top_k(found, k)


def _bilinear_sample(grid: np.ndarray, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Sample grid at float coordinates with edge replication."""
    h, w = grid.shape
    ys = np.clip(ys, 0.0, h - 1.0)
    xs = np.clip(xs, 0.0, w - 1.0)
    y0 = np.floor(ys).astype(np.int64)
    x0 = np.floor(xs).astype(np.int64)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = ys - y0
    fx = xs - x0
    return (
        grid[y0, x0] * (1 - fy) * (1 - fx)
        + grid[y0, x1] * (1 - fy) * fx
        + grid[y1, x0] * fy * (1 - fx)
        + grid[y1, x1] * fy * fx
    )


def sift_describe(img: GrayImage, kp: Keypoint) -> SiftDescriptor:
    pixels = img.pixels / 255.0
    padded = np.pad(pixels, 1, mode="edge")
    dy = (padded[2:, 1:-1] - padded[:-2, 1:-1]) / 2.0
    dx = (padded[1:-1, 2:] - padded[1:-1, :-2]) / 2.0

    # 16x16 sample grid centred on the keypoint, rotated and scaled.
    offs = np.arange(16) - 7.5
    v, u = np.meshgrid(offs, offs, indexing="ij")  # v: rows, u: cols
    cos_t, sin_t = np.cos(kp.orientation), np.sin(kp.orientation)
    sx = kp.x + kp.scale * (cos_t * u - sin_t * v)
    sy = kp.y + kp.scale * (sin_t * u + cos_t * v)
    gx = _bilinear_sample(dx, sy, sx)
    gy = _bilinear_sample(dy, sy, sx)
    # rotate gradients into the keypoint frame
    rx = cos_t * gx + sin_t * gy
    ry = -sin_t * gx + cos_t * gy
    mag = np.hypot(rx, ry)
    ori = np.mod(np.arctan2(ry, rx), 2 * np.pi)

    weight = np.exp(-(u * u + v * v) / (2 * 8.0**2))
    wmag = mag * weight

    sub_row = (np.arange(16) // 4).reshape(-1, 1) * np.ones((1, 16), dtype=np.int64)
    sub_col = sub_row.T
    pos = ori / (2 * np.pi / 8) - 0.5
    lo = np.floor(pos).astype(np.int64)
    frac = pos - lo
    lo_bin = np.mod(lo, 8)
    hi_bin = np.mod(lo + 1, 8)

    cell = (sub_row * 4 + sub_col) * 8
    hist = np.bincount(
        (cell + lo_bin).ravel(), weights=(wmag * (1 - frac)).ravel(), minlength=128
    )
    hist += np.bincount(
        (cell + hi_bin).ravel(), weights=(wmag * frac).ravel(), minlength=128
    )

    norm = np.linalg.norm(hist)
    if norm > 0:
        hist = hist / norm
        hist = np.minimum(hist, 0.2)
        norm = np.linalg.norm(hist)
        if norm > 0:
            hist = hist / norm
    return SiftDescriptor(values=hist)
