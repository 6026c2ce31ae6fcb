"""Determinant-of-Hessian blob keypoints and Haar-response descriptors.

The Hessian entries Dxx, Dyy, Dxy are box-filter approximations of Gaussian
second derivatives, evaluated in constant time per pixel from an integral
image at filter sizes 9, 15, 21, 27.  The blob score is
Dxx*Dyy - (0.9*Dxy)^2; strict local maxima over space and scale above a
threshold are kept, strongest first.

Descriptors are upright (no rotation): Haar wavelet responses are sampled
on a 20x20 grid spanning a 20*scale window, grouped into 4x4 subregions,
and each subregion contributes (sum dx, sum |dx|, sum dy, sum |dy|),
giving 64 values, L2-normalized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import GrayImage
from ..errors import ImageTooSmall
from .integral import IntegralImage, box_sum_clipped, integral_image
from .keypoints import Keypoint, top_k

FILTER_SIZES = (9, 15, 21, 27)
DXY_WEIGHT = 0.9
RESPONSE_THRESHOLD = 1e-4


@dataclass
class SurfDescriptor:
    values: np.ndarray  # length 64

    def __len__(self) -> int:
        return self.values.size


def _hessian_response(ii: IntegralImage, size: int) -> np.ndarray:
    """Blob score map for one filter size; border pixels (filter overflow) = 0."""
    h, w = ii.height, ii.width
    lobe = size // 3
    border = (size - 1) // 2
    inv_area = 1.0 / (size * size)
    rr, cc = np.mgrid[0:h, 0:w]

    def box(r0, c0, rows, cols):
        return box_sum_clipped(ii, r0, c0, r0 + rows, c0 + cols)

    dxx = box(rr - lobe + 1, cc - border, 2 * lobe - 1, size) - 3.0 * box(
        rr - lobe + 1, cc - lobe // 2, 2 * lobe - 1, lobe
    )
    dyy = box(rr - border, cc - lobe + 1, size, 2 * lobe - 1) - 3.0 * box(
        rr - lobe // 2, cc - lobe + 1, lobe, 2 * lobe - 1
    )
    dxy = (
        box(rr - lobe, cc + 1, lobe, lobe)
        + box(rr + 1, cc - lobe, lobe, lobe)
        - box(rr - lobe, cc - lobe, lobe, lobe)
        - box(rr + 1, cc + 1, lobe, lobe)
    )
    dxx = dxx * inv_area
    dyy = dyy * inv_area
    dxy = dxy * inv_area
    det = dxx * dyy - (DXY_WEIGHT * dxy) ** 2
    valid = np.zeros((h, w), dtype=bool)
    m = border + 1
    if h > 2 * m and w > 2 * m:
        valid[m : h - m, m : w - m] = True
    return np.where(valid, det, 0.0)


def surf_keypoints(img: GrayImage, k: int = 10, threshold: float = RESPONSE_THRESHOLD) -> list:
    if img.height < 32 or img.width < 32:
        raise ImageTooSmall(f"need at least 32x32 pixels, got {img.height}x{img.width}")
    ii = integral_image(img.pixels / 255.0)
    maps = [_hessian_response(ii, s) for s in FILTER_SIZES]
    found = []
    for si in range(1, len(FILTER_SIZES) - 1):
        below, mid, above = maps[si - 1], maps[si], maps[si + 1]
        h, w = mid.shape
        center = mid[1:-1, 1:-1]
        keep = center > threshold
        for layer in (below, mid, above):
            for dy in (0, 1, 2):
                for dx in (0, 1, 2):
                    if layer is mid and dy == 1 and dx == 1:
                        continue
                    keep &= center > layer[dy : dy + h - 2, dx : dx + w - 2]
        ys, xs = np.nonzero(keep)
        scale = 1.2 * FILTER_SIZES[si] / 9.0
        for py, px in zip(ys + 1, xs + 1):
            found.append(
                Keypoint(
                    x=float(px),
                    y=float(py),
                    scale=scale,
                    orientation=0.0,
                    response=float(mid[py, px]),
                )
            )
    return top_k(found, k)


def _haar_responses(ii: IntegralImage, ys: np.ndarray, xs: np.ndarray, s: int):
    """Haar wavelet responses of size 2s at integer points (ys, xs)."""
    hx = box_sum_clipped(ii, ys - s, xs, ys + s, xs + s) - box_sum_clipped(
        ii, ys - s, xs - s, ys + s, xs
    )
    hy = box_sum_clipped(ii, ys, xs - s, ys + s, xs + s) - box_sum_clipped(
        ii, ys - s, xs - s, ys, xs + s
    )
    return hx, hy


def surf_describe(img: GrayImage, kp: Keypoint) -> SurfDescriptor:
    ii = integral_image(img.pixels / 255.0)
    s = kp.scale
    s_int = max(1, int(round(s)))
    offs = (np.arange(20) - 9.5) * s
    v, u = np.meshgrid(offs, offs, indexing="ij")
    ys = np.rint(kp.y + v).astype(np.int64)
    xs = np.rint(kp.x + u).astype(np.int64)
    hx, hy = _haar_responses(ii, ys, xs, s_int)
    weight = np.exp(-(u * u + v * v) / (2 * (3.3 * s) ** 2))
    hx = hx * weight
    hy = hy * weight

    values = np.zeros(64)
    for sub_r in range(4):
        for sub_c in range(4):
            rs = slice(sub_r * 5, sub_r * 5 + 5)
            cs = slice(sub_c * 5, sub_c * 5 + 5)
            base = (sub_r * 4 + sub_c) * 4
            values[base + 0] = hx[rs, cs].sum()
            values[base + 1] = np.abs(hx[rs, cs]).sum()
            values[base + 2] = hy[rs, cs].sum()
            values[base + 3] = np.abs(hy[rs, cs]).sum()
    norm = np.linalg.norm(values)
    if norm > 0:
        values = values / norm
    return SurfDescriptor(values=values)
