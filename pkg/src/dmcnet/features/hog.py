"""Sobel gradients and histogram-of-oriented-gradients descriptors.

The gradient orientation uses the three-branch arctangent

    phi = atan(dy/dx) - pi   if dx < 0 and dy < 0
    phi = atan(dy/dx) + pi   if dx < 0 and dy > 0
    phi = atan(dy/dx)        otherwise

rather than atan2; the two differ at the single point dy == 0, dx < 0
(this form maps it to 0).

HOG tiles the image into 8x8-pixel cells and accumulates each pixel's
gradient magnitude into 9 unsigned-orientation bins over [0, pi), with
linear interpolation between the two nearest bins (circular at the
0/pi seam).  Magnitudes are weighted by a Gaussian centred in the cell
with sigma equal to half the cell width.  Cell histograms are
concatenated row-major; there is no block normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import GrayImage
from ..errors import ImageTooSmall

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
SOBEL_Y = SOBEL_X.T


@dataclass
class GradientField:
    mag: np.ndarray
    phi: np.ndarray
    dx: np.ndarray
    dy: np.ndarray


@dataclass
class HogDescriptor:
    values: np.ndarray
    cells_y: int
    cells_x: int
    bins: int

    def __len__(self) -> int:
        return self.values.size


def _correlate3(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """3x3 cross-correlation with edge replication."""
    padded = np.pad(img, 1, mode="edge")
    out = np.zeros_like(img)
    for ky in range(3):
        for kx in range(3):
            out += kernel[ky, kx] * padded[ky : ky + img.shape[0], kx : kx + img.shape[1]]
    return out


def sobel_gradients(img: GrayImage) -> GradientField:
    pixels = img.pixels
    if pixels.shape[0] < 3 or pixels.shape[1] < 3:
        raise ImageTooSmall(f"need at least 3x3 pixels, got {pixels.shape}")
    dx = _correlate3(pixels, SOBEL_X)
    dy = _correlate3(pixels, SOBEL_Y)
    mag = np.sqrt(dx * dx + dy * dy)
    with np.errstate(divide="ignore", invalid="ignore"):
        base = np.arctan(dy / dx)
    # dx == 0: atan(dy/0) is +-pi/2 by sign of dy, 0 when dy is also 0.
    base = np.where(dx == 0, np.sign(dy) * (np.pi / 2), base)
    phi = np.where(
        (dx < 0) & (dy < 0),
        base - np.pi,
        np.where((dx < 0) & (dy > 0), base + np.pi, base),
    )
    return GradientField(mag=mag, phi=phi, dx=dx, dy=dy)


def hog_extract(img: GrayImage, cell_px: int = 8, bins: int = 9) -> HogDescriptor:
    h, w = img.pixels.shape
    if h < cell_px or w < cell_px:
        raise ImageTooSmall(f"image {h}x{w} smaller than one {cell_px}px cell")
    grad = sobel_gradients(img)
    cells_y, cells_x = h // cell_px, w // cell_px
    crop_h, crop_w = cells_y * cell_px, cells_x * cell_px
    mag = grad.mag[:crop_h, :crop_w]
    phi = grad.phi[:crop_h, :crop_w]

    # Per-cell Gaussian weighting, sigma = half the cell width.
    sigma = cell_px / 2.0
    c = (cell_px - 1) / 2.0
    ax = np.arange(cell_px) - c
    gauss = np.exp(-(ax[:, None] ** 2 + ax[None, :] ** 2) / (2 * sigma * sigma))
    weight = np.tile(gauss, (cells_y, cells_x))
    wmag = mag * weight

    # Unsigned orientation in [0, pi); split each pixel between the two
    # nearest bins (wrapping at the seam).
    theta = np.mod(phi, np.pi)
    bin_width = np.pi / bins
    pos = theta / bin_width - 0.5
    lo = np.floor(pos).astype(np.int64)
    frac = pos - lo
    lo_bin = np.mod(lo, bins)
    hi_bin = np.mod(lo + 1, bins)

    cell_idx = (np.arange(crop_h)[:, None] // cell_px) * cells_x + (
        np.arange(crop_w)[None, :] // cell_px
    )
    flat_lo = (cell_idx * bins + lo_bin).ravel()
    flat_hi = (cell_idx * bins + hi_bin).ravel()
    n = cells_y * cells_x * bins
    hist = np.bincount(flat_lo, weights=(wmag * (1 - frac)).ravel(), minlength=n)
    hist += np.bincount(flat_hi, weights=(wmag * frac).ravel(), minlength=n)
    return HogDescriptor(values=hist, cells_y=cells_y, cells_x=cells_x, bins=bins)
