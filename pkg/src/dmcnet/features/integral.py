"""Integral images: constant-time rectangular sums from a prefix-sum grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class IntegralImage:
    """(H+1) x (W+1) inclusive prefix sums; first row and column are zero."""

    sums: np.ndarray

    @property
    def height(self) -> int:
        return self.sums.shape[0] - 1

    @property
    def width(self) -> int:
        return self.sums.shape[1] - 1


def integral_image(pixels: np.ndarray) -> IntegralImage:
    p = np.asarray(pixels, dtype=np.float64)
    sums = np.zeros((p.shape[0] + 1, p.shape[1] + 1))
    np.cumsum(np.cumsum(p, axis=0), axis=1, out=sums[1:, 1:])
    return IntegralImage(sums=sums)


def box_sum(ii: IntegralImage, y0: int, x0: int, y1: int, x1: int) -> float:
    """Sum of pixels in rows [y0, y1) and columns [x0, x1): four lookups."""
    s = ii.sums
    return s[y1, x1] - s[y0, x1] - s[y1, x0] + s[y0, x0]


def box_sum_clipped(ii: IntegralImage, y0, x0, y1, x1):
    """Vectorized box sums with coordinates clipped to the image bounds.

    Out-of-range boxes count only the in-range part (zero when fully out),
    which is the behaviour the SURF box filters need near borders.
    """
    h, w = ii.height, ii.width
    y0 = np.clip(y0, 0, h)
    y1 = np.clip(y1, 0, h)
    x0 = np.clip(x0, 0, w)
    x1 = np.clip(x1, 0, w)
    s = ii.sums
    return s[y1, x1] - s[y0, x1] - s[y1, x0] + s[y0, x0]
