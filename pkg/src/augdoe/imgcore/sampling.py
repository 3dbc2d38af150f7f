"""Resampling primitives built on the bilinear warp kernel."""

from __future__ import annotations

import math

import numpy as np

from augdoe import kernels
from augdoe.errors import InvalidInputError
from augdoe.imgcore.image import Image


def sample_bilinear(img: Image, x: float, y: float) -> np.ndarray:
    """Per-channel value at real coordinate ``(x, y)``, rounded half up.

    Coordinates outside the image are mirrored back in; integer
    coordinates return the stored pixel exactly.
    """
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidInputError("sample coordinates must be finite")
    out = kernels.warp_bilinear(img.pixels, np.array([[float(x)]]), np.array([[float(y)]]))
    return out[0, 0]


def warp(img: Image, map_x: np.ndarray, map_y: np.ndarray) -> Image:
    """Output pixel ``(i, j)`` takes the bilinear sample at ``(map_x[i, j], map_y[i, j])``."""
    map_x = np.ascontiguousarray(map_x, dtype=np.float64)
    map_y = np.ascontiguousarray(map_y, dtype=np.float64)
    if map_x.shape != map_y.shape or map_x.ndim != 2:
        raise InvalidInputError("map_x and map_y must be 2-D arrays of equal shape")
    return Image(kernels.warp_bilinear(img.pixels, map_x, map_y))


def resize_bilinear(img: Image, width: int, height: int) -> Image:
    """Resize with pixel-center alignment (the source area maps onto the whole output)."""
    if width < 1 or height < 1:
        raise InvalidInputError(f"target size must be positive, got {width}x{height}")
    if (width, height) == (img.width, img.height):
        return img
    xs = (np.arange(width, dtype=np.float64) + 0.5) * (img.width / width) - 0.5
    ys = (np.arange(height, dtype=np.float64) + 0.5) * (img.height / height) - 0.5
    map_x, map_y = np.meshgrid(xs, ys)
    return warp(img, map_x, map_y)


def affine_warp(img: Image, inverse: np.ndarray) -> Image:
    """Apply a 2x3 inverse affine map ``(x_out, y_out, 1) -> (x_src, y_src)``; size is kept."""
    inverse = np.asarray(inverse, dtype=np.float64)
    ys, xs = np.mgrid[0 : img.height, 0 : img.width].astype(np.float64)
    map_x = inverse[0, 0] * xs + inverse[0, 1] * ys + inverse[0, 2]
    map_y = inverse[1, 0] * xs + inverse[1, 1] * ys + inverse[1, 2]
    return warp(img, map_x, map_y)
