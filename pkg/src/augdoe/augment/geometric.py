"""Crops, flips, cutout and warps."""

from __future__ import annotations

import math

import numpy as np

from augdoe import kernels
from augdoe.augment.registry import GEOMETRIC, as_range, augmentation, draw_int, require_stream
from augdoe.errors import InvalidInputError
from augdoe.imgcore.image import Image
from augdoe.imgcore.sampling import resize_bilinear, warp


def _round(v: float) -> int:
    return int(math.floor(v + 0.5))


def _size(size) -> tuple[int, int]:
    if isinstance(size, int):
        return size, size
    w, h = (int(v) for v in size)
    if w < 1 or h < 1:
        raise InvalidInputError(f"size must be positive, got {size!r}")
    return w, h


def crop(img: Image, x: int, y: int, width: int, height: int) -> Image:
    if x < 0 or y < 0 or x + width > img.width or y + height > img.height:
        raise InvalidInputError(f"crop {width}x{height}+{x}+{y} exceeds {img.width}x{img.height}")
    return Image(img.pixels[y : y + height, x : x + width])


@augmentation("crop_random", GEOMETRIC)
def crop_random(img, stream, size=(512, 512)):
    """Copy a ``size = (width, height)`` window at a uniformly drawn offset."""
    cw, ch = _size(size)
    if cw > img.width or ch > img.height:
        raise InvalidInputError(f"crop {cw}x{ch} larger than image {img.width}x{img.height}")
    stream = require_stream(stream, "crop_random")
    x = stream.integers(0, img.width - cw + 1)
    y = stream.integers(0, img.height - ch + 1)
    return crop(img, x, y, cw, ch), {"x": x, "y": y, "width": cw, "height": ch}


@augmentation("crop_resized_random", GEOMETRIC)
def crop_resized_random(img, stream, size=(512, 512), scale=(0.5, 1.0), ratio=(3 / 4, 4 / 3)):
    """Crop a random area fraction and aspect ratio, then resize bilinearly to ``size``.

    Up to 10 attempts are drawn; if none fits inside the image a center crop
    with the aspect ratio clamped into ``ratio`` is used instead.
    """
    out_w, out_h = _size(size)
    scale = as_range(scale, "scale", 0.0, 1.0)
    ratio = as_range(ratio, "ratio", 0.0)
    if ratio[0] <= 0:
        raise InvalidInputError("ratio must be positive")
    stream = require_stream(stream, "crop_resized_random")
    w, h = img.width, img.height
    area = w * h
    log_ratio = (math.log(ratio[0]), math.log(ratio[1]))
    attempt = None
    for i in range(10):
        target = area * stream.uniform(*scale)
        aspect = math.exp(stream.uniform(*log_ratio))
        cw = _round(math.sqrt(target * aspect))
        ch = _round(math.sqrt(target / aspect))
        if 0 < cw <= w and 0 < ch <= h:
            x = stream.integers(0, w - cw + 1)
            y = stream.integers(0, h - ch + 1)
            attempt = i
            break
    else:
        in_ratio = w / h
        if in_ratio < ratio[0]:
            cw, ch = w, max(1, _round(w / ratio[0]))
        elif in_ratio > ratio[1]:
            cw, ch = max(1, _round(h * ratio[1])), h
        else:
            cw, ch = w, h
        x, y = (w - cw) // 2, (h - ch) // 2
    out = resize_bilinear(crop(img, x, y, cw, ch), out_w, out_h)
    return out, {"x": x, "y": y, "width": cw, "height": ch, "attempt": attempt}


@augmentation("flip_horizontal", GEOMETRIC)
def flip_horizontal(img, stream=None):
    return Image(img.pixels[:, ::-1]), {}


def flip_vertical(img: Image) -> Image:
    return Image(img.pixels[::-1])


@augmentation("cutout", GEOMETRIC)
def cutout(img, stream, holes=(1, 8), size=(8, 8), fill=0):
    """Fill ``holes`` rectangles of ``size = (width, height)`` centred at uniform pixels.

    Holes that overhang the border are clipped, so a hole may cover fewer
    than ``width * height`` pixels.
    """
    holes = as_range(holes, "holes", 0)
    hw, hh = _size(size)
    stream = require_stream(stream, "cutout")
    n = draw_int(stream, holes)
    px = img.pixels.copy()
    rects = []
    for _ in range(n):
        cy = stream.integers(0, img.height)
        cx = stream.integers(0, img.width)
        x0, y0 = max(cx - hw // 2, 0), max(cy - hh // 2, 0)
        x1, y1 = min(cx - hw // 2 + hw, img.width), min(cy - hh // 2 + hh, img.height)
        px[y0:y1, x0:x1] = fill
        rects.append([x0, y0, x1, y1])
    return Image(px), {"holes": n, "rects": rects}


def gaussian_kernel(sigma: float, radius: int | None = None) -> np.ndarray:
    if sigma <= 0:
        raise InvalidInputError(f"sigma must be positive, got {sigma}")
    if radius is None:
        radius = int(math.ceil(3.0 * sigma))
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(t * t) / (2.0 * sigma * sigma))
    return k / k.sum()


def smooth_field(field: np.ndarray, sigma: float) -> np.ndarray:
    k = gaussian_kernel(sigma)
    return kernels.convolve_separable(field[:, :, None], k, k)[:, :, 0]


@augmentation("elastic_transform", GEOMETRIC)
def elastic_transform(img, stream, alpha=1.0, sigma=50.0):
    """Warp by ``alpha * gaussian_smooth(U(-1, 1), sigma)`` per-axis displacement fields."""
    stream = require_stream(stream, "elastic_transform")
    shape = (img.height, img.width)
    dx = alpha * smooth_field(stream.uniform(-1.0, 1.0, size=shape), sigma)
    dy = alpha * smooth_field(stream.uniform(-1.0, 1.0, size=shape), sigma)
    ys, xs = np.mgrid[0 : img.height, 0 : img.width].astype(np.float64)
    out = warp(img, xs + dx, ys + dy)
    return out, {"alpha": alpha, "sigma": sigma, "max_displacement": float(np.sqrt(dx * dx + dy * dy).max())}


def _cos_sin_deg(angle: float) -> tuple[float, float]:
    quarter = angle / 90.0
    if quarter == int(quarter):
        return [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][int(quarter) % 4]
    rad = math.radians(angle)
    return math.cos(rad), math.sin(rad)


def shift_scale_rotate_fixed(img: Image, dx: float, dy: float, scale: float, angle: float) -> Image:
    """Rotate ``angle`` degrees counter-clockwise and scale about the center, then shift.

    ``dx``, ``dy`` are fractions of the width and height.
    """
    if scale <= 0:
        raise InvalidInputError(f"scale must be positive, got {scale}")
    c, s = _cos_sin_deg(angle)
    cx, cy = (img.width - 1) / 2.0, (img.height - 1) / 2.0
    tx, ty = dx * img.width, dy * img.height
    ys, xs = np.mgrid[0 : img.height, 0 : img.width].astype(np.float64)
    u = xs - cx - tx
    v = ys - cy - ty
    map_x = cx + (c * u - s * v) / scale
    map_y = cy + (s * u + c * v) / scale
    return warp(img, map_x, map_y)


@augmentation("shift_scale_rotate", GEOMETRIC)
def shift_scale_rotate(img, stream, shift=(-0.0625, 0.0625), scale=(0.9, 1.1), rotate=(-45.0, 45.0)):
    shift = as_range(shift, "shift", -1.0, 1.0)
    scale = as_range(scale, "scale", 0.0)
    rotate = as_range(rotate, "rotate", -360.0, 360.0)
    stream = require_stream(stream, "shift_scale_rotate")
    angle = stream.uniform(*rotate)
    factor = stream.uniform(*scale)
    dx = stream.uniform(*shift)
    dy = stream.uniform(*shift)
    out = shift_scale_rotate_fixed(img, dx, dy, factor, angle)
    return out, {"shift_x": dx, "shift_y": dy, "scale": factor, "angle": angle}
