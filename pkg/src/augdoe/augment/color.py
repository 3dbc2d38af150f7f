"""Brightness/contrast, color jitter, grayscale and CLAHE."""

from __future__ import annotations

import math

import numpy as np

from augdoe import kernels
from augdoe.augment.registry import COLOR, as_range, augmentation, require_stream
from augdoe.errors import InvalidInputError
from augdoe.imgcore.color import gray_float, gray_u8, hsv_to_rgb, rgb_to_hsv
from augdoe.imgcore.image import Image, to_uint8


def _need_rgb(img: Image, kind: str):
    if img.channels != 3:
        raise InvalidInputError(f"{kind} needs a 3-channel image, got {img.channels}")


def brightness_contrast_fixed(img: Image, brightness: float, contrast: float) -> Image:
    """``v' = (v - 127.5) * (1 + contrast) + 127.5 + 255 * brightness``, clamped."""
    v = img.pixels.astype(np.float64)
    return Image(to_uint8((v - 127.5) * (1.0 + contrast) + 127.5 + 255.0 * brightness))


@augmentation("brightness_contrast", COLOR)
def brightness_contrast(img, stream, brightness=(-0.2, 0.2), contrast=(-0.2, 0.2)):
    brightness = as_range(brightness, "brightness", -1.0, 1.0)
    contrast = as_range(contrast, "contrast", -1.0)
    stream = require_stream(stream, "brightness_contrast")
    db = stream.uniform(*brightness)
    dc = stream.uniform(*contrast)
    return brightness_contrast_fixed(img, db, dc), {"brightness": db, "contrast": dc}


# color-jitter sub-operations; each maps uint8 to uint8


def adjust_brightness(img: Image, factor: float) -> Image:
    return Image(to_uint8(img.pixels.astype(np.float64) * factor))


def adjust_contrast(img: Image, factor: float) -> Image:
    v = img.pixels.astype(np.float64)
    mean = float(np.mean(gray_float(v) if img.channels == 3 else v))
    return Image(to_uint8(mean + factor * (v - mean)))


def adjust_saturation(img: Image, factor: float) -> Image:
    _need_rgb(img, "saturation")
    v = img.pixels.astype(np.float64)
    g = gray_float(v)[..., None]
    return Image(to_uint8(g + factor * (v - g)))


def adjust_hue(img: Image, shift: float) -> Image:
    """Rotate hue by ``shift`` of the full circle (0.2 is 72 degrees)."""
    _need_rgb(img, "hue")
    hsv = rgb_to_hsv(img.pixels)
    hsv[..., 0] = (hsv[..., 0] + shift * 360.0) % 360.0
    return Image(to_uint8(hsv_to_rgb(hsv)))


JITTER_OPS = {
    "brightness": adjust_brightness,
    "contrast": adjust_contrast,
    "saturation": adjust_saturation,
    "hue": adjust_hue,
}
JITTER_ORDER = ("brightness", "contrast", "saturation", "hue")


def _factor_range(value, name):
    if isinstance(value, (int, float)):
        if value < 0:
            raise InvalidInputError(f"{name} jitter must be non-negative")
        return max(0.0, 1.0 - value), 1.0 + value
    return as_range(value, name, 0.0)


@augmentation("color_jitter", COLOR)
def color_jitter(img, stream, brightness=0.2, contrast=0.2, saturation=0.2, hue=0.2):
    """Brightness, contrast, saturation and hue changes in a seeded random order.

    Scalar ``brightness``/``contrast``/``saturation`` ``j`` mean factors in
    ``[1 - j, 1 + j]``; scalar ``hue`` ``j`` means a shift in ``[-j, j]``
    of the hue circle. Explicit ``(lo, hi)`` pairs are used as given.
    """
    _need_rgb(img, "color_jitter")
    ranges = {
        "brightness": _factor_range(brightness, "brightness"),
        "contrast": _factor_range(contrast, "contrast"),
        "saturation": _factor_range(saturation, "saturation"),
        "hue": as_range((-hue, hue) if isinstance(hue, (int, float)) else hue, "hue", -0.5, 0.5),
    }
    stream = require_stream(stream, "color_jitter")
    order = [JITTER_ORDER[i] for i in stream.permutation(4)]
    values = {name: stream.uniform(*ranges[name]) for name in JITTER_ORDER}
    out = img
    for name in order:
        out = JITTER_OPS[name](out, values[name])
    return out, {"order": order, **values}


def apply_jitter_sequence(img: Image, order, values) -> Image:
    """Re-run a logged jitter: ``order`` of sub-op names with their ``values``."""
    for name in order:
        img = JITTER_OPS[name](img, values[name])
    return img


@augmentation("grayscale", COLOR)
def grayscale(img, stream=None):
    _need_rgb(img, "grayscale")
    return Image(np.repeat(gray_u8(img.pixels)[..., None], 3, axis=2)), {}


# CLAHE


def equalization_lut(hist: np.ndarray) -> np.ndarray:
    """Classic equalization mapping ``round(255 * (cdf - cdf_min) / (n - cdf_min))``.

    A histogram with a single occupied bin has nothing to spread and maps
    every value to itself.
    """
    hist = np.asarray(hist, dtype=np.float64)
    if np.count_nonzero(hist) <= 1:
        return np.arange(256, dtype=np.float64)
    cdf = np.cumsum(hist)
    cdf_min = cdf[np.flatnonzero(hist)[0]]
    total = cdf[-1]
    return np.clip(np.floor(255.0 * (cdf - cdf_min) / (total - cdf_min) + 0.5), 0, 255)


def clip_histogram(hist: np.ndarray, limit: float) -> np.ndarray:
    """Clip bins at ``limit`` and spread the excess evenly over all 256 bins."""
    hist = np.asarray(hist, dtype=np.float64)
    if not math.isfinite(limit):
        return hist
    excess = np.maximum(hist - limit, 0.0).sum()
    return np.minimum(hist, limit) + excess / hist.size


def clahe_luts(lum: np.ndarray, tiles: tuple[int, int], clip_limit: float):
    """Per-tile mappings for a (h, w) uint8 channel.

    The channel is mirror-padded up to a whole number of tiles. The clip
    limit is relative to a flat histogram: a bin may hold at most
    ``clip_limit * tile_area / 256`` counts.
    """
    tiles_x, tiles_y = tiles
    h, w = lum.shape
    tile_h = -(-h // tiles_y)
    tile_w = -(-w // tiles_x)
    rows = kernels.reflect_index(np.arange(tile_h * tiles_y), h)
    cols = kernels.reflect_index(np.arange(tile_w * tiles_x), w)
    padded = lum[np.ix_(rows, cols)]
    limit = max(clip_limit * tile_h * tile_w / 256.0, 1.0)
    luts = np.empty((tiles_y, tiles_x, 256), dtype=np.float64)
    for ty in range(tiles_y):
        for tx in range(tiles_x):
            block = padded[ty * tile_h : (ty + 1) * tile_h, tx * tile_w : (tx + 1) * tile_w]
            hist = np.bincount(block.ravel(), minlength=256)
            if np.count_nonzero(hist) <= 1:
                luts[ty, tx] = np.arange(256)
            else:
                luts[ty, tx] = equalization_lut(clip_histogram(hist, limit))
    return luts, tile_h, tile_w


def clahe_channel(lum: np.ndarray, clip_limit: float, tiles=(8, 8)) -> np.ndarray:
    luts, tile_h, tile_w = clahe_luts(lum, tiles, clip_limit)
    return kernels.clahe_interpolate(np.ascontiguousarray(lum), luts, tile_h, tile_w)


def clahe_fixed(img: Image, clip_limit: float, tiles=(8, 8)) -> Image:
    """CLAHE on 1-channel images, or on the HSV value channel of RGB images."""
    if clip_limit <= 0:
        raise InvalidInputError(f"clip_limit must be positive, got {clip_limit}")
    tiles = (int(tiles[0]), int(tiles[1]))
    if min(tiles) < 1:
        raise InvalidInputError(f"tiles must be positive, got {tiles}")
    if img.channels == 1:
        return Image(clahe_channel(img.pixels[:, :, 0], clip_limit, tiles)[..., None])
    rgb = img.pixels.astype(np.float64)
    value = img.pixels.max(axis=2)
    new = clahe_channel(value, clip_limit, tiles).astype(np.float64)
    # scaling by new/old value keeps hue and saturation
    safe = np.where(value > 0, value, 1).astype(np.float64)
    scaled = rgb * (new / safe)[..., None]
    out = np.where((value > 0)[..., None], scaled, new[..., None])
    return Image(to_uint8(out))


@augmentation("clahe", COLOR)
def clahe(img, stream, clip_limit=(1.0, 4.0), tiles=(8, 8)):
    clip = as_range(clip_limit, "clip_limit", 0.0)
    stream = require_stream(stream, "clahe")
    limit = stream.uniform(*clip)
    return clahe_fixed(img, limit, tiles), {"clip_limit": limit}
