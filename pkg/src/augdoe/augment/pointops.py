"""Point and histogram operations used by AutoAugment-style policies."""

from __future__ import annotations

import math

import numpy as np

from augdoe.augment.color import equalization_lut
from augdoe.augment.geometric import shift_scale_rotate_fixed
from augdoe.augment.registry import POINT, augmentation
from augdoe.errors import InvalidInputError, InvalidRangeError
from augdoe.imgcore.color import gray_float
from augdoe.imgcore.image import Image, to_uint8
from augdoe.imgcore.sampling import affine_warp


def posterize(img: Image, bits: int) -> Image:
    mask = (0xFF << (8 - int(bits))) & 0xFF
    return Image(img.pixels & np.uint8(mask))


def solarize(img: Image, threshold: float) -> Image:
    """Invert every sample at or above ``threshold``."""
    px = img.pixels
    return Image(np.where(px >= threshold, 255 - px, px))


def invert(img: Image) -> Image:
    return Image(255 - img.pixels)


def equalize(img: Image) -> Image:
    """Global histogram equalization of each channel independently."""
    out = np.empty_like(img.pixels)
    for c in range(img.channels):
        ch = img.pixels[:, :, c]
        lut = equalization_lut(np.bincount(ch.ravel(), minlength=256)).astype(np.uint8)
        out[:, :, c] = lut[ch]
    return Image(out)


def autocontrast(img: Image) -> Image:
    """Stretch each channel linearly so its min maps to 0 and its max to 255."""
    px = img.pixels.astype(np.float64)
    lo = px.min(axis=(0, 1), keepdims=True)
    hi = px.max(axis=(0, 1), keepdims=True)
    span = np.where(hi > lo, hi - lo, 1.0)
    stretched = (px - lo) * (255.0 / span)
    return Image(np.where(hi > lo, to_uint8(stretched), img.pixels))


def _shear(img: Image, factor: float, axis: str) -> Image:
    c = ((img.height - 1) / 2.0) if axis == "x" else ((img.width - 1) / 2.0)
    if axis == "x":
        inverse = [[1.0, -factor, factor * c], [0.0, 1.0, 0.0]]
    else:
        inverse = [[1.0, 0.0, 0.0], [-factor, 1.0, factor * c]]
    return affine_warp(img, np.array(inverse))


def shear_x(img: Image, factor: float) -> Image:
    """Shear rows about the horizontal center line: ``x' = x + factor * (y - cy)``."""
    return _shear(img, factor, "x")


def shear_y(img: Image, factor: float) -> Image:
    return _shear(img, factor, "y")


def color(img: Image, factor: float) -> Image:
    """Interpolate between grayscale (0) and the original (1); >1 oversaturates."""
    if img.channels == 1:
        return img
    v = img.pixels.astype(np.float64)
    g = gray_float(v)[..., None]
    return Image(to_uint8(g + factor * (v - g)))


def contrast(img: Image, factor: float) -> Image:
    v = img.pixels.astype(np.float64)
    mean = math.floor(float(np.mean(gray_float(v) if img.channels == 3 else v)) + 0.5)
    return Image(to_uint8(mean + factor * (v - mean)))


_SHARPEN_SMOOTH = np.array([[1, 1, 1], [1, 5, 1], [1, 1, 1]], dtype=np.float64) / 13.0


def sharpness(img: Image, factor: float) -> Image:
    """Blend with a 3x3 smoothed copy; border pixels keep their value."""
    v = img.pixels.astype(np.float64)
    if img.height < 3 or img.width < 3:
        return img
    smooth = v.copy()
    acc = np.zeros_like(v[1:-1, 1:-1])
    for dy in range(3):
        for dx in range(3):
            acc = acc + _SHARPEN_SMOOTH[dy, dx] * v[dy : dy + img.height - 2, dx : dx + img.width - 2]
    smooth[1:-1, 1:-1] = np.floor(acc + 0.5)
    return Image(to_uint8(smooth + factor * (v - smooth)))


def rotate(img: Image, degrees: float) -> Image:
    return shift_scale_rotate_fixed(img, 0.0, 0.0, 1.0, degrees)


# kind -> (function, magnitude bounds or None when the op takes no magnitude)
POINT_OPS = {
    "posterize": (posterize, (1, 8)),
    "solarize": (solarize, (0, 256)),
    "equalize": (equalize, None),
    "autocontrast": (autocontrast, None),
    "invert": (invert, None),
    "shear_x": (shear_x, (-0.3, 0.3)),
    "shear_y": (shear_y, (-0.3, 0.3)),
    "color": (color, (0.0, 2.0)),
    "contrast": (contrast, (0.0, 2.0)),
    "sharpness": (sharpness, (0.0, 2.0)),
    "rotate": (rotate, (-180.0, 180.0)),
}


def check_magnitude(kind: str, magnitude):
    if kind not in POINT_OPS:
        raise InvalidInputError(f"unknown point op {kind!r}; expected one of {sorted(POINT_OPS)}")
    bounds = POINT_OPS[kind][1]
    if bounds is None:
        return None
    if magnitude is None:
        raise InvalidInputError(f"{kind} needs a magnitude")
    lo, hi = bounds
    if not lo <= magnitude <= hi:
        raise InvalidRangeError(f"{kind} magnitude {magnitude} outside [{lo}, {hi}]")
    if kind == "posterize" and magnitude != int(magnitude):
        raise InvalidRangeError("posterize magnitude is a bit count and must be an integer")
    return magnitude


def point_op(img: Image, kind: str, magnitude=None) -> Image:
    """Apply one named point operation; ``magnitude`` is validated per kind."""
    magnitude = check_magnitude(kind, magnitude)
    fn = POINT_OPS[kind][0]
    return fn(img) if magnitude is None else fn(img, magnitude)


@augmentation("point_op", POINT)
def _point_op_stage(img, stream=None, kind="invert", magnitude=None):
    return point_op(img, kind, magnitude), {"kind": kind, "magnitude": magnitude}


