"""Color-space conversions.

Float helpers work on real-valued arrays with channels last and are what
the augmentation kernels use internally. :func:`convert_colorspace` is the
8-bit image-level entry point; its HSV encoding stores hue on a 256-step
circle (byte ``H`` means ``H * 360 / 256`` degrees).
"""

from __future__ import annotations

import numpy as np

from augdoe.errors import InvalidInputError
from augdoe.imgcore.image import Image, to_uint8

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def gray_u8(rgb: np.ndarray) -> np.ndarray:
    """Luminance of ``uint8`` RGB, rounded half up with exact integer math."""
    rgb = rgb.astype(np.int64)
    return ((299 * rgb[..., 0] + 587 * rgb[..., 1] + 114 * rgb[..., 2] + 500) // 1000).astype(np.uint8)


def gray_float(rgb: np.ndarray) -> np.ndarray:
    return 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]


def rgb_to_hsv(rgb: np.ndarray) -> np.ndarray:
    """RGB in [0, 255] to (hue degrees in [0, 360), saturation in [0, 1], value in [0, 255])."""
    rgb = np.asarray(rgb, dtype=np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    v = np.max(rgb, axis=-1)
    c = v - np.min(rgb, axis=-1)
    safe_c = np.where(c > 0, c, 1.0)
    s = np.where(v > 0, c / np.where(v > 0, v, 1.0), 0.0)
    h = np.select(
        [c == 0, v == r, v == g],
        [0.0, ((g - b) / safe_c) % 6.0, (b - r) / safe_c + 2.0],
        (r - g) / safe_c + 4.0,
    )
    h = (h * 60.0) % 360.0
    return np.stack([h, s, v], axis=-1)


def hsv_to_rgb(hsv: np.ndarray) -> np.ndarray:
    hsv = np.asarray(hsv, dtype=np.float64)
    h, s, v = hsv[..., 0] % 360.0, hsv[..., 1], hsv[..., 2]
    c = v * s
    hp = h / 60.0
    x = c * (1.0 - np.abs(hp % 2.0 - 1.0))
    m = v - c
    sector = np.minimum(np.floor(hp).astype(np.int64), 5)
    zeros = np.zeros_like(c)
    # (r, g, b) before adding m, per 60-degree sector
    table = np.stack(
        [
            np.stack([c, x, zeros], -1),
            np.stack([x, c, zeros], -1),
            np.stack([zeros, c, x], -1),
            np.stack([zeros, x, c], -1),
            np.stack([x, zeros, c], -1),
            np.stack([c, zeros, x], -1),
        ]
    )
    rgb = np.take_along_axis(table, sector[None, ..., None], axis=0)[0]
    return rgb + m[..., None]


def rgb_to_hls(rgb: np.ndarray) -> np.ndarray:
    """RGB in [0, 255] to (hue degrees, lightness in [0, 255], saturation in [0, 1])."""
    rgb = np.asarray(rgb, dtype=np.float64)
    hue = rgb_to_hsv(rgb)[..., 0]
    mx = np.max(rgb, axis=-1)
    mn = np.min(rgb, axis=-1)
    light = (mx + mn) / 2.0
    c = mx - mn
    denom = 255.0 - np.abs(2.0 * light - 255.0)
    sat = np.where(denom > 0, c / np.where(denom > 0, denom, 1.0), 0.0)
    return np.stack([hue, light, np.minimum(sat, 1.0)], axis=-1)


def hls_to_rgb(hls: np.ndarray) -> np.ndarray:
    hls = np.asarray(hls, dtype=np.float64)
    h, light, s = hls[..., 0], hls[..., 1], hls[..., 2]
    c = (255.0 - np.abs(2.0 * light - 255.0)) * s
    v = light + c / 2.0
    sv = np.where(v > 0, c / np.where(v > 0, v, 1.0), 0.0)
    return hsv_to_rgb(np.stack([h, sv, v], axis=-1))


def _encode_hsv(hsv: np.ndarray) -> np.ndarray:
    h = np.floor(hsv[..., 0] * 256.0 / 360.0 + 0.5) % 256
    s = np.floor(hsv[..., 1] * 255.0 + 0.5)
    return np.stack([h, s, hsv[..., 2]], axis=-1).astype(np.uint8)


def _decode_hsv(arr: np.ndarray) -> np.ndarray:
    a = arr.astype(np.float64)
    return np.stack([a[..., 0] * 360.0 / 256.0, a[..., 1] / 255.0, a[..., 2]], axis=-1)


def convert_colorspace(img: Image, target: str, source: str | None = None) -> Image:
    """Convert between ``gray``, ``rgb`` and 8-bit ``hsv``.

    ``source`` defaults to ``gray`` for 1-channel and ``rgb`` for 3-channel
    images; pass ``source="hsv"`` to decode an HSV-encoded image.
    """
    if target not in ("gray", "rgb", "hsv"):
        raise InvalidInputError(f"unknown color space {target!r}")
    if source is None:
        source = "gray" if img.channels == 1 else "rgb"
    if source not in ("gray", "rgb", "hsv"):
        raise InvalidInputError(f"unknown color space {source!r}")
    expected = 1 if source == "gray" else 3
    if img.channels != expected:
        raise InvalidInputError(f"{source} input needs {expected} channel(s), got {img.channels}")
    if source == target:
        return img

    px = img.pixels
    if source == "hsv":
        rgb = to_uint8(hsv_to_rgb(_decode_hsv(px)))
    elif source == "gray":
        rgb = np.repeat(px, 3, axis=2)
    else:
        rgb = px

    if target == "rgb":
        return Image(rgb)
    if target == "gray":
        return Image(px if source == "gray" else gray_u8(rgb)[..., None])
    return Image(_encode_hsv(rgb_to_hsv(rgb)))
