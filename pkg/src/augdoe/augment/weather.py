"""Synthetic fog, rain, snow and sun flare."""

from __future__ import annotations

import math

import numpy as np

from augdoe import kernels
from augdoe.augment.registry import WEATHER, as_range, augmentation, draw_int, require_stream
from augdoe.errors import InvalidInputError
from augdoe.imgcore.color import hls_to_rgb, rgb_to_hls
from augdoe.imgcore.image import Image, to_uint8


def _need_rgb(img, kind):
    if img.channels != 3:
        raise InvalidInputError(f"{kind} needs a 3-channel image, got {img.channels}")


def _disc_mask(h, w, cx, cy, r):
    ys, xs = np.ogrid[0:h, 0:w]
    return (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r


@augmentation("fog", WEATHER)
def fog(img, stream, coef=(0.3, 1.0), alpha_coef=0.08):
    """Blend circular haze blobs toward white; blob opacity is ``alpha_coef * coef``."""
    _need_rgb(img, "fog")
    coef = as_range(coef, "coef", 0.0, 1.0)
    stream = require_stream(stream, "fog")
    c = stream.uniform(*coef)
    h, w = img.height, img.width
    alpha = alpha_coef * c
    radius = max(int(min(h, w) * max(c, 0.1) / 6), 1)
    n = 8 + int(24 * c)
    centers = [(stream.integers(0, w), stream.integers(0, h)) for _ in range(n)]
    out = img.pixels.astype(np.float64)
    for cx, cy in centers:
        m = _disc_mask(h, w, cx, cy, radius)
        out[m] = out[m] * (1.0 - alpha) + 255.0 * alpha
    return Image(to_uint8(out)), {"coef": c, "alpha": alpha, "radius": radius, "centers": centers}


def _box_kernel(size):
    return np.full(size, 1.0 / size)


@augmentation("rain", WEATHER)
def rain(
    img,
    stream,
    slant=(-10.0, 10.0),
    length=20,
    color=(200, 200, 200),
    blur=7,
    brightness=0.7,
    density=1 / 600,
):
    """Draw slanted 1-px streaks, box-blur, then darken by ``brightness``.

    ``slant`` is in degrees from vertical; one streak per ``1/density`` pixels.
    """
    _need_rgb(img, "rain")
    slant = as_range(slant, "slant", -90.0, 90.0)
    stream = require_stream(stream, "rain")
    angle = stream.uniform(*slant)
    h, w = img.height, img.width
    n = int(h * w * density)
    xs = stream.integers(0, w, size=n) if n else np.zeros(0, dtype=np.int64)
    ys = stream.integers(0, max(h - length, 1), size=n) if n else np.zeros(0, dtype=np.int64)
    out = img.pixels.astype(np.float64)
    if n:
        t = np.arange(length + 1, dtype=np.float64)
        rad = math.radians(angle)
        px = np.floor(xs[:, None] + t[None, :] * math.sin(rad) + 0.5).astype(np.int64)
        py = np.floor(ys[:, None] + t[None, :] * math.cos(rad) + 0.5).astype(np.int64)
        ok = (px >= 0) & (px < w) & (py >= 0) & (py < h)
        out[py[ok], px[ok]] = np.asarray(color, dtype=np.float64)
    if blur > 1:
        k = _box_kernel(int(blur))
        out = kernels.convolve_separable(out, k, k)
    return Image(to_uint8(out * brightness)), {"slant": angle, "drops": n}


@augmentation("snow", WEATHER)
def snow(img, stream, snow_point=(0.1, 0.3), brightness=2.5):
    """Multiply the HLS lightness of dark-enough pixels by ``brightness``.

    A pixel is brightened when its lightness is below
    ``snow_point * 255 / 2 + 255 / 3``.
    """
    _need_rgb(img, "snow")
    snow_point = as_range(snow_point, "snow_point", 0.0, 1.0)
    stream = require_stream(stream, "snow")
    sp = stream.uniform(*snow_point)
    threshold = sp * 255.0 / 2.0 + 255.0 / 3.0
    hls = rgb_to_hls(img.pixels)
    light = hls[..., 1]
    mask = light < threshold
    hls[..., 1] = np.where(mask, np.minimum(light * brightness, 255.0), light)
    out = np.where(mask[..., None], hls_to_rgb(hls), img.pixels.astype(np.float64))
    return Image(to_uint8(out)), {"snow_point": sp, "threshold": threshold, "pixels": int(mask.sum())}


@augmentation("sun_flare", WEATHER)
def sun_flare(img, stream, roi=(0.0, 0.0, 1.0, 0.5), angle=(0.0, 1.0), circles=(6, 10), radius=None, alpha=(0.3, 0.6),
              decay=0.8):
    """Add white discs of geometrically decaying radius and opacity along a ray.

    The flare source lies in ``roi = (x0, y0, x1, y1)`` (fractions of the
    image, upper half by default); ``angle`` is the ray direction as a
    fraction of a full turn. Pixels outside every disc are untouched.
    """
    _need_rgb(img, "sun_flare")
    x0, y0, x1, y1 = (float(v) for v in roi)
    if not (0 <= x0 <= x1 <= 1 and 0 <= y0 <= y1 <= 1):
        raise InvalidInputError(f"roi must satisfy 0 <= x0 <= x1 <= 1 and 0 <= y0 <= y1 <= 1, got {roi!r}")
    angle = as_range(angle, "angle", 0.0, 1.0)
    circles = as_range(circles, "circles", 1)
    alpha = as_range(alpha, "alpha", 0.0, 1.0)
    stream = require_stream(stream, "sun_flare")
    h, w = img.height, img.width
    cx = stream.uniform(x0, x1) * w
    cy = stream.uniform(y0, y1) * h
    theta = 2.0 * math.pi * stream.uniform(*angle)
    n = draw_int(stream, circles)
    a0 = stream.uniform(*alpha)
    r0 = float(radius) if radius is not None else max(min(h, w) / 8.0, 2.0)
    out = img.pixels.astype(np.float64)
    discs = []
    dist = 0.0
    for k in range(n):
        r = r0 * decay**k
        a = a0 * decay**k
        dx, dy = cx + dist * math.cos(theta), cy + dist * math.sin(theta)
        m = _disc_mask(h, w, dx, dy, r)
        out[m] += 255.0 * a
        discs.append({"x": dx, "y": dy, "radius": r, "alpha": a})
        dist += r + r * decay
    return Image(to_uint8(out)), {"source": [cx, cy], "angle": theta, "discs": discs}


WEATHER_KINDS = {"fog": fog, "rain": rain, "snow": snow, "sun_flare": sun_flare}


@augmentation("weather", WEATHER)
def weather(img, stream, kind="fog", **params):
    if kind not in WEATHER_KINDS:
        raise InvalidInputError(f"unknown weather kind {kind!r}; expected one of {sorted(WEATHER_KINDS)}")
    out, record = WEATHER_KINDS[kind].traced(img, stream, **params)
    return out, {"kind": kind, **record}
