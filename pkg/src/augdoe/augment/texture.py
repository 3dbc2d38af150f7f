"""Gaussian blur, Gaussian noise and the Canny edge augmentation."""

from __future__ import annotations

import math

import numpy as np

from augdoe import kernels
from augdoe.augment.geometric import gaussian_kernel
from augdoe.augment.registry import TEXTURE, as_range, augmentation, require_stream
from augdoe.errors import InvalidInputError
from augdoe.imgcore.color import gray_u8
from augdoe.imgcore.image import Image, to_uint8

SOBEL_DIFF = np.array([-1.0, 0.0, 1.0])
SOBEL_SMOOTH = np.array([1.0, 2.0, 1.0])


def blur_sigma(ksize: int) -> float:
    """Sigma used for a ``ksize``-tap Gaussian when none is given."""
    return 0.3 * ((ksize - 1) / 2.0 - 1.0) + 0.8


def blur_kernel(ksize: int, sigma: float | None = None) -> np.ndarray:
    if ksize < 1 or ksize % 2 == 0:
        raise InvalidInputError(f"kernel size must be odd and positive, got {ksize}")
    return gaussian_kernel(blur_sigma(ksize) if sigma is None else sigma, radius=ksize // 2)


def gaussian_blur_fixed(img: Image, ksize: int, sigma: float | None = None) -> Image:
    k = blur_kernel(ksize, sigma)
    return Image(to_uint8(kernels.convolve_separable(img.pixels.astype(np.float64), k, k)))


@augmentation("gaussian_blur", TEXTURE)
def gaussian_blur(img, stream, kernel=(3, 7), sigma=None):
    """Blur with an odd kernel size drawn uniformly from the odd values in ``kernel``."""
    lo, hi = as_range(kernel, "kernel", 1)
    sizes = [k for k in range(int(lo), int(hi) + 1) if k % 2 == 1]
    if not sizes:
        raise InvalidInputError(f"kernel range {kernel!r} holds no odd size")
    stream = require_stream(stream, "gaussian_blur")
    k = sizes[stream.integers(0, len(sizes))]
    return gaussian_blur_fixed(img, k, sigma), {"kernel": k, "sigma": blur_sigma(k) if sigma is None else sigma}


@augmentation("gaussian_noise", TEXTURE)
def gaussian_noise(img, stream, var=(10.0, 50.0), mean=0.0):
    """Add independent ``N(mean, var)`` noise to every sample (8-bit scale)."""
    var = as_range(var, "var", 0.0)
    stream = require_stream(stream, "gaussian_noise")
    v = stream.uniform(*var)
    noise = stream.normal(img.shape) * math.sqrt(v) + mean
    return Image(to_uint8(img.pixels.astype(np.float64) + noise)), {"var": v}


def canny_stages(lum: np.ndarray, low: float, high: float, sigma: float) -> dict:
    """Intermediate arrays of the edge detector for a (h, w) luminance channel."""
    src = lum.astype(np.float64)[:, :, None]
    if sigma > 0:
        k = gaussian_kernel(sigma)
        src = kernels.convolve_separable(src, k, k)
    gx = kernels.convolve_separable(src, SOBEL_DIFF, SOBEL_SMOOTH)[:, :, 0]
    gy = kernels.convolve_separable(src, SOBEL_SMOOTH, SOBEL_DIFF)[:, :, 0]
    mag = np.sqrt(gx * gx + gy * gy)
    nms = kernels.canny_nms(gx, gy, mag)
    edges = kernels.hysteresis(nms, float(low), float(high))
    return {"smoothed": src[:, :, 0], "gx": gx, "gy": gy, "magnitude": mag, "nms": nms, "edges": edges}


def canny_fixed(img: Image, low: float = 100.0, high: float = 200.0, sigma: float = 1.4) -> Image:
    if low > high:
        raise InvalidInputError(f"low threshold {low} exceeds high threshold {high}")
    lum = img.pixels[:, :, 0] if img.channels == 1 else gray_u8(img.pixels)
    edges = canny_stages(lum, low, high, sigma)["edges"]
    return Image(np.repeat(edges[..., None], img.channels, axis=2))


@augmentation("canny_edge", TEXTURE)
def canny_edge(img, stream=None, low=100.0, high=200.0, sigma=1.4):
    """Replace the image with its binary (0/255) Canny edge map."""
    return canny_fixed(img, low, high, sigma), {}
