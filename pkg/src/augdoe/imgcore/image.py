"""The 8-bit raster that every augmentation consumes and produces."""

from __future__ import annotations

import numpy as np

from augdoe.errors import InvalidInputError


class Image:
    """An 8-bit image with 1 or 3 channels.

    Pixels are held as a C-contiguous ``uint8`` array of shape
    ``(height, width, channels)``, which is the row-major sample order.
    Instances are treated as immutable: operations return new images and
    never write into ``pixels`` of their input.
    """

    __slots__ = ("pixels",)

    def __init__(self, pixels):
        arr = np.asarray(pixels)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3:
            raise InvalidInputError(f"expected a (h, w) or (h, w, c) array, got shape {arr.shape}")
        h, w, c = arr.shape
        if h < 1 or w < 1:
            raise InvalidInputError(f"image must be at least 1x1, got {w}x{h}")
        if c not in (1, 3):
            raise InvalidInputError(f"image must have 1 or 3 channels, got {c}")
        if arr.dtype != np.uint8:
            if arr.size and (not np.all(np.isfinite(arr)) or arr.min() < 0 or arr.max() > 255):
                raise InvalidInputError("sample values must lie in [0, 255]")
            if np.issubdtype(arr.dtype, np.floating) and not np.array_equal(arr, np.round(arr)):
                raise InvalidInputError("float samples must be integral; round before constructing")
            arr = arr.astype(np.uint8)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.pixels = arr

    @classmethod
    def from_samples(cls, width: int, height: int, channels: int, samples) -> Image:
        """Build an image from a flat row-major sample sequence."""
        data = np.frombuffer(bytes(samples), dtype=np.uint8) if isinstance(samples, (bytes, bytearray)) \
            else np.asarray(samples)
        if data.size != width * height * channels:
            raise InvalidInputError(
                f"expected {width * height * channels} samples for {width}x{height}x{channels}, got {data.size}"
            )
        return cls(data.reshape(height, width, channels))

    @classmethod
    def constant(cls, width: int, height: int, value, channels: int = 3) -> Image:
        value = np.broadcast_to(np.asarray(value, dtype=np.uint8), (channels,))
        return cls(np.broadcast_to(value, (height, width, channels)).copy())

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.pixels.shape

    @property
    def samples(self) -> bytes:
        return self.pixels.tobytes()

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.pixels
        return self.pixels.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and np.array_equal(self.pixels, other.pixels)

    __hash__ = None

    def __repr__(self):
        return f"Image(width={self.width}, height={self.height}, channels={self.channels})"


def to_uint8(values) -> np.ndarray:
    """Round half up and clamp real-valued samples to ``uint8``."""
    return np.clip(np.floor(np.asarray(values, dtype=np.float64) + 0.5), 0, 255).astype(np.uint8)


def as_float(img: Image) -> np.ndarray:
    return img.pixels.astype(np.float64)
