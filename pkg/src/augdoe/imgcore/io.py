"""PNG / binary PPM (P6) / PGM (P5) reading and writing through Pillow."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image as PILImage

from augdoe.errors import InvalidInputError
from augdoe.imgcore.image import Image

IMAGE_SUFFIXES = (".png", ".ppm", ".pgm")


def read_image(path) -> Image:
    path = Path(path)
    try:
        with PILImage.open(path) as pil:
            pil.load()
            if pil.mode in ("I;16", "I;16B", "I", "F"):
                raise InvalidInputError(f"{path}: only 8-bit images are supported (mode {pil.mode})")
            elif pil.mode in ("1", "L"):
                arr = np.asarray(pil.convert("L"))
            else:
                arr = np.asarray(pil.convert("RGB"))
    except OSError as exc:
        raise InvalidInputError(f"cannot read image {path}: {exc}") from exc
    return Image(arr)


def write_image(img: Image, path) -> None:
    path = Path(path)
    if path.suffix.lower() not in IMAGE_SUFFIXES:
        raise InvalidInputError(f"unsupported image suffix {path.suffix!r}; use one of {IMAGE_SUFFIXES}")
    if path.suffix.lower() == ".pgm" and img.channels != 1:
        raise InvalidInputError("PGM output needs a 1-channel image")
    arr = img.pixels[:, :, 0] if img.channels == 1 else img.pixels
    pil = PILImage.fromarray(arr, mode="L" if img.channels == 1 else "RGB")
    # no timestamps or other metadata, so identical pixels give identical files
    pil.save(path)


def read_label_map(path) -> np.ndarray:
    """Single-channel 8-bit label map as a (h, w) uint8 array."""
    path = Path(path)
    try:
        with PILImage.open(path) as pil:
            if pil.mode not in ("L", "P"):
                raise InvalidInputError(f"{path}: label maps must be single-channel 8-bit, got mode {pil.mode}")
            return np.array(pil)
    except OSError as exc:
        raise InvalidInputError(f"cannot read label map {path}: {exc}") from exc
