"""Deterministic image augmentation and two-level factorial analysis toolkit."""

from augdoe.errors import (
    AugDoeError,
    InsufficientDataError,
    InvalidInputError,
    InvalidRangeError,
    SingularDesignError,
    UndefinedMetricError,
)
from augdoe.imgcore import Image, RngStream, derive_stream

__version__ = "0.1.0"

__all__ = [
    "AugDoeError",
    "Image",
    "InsufficientDataError",
    "InvalidInputError",
    "InvalidRangeError",
    "RngStream",
    "SingularDesignError",
    "UndefinedMetricError",
    "derive_stream",
]
