"""Image buffer, random streams, color conversion and resampling."""

from augdoe.imgcore.color import convert_colorspace
from augdoe.imgcore.image import Image, to_uint8
from augdoe.imgcore.io import read_image, read_label_map, write_image
from augdoe.imgcore.rng import RngStream, derive_stream, hash_labels, rng_uniform
from augdoe.imgcore.sampling import affine_warp, resize_bilinear, sample_bilinear, warp

__all__ = [
    "Image",
    "RngStream",
    "affine_warp",
    "convert_colorspace",
    "derive_stream",
    "hash_labels",
    "read_image",
    "read_label_map",
    "resize_bilinear",
    "rng_uniform",
    "sample_bilinear",
    "to_uint8",
    "warp",
    "write_image",
]
