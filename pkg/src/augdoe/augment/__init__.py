"""Augmentation catalog, AutoAugment policy execution and seeded pipelines."""

from augdoe.augment.color import brightness_contrast, clahe, color_jitter, grayscale
from augdoe.augment.geometric import (
    crop_random,
    crop_resized_random,
    cutout,
    elastic_transform,
    flip_horizontal,
    flip_vertical,
    shift_scale_rotate,
)
from augdoe.augment.pipeline import AugSpec, Pipeline, apply_pipeline, load_pipeline, run_pipeline
from augdoe.augment.pointops import point_op
from augdoe.augment.policy import Policy, PolicyOp, apply_policy, imagenet_policy, load_policy
from augdoe.augment.registry import kinds
from augdoe.augment.texture import canny_edge, gaussian_blur, gaussian_noise
from augdoe.augment.weather import fog, rain, snow, sun_flare, weather

__all__ = [
    "AugSpec",
    "Pipeline",
    "Policy",
    "PolicyOp",
    "apply_pipeline",
    "apply_policy",
    "brightness_contrast",
    "canny_edge",
    "clahe",
    "color_jitter",
    "crop_random",
    "crop_resized_random",
    "cutout",
    "elastic_transform",
    "flip_horizontal",
    "flip_vertical",
    "fog",
    "gaussian_blur",
    "gaussian_noise",
    "grayscale",
    "imagenet_policy",
    "kinds",
    "load_pipeline",
    "load_policy",
    "point_op",
    "rain",
    "run_pipeline",
    "shift_scale_rotate",
    "snow",
    "sun_flare",
    "weather",
]
