import colorsys
import math

import numpy as np
import pytest

from augdoe.augment import brightness_contrast, clahe, color_jitter, grayscale
from augdoe.augment.color import (
    apply_jitter_sequence,
    brightness_contrast_fixed,
    clahe_fixed,
    clip_histogram,
    equalization_lut,
)
from augdoe.errors import InvalidInputError
from augdoe.imgcore import Image, RngStream, convert_colorspace

import oracles
from conftest import SEEDS, random_image


def color_chart():
    """6 x 8 chart of hues at several saturations and values."""
    rows = []
    for v in (255, 200, 120):
        for s in (1.0, 0.5):
            rows.append([[round(255 * c) for c in colorsys.hsv_to_rgb(h / 8, s, v / 255)] for h in range(8)])
    return Image(np.array(rows, dtype=np.uint8))


# brightness / contrast


def test_bc_zero_identity():
    img = random_image(0)
    assert brightness_contrast_fixed(img, 0.0, 0.0) == img
    assert brightness_contrast(img, RngStream(1), brightness=0, contrast=0) == img


def test_bc_brightness_on_constant():
    assert brightness_contrast_fixed(Image.constant(4, 4, 100), 0.2, 0.0) == Image.constant(4, 4, 151)


@pytest.mark.parametrize("db,dc", [(0.13, -0.07), (-0.2, 0.2), (0.05, 0.19)])
def test_bc_per_pixel_oracle(db, dc):
    img = random_image(1, 16, 12)
    out = brightness_contrast_fixed(img, db, dc).pixels
    for (i, j, c), v in np.ndenumerate(img.pixels):
        assert out[i, j, c] == oracles.round_half_up((int(v) - 127.5) * (1 + dc) + 127.5 + 255 * db)


# color jitter


def test_jitter_neutral_identity():
    img = color_chart()
    out = color_jitter(img, RngStream(3), brightness=0, contrast=0, saturation=0, hue=0)
    assert np.abs(out.pixels.astype(int) - img.pixels.astype(int)).max() <= 1


def test_jitter_zero_saturation_is_grayscale():
    img = color_chart()
    out = color_jitter(img, RngStream(4), brightness=0, contrast=0, saturation=(0, 0), hue=0)
    assert np.abs(out.pixels.astype(int) - grayscale(img).pixels.astype(int)).max() <= 1


def _jitter_reference(px, order, values):
    """Sub-ops written from their definitions, hue through the stdlib colorsys."""
    out = px.astype(np.float64)
    for name in order:
        f = values[name]
        if name == "brightness":
            out = out * f
        elif name == "contrast":
            mean = (0.299 * out[..., 0] + 0.587 * out[..., 1] + 0.114 * out[..., 2]).mean()
            out = mean + f * (out - mean)
        elif name == "saturation":
            g = (0.299 * out[..., 0] + 0.587 * out[..., 1] + 0.114 * out[..., 2])[..., None]
            out = g + f * (out - g)
        else:
            flat = out.reshape(-1, 3)
            res = []
            for r, g, b in flat:
                h, s, v = colorsys.rgb_to_hsv(r / 255, g / 255, b / 255)
                res.append([255 * c for c in colorsys.hsv_to_rgb((h + f) % 1.0, s, v)])
            out = np.array(res).reshape(out.shape)
        out = np.clip(np.floor(out + 0.5), 0, 255)
    return out.astype(np.uint8)


@pytest.mark.parametrize("seed", SEEDS)
def test_jitter_logged_order_reference(seed):
    img = color_chart()
    out, rec = color_jitter.traced(img, RngStream(seed))
    assert sorted(rec["order"]) == ["brightness", "contrast", "hue", "saturation"]
    assert apply_jitter_sequence(img, rec["order"], rec) == out
    ref = _jitter_reference(img.pixels, rec["order"], rec)
    assert np.abs(out.pixels.astype(int) - ref.astype(int)).max() <= 1
    for name in ("brightness", "contrast", "saturation"):
        assert 0.8 <= rec[name] <= 1.2
    assert -0.2 <= rec["hue"] <= 0.2


def test_jitter_needs_rgb():
    with pytest.raises(InvalidInputError):
        color_jitter(random_image(0, c=1), RngStream(0))


# grayscale


def test_grayscale_red_and_idempotent():
    assert grayscale(Image.constant(1, 1, (255, 0, 0))).pixels.ravel().tolist() == [76, 76, 76]
    img = random_image(2)
    g = grayscale(img)
    assert grayscale(g) == g


def test_grayscale_matches_colorspace_gray():
    img = random_image(3, 50, 40)
    g = grayscale(img).pixels
    assert np.array_equal(g[..., 0], g[..., 1]) and np.array_equal(g[..., 1], g[..., 2])
    assert np.array_equal(g[..., :1], convert_colorspace(img, "gray").pixels)


# CLAHE


def test_equalization_lut_single_bin_identity():
    hist = np.zeros(256)
    hist[77] = 10
    assert np.array_equal(equalization_lut(hist), np.arange(256))


def test_clip_histogram_conserves_mass():
    hist = np.random.default_rng(0).integers(0, 50, 256).astype(float)
    clipped = clip_histogram(hist, 20.0)
    assert math.isclose(clipped.sum(), hist.sum())
    assert clipped.max() <= 20.0 + (hist - 20).clip(0).sum() / 256 + 1e-9


@pytest.mark.parametrize("value", [0, 37, 128, 255])
def test_clahe_constant_image(value, backend):
    for img in (Image.constant(40, 30, value, channels=1), Image.constant(40, 30, value)):
        assert clahe_fixed(img, 2.0) == img


@pytest.mark.parametrize("seed", range(4))
def test_clahe_single_tile_unclipped_is_global_equalization(seed, backend):
    rng = np.random.default_rng(seed)
    lum = rng.integers(30, 200, (23, 31), dtype=np.uint8)
    out = clahe_fixed(Image(lum), math.inf, tiles=(1, 1)).pixels[..., 0]
    assert np.array_equal(out, oracles.equalize_channel(lum))


def test_clahe_increases_spread_of_low_contrast(backend):
    rng = np.random.default_rng(5)
    ys, xs = np.mgrid[0:64, 0:64]
    lum = 110 + 20 * (xs / 63) + rng.normal(0, 3, (64, 64))
    base = np.clip(np.round(lum), 0, 255).astype(np.uint8)
    img = Image(np.stack([base, base - 10, base + 10], axis=2))
    out = clahe(img, RngStream(0))
    v_in = img.pixels.max(axis=2).std()
    v_out = out.pixels.max(axis=2).std()
    assert v_out > v_in


def test_clahe_rgb_keeps_hue(backend):
    img = color_chart()
    out = clahe_fixed(img, 3.0, tiles=(2, 2))
    a = img.pixels.astype(float)
    b = out.pixels.astype(float)
    # channel ratios are preserved up to 8-bit rounding
    mask = (a.max(axis=2) > 50) & (b.max(axis=2) > 50)
    ra = a[mask] / a[mask].max(axis=1, keepdims=True)
    rb = b[mask] / b[mask].max(axis=1, keepdims=True)
    assert np.abs(ra - rb).max() < 0.03


def test_clahe_clip_limit_range_logged():
    _, rec = clahe.traced(random_image(1, 32, 32), RngStream(11))
    assert 1.0 <= rec["clip_limit"] <= 4.0
