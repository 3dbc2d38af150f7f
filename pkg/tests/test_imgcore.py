import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from augdoe.errors import InvalidInputError, InvalidRangeError
from augdoe.imgcore import (
    Image,
    RngStream,
    convert_colorspace,
    derive_stream,
    read_image,
    resize_bilinear,
    rng_uniform,
    sample_bilinear,
    warp,
    write_image,
)
from augdoe.imgcore.color import hsv_to_rgb, rgb_to_hls, hls_to_rgb, rgb_to_hsv
from augdoe.imgcore.image import to_uint8
from augdoe.imgcore.rng import hash_labels, mix64

import oracles
from conftest import random_image


# Image


def test_image_fields_and_samples():
    img = Image.from_samples(3, 2, 3, range(18))
    assert (img.width, img.height, img.channels) == (3, 2, 3)
    assert list(img.samples) == list(range(18))
    assert img.pixels[1, 0].tolist() == [9, 10, 11]


@pytest.mark.parametrize(
    "bad",
    [np.zeros((0, 3, 3)), np.zeros((2, 2, 2)), np.full((2, 2), 256.0), np.full((2, 2), -1), np.full((2, 2), 1.5)],
)
def test_image_rejects_invalid(bad):
    with pytest.raises(InvalidInputError):
        Image(bad)


def test_from_samples_length_checked():
    with pytest.raises(InvalidInputError):
        Image.from_samples(2, 2, 3, bytes(11))


def test_image_is_read_only():
    img = Image.constant(2, 2, 9)
    with pytest.raises(ValueError):
        img.pixels[0, 0, 0] = 1


def test_to_uint8_rounds_half_up_and_clips():
    assert to_uint8(np.array([0.5, 1.49, 2.5, -3, 300, 254.5])).tolist() == [1, 1, 3, 0, 255, 255]


# rng


def test_mix64_reference_value():
    # SplitMix64 seeded with 0: first output 0xe220a8397b1dcdaf
    assert mix64(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF


def test_stream_reproducible_and_counter_based():
    a = RngStream(5, 9)
    first = a.next_u64(10)
    b = RngStream(5, 9)
    assert np.array_equal(first, b.next_u64(10))
    # position addressing: resuming at counter 4 gives words 4..9
    c = RngStream(5, 9, counter=4)
    assert np.array_equal(c.next_u64(6), first[4:])


def test_distinct_streams_differ():
    words = {tuple(derive_stream(1, i, s).next_u64(4)) for i in range(20) for s in range(5)}
    assert len(words) == 100


def test_hash_labels_order_sensitive():
    assert hash_labels(1, 2) != hash_labels(2, 1)
    assert hash_labels(3) != hash_labels(3, 0)


def test_copy_snapshots_position():
    s = RngStream(3)
    s.random(5)
    snap = s.copy()
    assert s.random() == snap.random()


def test_rng_uniform_degenerate():
    assert rng_uniform(RngStream(0), 0.3, 0.3) == 0.3


def test_rng_uniform_rejects_reversed():
    with pytest.raises(InvalidRangeError):
        rng_uniform(RngStream(0), 1.0, 0.0)


def test_uniform_rebuilt_stream_identical():
    s1, s2 = derive_stream(11, 2), derive_stream(11, 2)
    assert [rng_uniform(s1, -2, 5) for _ in range(50)] == [rng_uniform(s2, -2, 5) for _ in range(50)]


def test_uniform_mean_law_of_large_numbers():
    u = RngStream(2023).uniform(0.0, 1.0, size=10**6)
    assert abs(u.mean() - 0.5) < 0.002
    assert u.min() >= 0.0 and u.max() < 1.0


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**64 - 1), st.floats(-1e6, 1e6), st.floats(0, 1e6))
def test_uniform_in_half_open_interval(seed, lo, width):
    hi = lo + width
    v = RngStream(seed).uniform(lo, hi, size=8)
    if width == 0 or hi == lo:
        assert np.all(v == lo)
    else:
        assert np.all((v >= lo) & (v < hi))


def test_integers_uniform_and_bounded():
    v = RngStream(8).integers(3, 9, size=60000)
    assert v.min() == 3 and v.max() == 8
    counts = np.bincount(v - 3)
    assert np.all(np.abs(counts / 60000 - 1 / 6) < 0.01)


def test_normal_moments():
    z = RngStream(4).normal(200000)
    assert abs(z.mean()) < 0.01 and abs(z.std() - 1) < 0.01


def test_permutation_is_permutation():
    p = RngStream(6).permutation(50)
    assert sorted(p.tolist()) == list(range(50))


def test_bernoulli_extremes():
    s = RngStream(1)
    assert not any(s.bernoulli(0.0) for _ in range(100))
    assert all(s.bernoulli(1.0) for _ in range(100))


# color


def test_gray_of_pure_red():
    assert convert_colorspace(Image.constant(1, 1, (255, 0, 0)), "gray").pixels.ravel().tolist() == [76]


def test_gray_to_gray_identity():
    g = random_image(1, c=1)
    assert convert_colorspace(g, "gray") == g


def test_gray_against_float_formula():
    img = random_image(2, 40, 30)
    p = img.pixels.astype(np.float64)
    ref = np.floor(0.299 * p[..., 0] + 0.587 * p[..., 1] + 0.114 * p[..., 2] + 0.5)
    out = convert_colorspace(img, "gray").pixels[..., 0]
    # float evaluation of the weights can sit a hair below a .5 boundary
    assert np.abs(out - ref).max() <= 1
    assert np.mean(out == ref) > 0.99


def test_colorspace_channel_mismatch():
    with pytest.raises(InvalidInputError):
        convert_colorspace(random_image(0, c=1), "hsv", source="rgb")
    with pytest.raises(InvalidInputError):
        convert_colorspace(random_image(0), "gray", source="gray")


def _rgb_hsv_rgb_deviation(n, seed):
    img = Image(np.random.default_rng(seed).integers(0, 256, (1, n, 3), dtype=np.uint8))
    back = convert_colorspace(convert_colorspace(img, "hsv"), "rgb", source="hsv")
    return int(np.abs(back.pixels.astype(int) - img.pixels.astype(int)).max())


@pytest.mark.xfail(strict=True, reason="8-bit hue (256 steps) cannot round-trip saturated colors within 1")
def test_hsv8_round_trip_within_one():
    assert _rgb_hsv_rgb_deviation(1000, 0) <= 1


def test_hsv8_round_trip_derived_bound():
    # hue step 360/256 deg moves the middle channel by up to 255*6/256/2 ~ 3
    assert _rgb_hsv_rgb_deviation(1000, 0) <= 3


def test_hsv_float_round_trip_within_one():
    rgb = np.random.default_rng(0).integers(0, 256, (1000, 3)).astype(np.float64)
    back = to_uint8(hsv_to_rgb(rgb_to_hsv(rgb)))
    assert np.abs(back - rgb).max() <= 1
    back = to_uint8(hls_to_rgb(rgb_to_hls(rgb)))
    assert np.abs(back - rgb).max() <= 1


def test_hsv_known_values():
    hsv = rgb_to_hsv(np.array([[255, 0, 0], [0, 255, 0], [0, 0, 255], [128, 128, 128]], dtype=float))
    assert np.allclose(hsv[:, 0], [0, 120, 240, 0])
    assert np.allclose(hsv[:, 1], [1, 1, 1, 0])
    assert np.allclose(hsv[:, 2], [255, 255, 255, 128])


# sampling


def test_sample_integer_lattice_exact(backend):
    img = random_image(3, 6, 5)
    assert sample_bilinear(img, 2.0, 3.0).tolist() == img.pixels[3, 2].tolist()


def test_sample_constant_any_coordinate(backend):
    img = Image.constant(5, 4, 127)
    for x, y in [(-3.7, 2.2), (10.1, -8.9), (1.5, 1.5), (4.99, 3.01)]:
        assert sample_bilinear(img, x, y).tolist() == [127, 127, 127]


def test_sample_checkerboard_midpoint(backend):
    img = Image(np.array([[0, 255], [255, 0]], dtype=np.uint8))
    # mean of 0,255,255,0 is 127.5, rounded half up
    assert sample_bilinear(img, 0.5, 0.5).tolist() == [128]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 1000), st.floats(-20, 40), st.floats(-20, 40))
def test_sample_matches_naive_oracle(seed, x, y):
    img = random_image(seed, 7, 5)
    assert sample_bilinear(img, x, y).tolist() == oracles.bilinear(img.pixels, x, y)


def test_sample_is_convex_combination(backend):
    img = random_image(9, 8, 8)
    rng = np.random.default_rng(0)
    for x, y in rng.uniform(0, 7, (200, 2)):
        x0, y0 = int(math.floor(x)), int(math.floor(y))
        block = img.pixels[y0 : y0 + 2, x0 : x0 + 2].reshape(-1, 3)
        v = sample_bilinear(img, x, y)
        assert np.all(v >= block.min(axis=0)) and np.all(v <= block.max(axis=0))


def test_warp_identity_map(backend):
    img = random_image(4)
    ys, xs = np.mgrid[0 : img.height, 0 : img.width].astype(float)
    assert warp(img, xs, ys) == img


def test_resize_constant_and_identity(backend):
    c = Image.constant(13, 7, (10, 200, 33))
    r = resize_bilinear(c, 29, 4)
    assert r.shape == (4, 29, 3) and np.all(r.pixels == np.array([10, 200, 33], dtype=np.uint8))
    img = random_image(5)
    assert resize_bilinear(img, img.width, img.height) == img


def test_resize_double_size_reference(backend):
    img = Image(np.array([[0, 100], [200, 50]], dtype=np.uint8))
    out = resize_bilinear(img, 4, 4).pixels[..., 0]
    # pixel-centre mapping: output j samples source x = (j + 0.5)/2 - 0.5
    coords = [(j + 0.5) / 2 - 0.5 for j in range(4)]
    ref = [[oracles.bilinear(img.pixels, x, y)[0] for x in coords] for y in coords]
    assert out.tolist() == ref


def test_determinism_twice_identical(backend):
    img = random_image(6)
    m = np.random.default_rng(1).uniform(-5, 30, (2, 18, 24))
    assert warp(img, m[0], m[1]) == warp(img, m[0], m[1])


# io


@pytest.mark.parametrize("suffix,channels", [(".png", 3), (".png", 1), (".ppm", 3), (".pgm", 1)])
def test_io_round_trip(tmp_path, suffix, channels):
    img = random_image(7, c=channels)
    path = tmp_path / f"x{suffix}"
    write_image(img, path)
    assert read_image(path) == img


def test_io_rejects_unknown_suffix(tmp_path):
    with pytest.raises(InvalidInputError):
        write_image(random_image(0), tmp_path / "x.jpg")


def test_io_unreadable(tmp_path):
    p = tmp_path / "broken.png"
    p.write_bytes(b"not an image")
    with pytest.raises(InvalidInputError):
        read_image(p)
