import numpy as np
import pytest

from augdoe.augment import fog, rain, snow, sun_flare, weather
from augdoe.errors import InvalidInputError
from augdoe.imgcore import Image, RngStream
from augdoe.imgcore.color import gray_float, rgb_to_hls

from conftest import SEEDS, random_image


def test_fog_zero_coef_identity():
    img = random_image(0)
    assert fog(img, RngStream(1), coef=0) == img


def test_fog_moves_toward_white():
    img = Image.constant(64, 48, (40, 80, 120))
    out, rec = fog.traced(img, RngStream(2), coef=1.0)
    assert np.all(out.pixels >= img.pixels)
    assert out != img and rec["alpha"] == pytest.approx(0.08)


def test_rain_darkens_constant_fixture(backend):
    img = Image.constant(96, 64, 200)
    out, rec = rain.traced(img, RngStream(3))
    assert rec["drops"] == int(96 * 64 / 600) and -10 <= rec["slant"] <= 10
    assert gray_float(out.pixels.astype(float)).mean() < 200


def test_rain_streaks_visible_without_darkening(backend):
    img = Image.constant(96, 64, 50)
    out = rain(img, RngStream(4), brightness=1.0, blur=1)
    assert out.pixels.max() == 200


def test_snow_brightens_only_dark_pixels():
    img = random_image(5, 40, 30)
    out, rec = snow.traced(img, RngStream(6))
    light = rgb_to_hls(img.pixels)[..., 1]
    bright = light >= rec["threshold"]
    assert np.array_equal(out.pixels[bright], img.pixels[bright])
    dark = ~bright & (light > 0)
    assert np.all(rgb_to_hls(out.pixels)[..., 1][dark] >= light[dark] - 1)
    assert 0.1 <= rec["snow_point"] <= 0.3


@pytest.mark.parametrize("seed", SEEDS)
def test_sun_flare_locality(seed):
    img = random_image(seed, 48, 36)
    out, rec = sun_flare.traced(img, RngStream(seed))
    touched = np.zeros((36, 48), dtype=bool)
    for d in rec["discs"]:
        x0, x1 = int(np.floor(d["x"] - d["radius"])), int(np.ceil(d["x"] + d["radius"]))
        y0, y1 = int(np.floor(d["y"] - d["radius"])), int(np.ceil(d["y"] + d["radius"]))
        touched[max(y0, 0) : max(y1 + 1, 0), max(x0, 0) : max(x1 + 1, 0)] = True
    assert np.array_equal(out.pixels[~touched], img.pixels[~touched])
    assert np.all(out.pixels >= img.pixels)
    src_x, src_y = rec["source"]
    assert 0 <= src_x <= 48 and 0 <= src_y <= 18


def test_weather_dispatch_and_unknown_kind():
    img = random_image(7)
    assert weather(img, RngStream(1), kind="fog") == fog(img, RngStream(1))
    with pytest.raises(InvalidInputError):
        weather(img, RngStream(1), kind="hail")


@pytest.mark.parametrize("kind", ["fog", "rain", "snow", "sun_flare"])
def test_weather_needs_rgb(kind):
    with pytest.raises(InvalidInputError):
        weather(random_image(0, c=1), RngStream(0), kind=kind)
