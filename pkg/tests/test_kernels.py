"""The compiled and numpy kernel backends must agree bit for bit."""

import numpy as np
import pytest

from augdoe import _pykernels, kernels

BACKENDS = kernels.available_backends()
needs_ext = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")


def test_python_backend_always_available():
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


def test_use_rejects_unknown_backend():
    with pytest.raises(ImportError):
        kernels.use("fortran")


def test_reflect_index_reflect101():
    assert _pykernels.reflect_index(np.arange(-3, 8), 4).tolist() == [3, 2, 1, 0, 1, 2, 3, 2, 1, 0, 1]
    assert _pykernels.reflect_index(np.arange(-2, 3), 1).tolist() == [0] * 5


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_warp_bit_identical(seed):
    rng = np.random.default_rng(seed)
    h, w, c = rng.integers(1, 30, 2).tolist() + [int(rng.choice([1, 3]))]
    src = rng.integers(0, 256, (h, w, c), dtype=np.uint8)
    mx = rng.uniform(-2 * w, 3 * w, (17, 23))
    my = rng.uniform(-2 * h, 3 * h, (17, 23))
    a = BACKENDS["python"].warp_bilinear(src, mx, my)
    b = BACKENDS["cython"].warp_bilinear(src, mx, my)
    assert a.dtype == b.dtype == np.uint8 and np.array_equal(a, b)


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_convolve_bit_identical(seed):
    rng = np.random.default_rng(seed)
    src = rng.uniform(-50, 300, (int(rng.integers(1, 25)), int(rng.integers(1, 25)), 3))
    kx = rng.uniform(0, 1, 2 * int(rng.integers(0, 6)) + 1)
    ky = rng.uniform(-1, 1, 2 * int(rng.integers(0, 6)) + 1)
    a = BACKENDS["python"].convolve_separable(src, kx, ky)
    b = BACKENDS["cython"].convolve_separable(src, kx, ky)
    assert np.array_equal(a, b)


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_canny_kernels_bit_identical(seed):
    rng = np.random.default_rng(seed)
    gx = rng.normal(0, 200, (31, 27))
    gy = rng.normal(0, 200, (31, 27))
    gx[::5] = 0.0  # exercise the exact-axis cases
    mag = np.sqrt(gx * gx + gy * gy)
    na = BACKENDS["python"].canny_nms(gx, gy, mag)
    nb = BACKENDS["cython"].canny_nms(gx, gy, mag)
    assert np.array_equal(na, nb)
    ea = BACKENDS["python"].hysteresis(na, 100.0, 200.0)
    eb = BACKENDS["cython"].hysteresis(nb, 100.0, 200.0)
    assert np.array_equal(ea, eb)


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_clahe_interpolate_bit_identical(seed):
    rng = np.random.default_rng(seed)
    ty, tx = (int(v) for v in rng.integers(1, 6, 2))
    th, tw = (int(v) for v in rng.integers(1, 9, 2))
    h, w = ty * th - int(rng.integers(0, th)), tx * tw - int(rng.integers(0, tw))
    lum = rng.integers(0, 256, (h, w), dtype=np.uint8)
    luts = np.floor(rng.uniform(0, 255.99, (ty, tx, 256)))
    a = BACKENDS["python"].clahe_interpolate(lum, luts, th, tw)
    b = BACKENDS["cython"].clahe_interpolate(lum, luts, th, tw)
    assert np.array_equal(a, b)


def test_hysteresis_growth_8_connected():
    nms = np.zeros((5, 5))
    nms[0, 0] = 250  # strong seed
    nms[1, 1] = 150  # diagonal weak neighbour, kept
    nms[2, 2] = 150  # chained further, kept
    nms[4, 0] = 150  # isolated weak, dropped
    for name, mod in BACKENDS.items():
        out = mod.hysteresis(nms, 100.0, 200.0)
        assert out[0, 0] == out[1, 1] == out[2, 2] == 255, name
        assert out[4, 0] == 0, name
        assert set(np.unique(out)) <= {0, 255}


def test_benchmark_runs_and_backends_agree():
    import importlib.util
    import pathlib

    path = pathlib.Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    backends, rows = bench.run(40, 32, repeat=1)
    assert "python" in backends
    assert all(r["identical"] for r in rows)
