"""Time the compiled and numpy kernel backends on the ops that use them.

    python benchmarks/bench_kernels.py --size 512 384 --repeat 5

Each op runs on both backends with the same seed. Outputs are checked to be
identical before the timings are reported.
"""

import argparse
import json
import sys
import timeit

import numpy as np

from augdoe import kernels
from augdoe.augment import canny_edge, clahe, elastic_transform, gaussian_blur, shift_scale_rotate
from augdoe.imgcore import Image, RngStream


def _cases(img):
    return {
        "gaussian_blur": lambda: gaussian_blur(img, RngStream(1), kernel=(7, 7)),
        "elastic_transform": lambda: elastic_transform(img, RngStream(2), alpha=30.0, sigma=6.0),
        "shift_scale_rotate": lambda: shift_scale_rotate(img, RngStream(3)),
        "clahe": lambda: clahe(img, RngStream(4)),
        "canny_edge": lambda: canny_edge(img),
    }


def run(width, height, repeat, seed=0):
    rng = np.random.default_rng(seed)
    # smooth content so canny and hysteresis have real work to do
    base = rng.integers(0, 256, (height // 8 + 1, width // 8 + 1, 3)).astype(np.uint8)
    pixels = np.kron(base, np.ones((8, 8, 1), dtype=np.uint8))[:height, :width]
    pixels = np.clip(pixels.astype(int) + rng.integers(-12, 13, pixels.shape), 0, 255).astype(np.uint8)
    img = Image(pixels)

    backends = sorted(kernels.available_backends())
    rows = []
    for name in _cases(img):
        timings, outputs = {}, {}
        for backend in backends:
            previous = kernels.use(backend)
            try:
                fn = _cases(img)[name]
                outputs[backend] = fn()
                timings[backend] = min(timeit.repeat(fn, number=1, repeat=repeat))
            finally:
                kernels.use(previous)
        same = len({o.pixels.tobytes() for o in outputs.values()}) == 1
        rows.append({"op": name, "seconds": timings, "identical": same})
    return backends, rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", nargs=2, type=int, default=(512, 384), metavar=("W", "H"))
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args(argv)

    backends, rows = run(args.size[0], args.size[1], args.repeat)
    if "cython" not in backends:
        print("note: compiled extension not built, timing the numpy backend only")
    print(f"{'op':<20}" + "".join(f"{b + ' ms':>14}" for b in backends) + f"{'speedup':>10}{'identical':>11}")
    for r in rows:
        s = r["seconds"]
        speed = f"{s['python'] / s['cython']:.2f}x" if "cython" in s else "-"
        print(f"{r['op']:<20}" + "".join(f"{s[b] * 1e3:>14.2f}" for b in backends)
              + f"{speed:>10}{str(r['identical']):>11}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"size": args.size, "repeat": args.repeat, "results": rows}, fh, indent=2)
    return 0 if all(r["identical"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
