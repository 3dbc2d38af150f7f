"""Numpy implementations of the hot kernels.

These are the reference semantics for ``augdoe._ckernels``: every function
here performs the same floating-point operations in the same order as its
compiled twin, so both backends produce bit-identical results. Borders
are mirrored without repeating the edge sample (``dcb|abcd|cba``).
"""

import numpy as np
from scipy import ndimage

TG22 = 0.41421356237309503  # tan(22.5 deg)
TG67 = 2.414213562373095  # tan(67.5 deg)


def reflect_index(i, n):
    i = np.asarray(i, dtype=np.int64)
    if n == 1:
        return np.zeros_like(i)
    period = 2 * (n - 1)
    i = np.abs(i) % period
    return np.where(i >= n, period - i, i)


def warp_bilinear(src, map_x, map_y):
    """Sample ``src`` (h, w, c) uint8 at real coordinates; returns (H, W, c) uint8."""
    h, w, _ = src.shape
    x0f = np.floor(map_x)
    y0f = np.floor(map_y)
    fx = map_x - x0f
    fy = map_y - y0f
    x0 = x0f.astype(np.int64)
    y0 = y0f.astype(np.int64)
    xa = reflect_index(x0, w)
    xb = reflect_index(x0 + 1, w)
    ya = reflect_index(y0, h)
    yb = reflect_index(y0 + 1, h)
    gx = 1.0 - fx
    gy = 1.0 - fy
    w00 = (gx * gy)[..., None]
    w10 = (fx * gy)[..., None]
    w01 = (gx * fy)[..., None]
    w11 = (fx * fy)[..., None]
    s = src.astype(np.float64)
    v = w00 * s[ya, xa] + w10 * s[ya, xb] + w01 * s[yb, xa] + w11 * s[yb, xb]
    return np.clip(np.floor(v + 0.5), 0, 255).astype(np.uint8)


def _convolve_axis(src, kernel, axis):
    n = src.shape[axis]
    r = len(kernel) // 2
    pos = np.arange(n)
    acc = np.zeros(src.shape, dtype=np.float64)
    for k, wk in enumerate(kernel):
        idx = reflect_index(pos + (k - r), n)
        acc += wk * np.take(src, idx, axis=axis)
    return acc


def convolve_separable(src, kx, ky):
    """Correlate (h, w, c) float64 with ``kx`` along rows, then ``ky`` along columns.

    Either kernel may be ``None`` to skip that pass. Kernel lengths must be odd.
    """
    out = np.asarray(src, dtype=np.float64)
    if kx is not None:
        out = _convolve_axis(out, np.asarray(kx, dtype=np.float64), axis=1)
    if ky is not None:
        out = _convolve_axis(out, np.asarray(ky, dtype=np.float64), axis=0)
    return out


def canny_nms(gx, gy, mag):
    """Non-maximum suppression along the quantized gradient direction.

    A pixel survives when it is strictly greater than its backward
    neighbour and not less than its forward one, so 2-pixel plateaus
    thin to a single pixel. Neighbours outside the image count as 0.
    """
    h, w = mag.shape
    pad = np.zeros((h + 2, w + 2))
    pad[1:-1, 1:-1] = mag

    def shifted(dy, dx):
        return pad[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]

    ax = np.abs(gx)
    ay = np.abs(gy)
    horiz = ay <= TG22 * ax
    vert = ~horiz & (ay > TG67 * ax)
    diag = ~horiz & ~vert
    pos_diag = diag & (gx * gy > 0)

    back = np.select(
        [horiz, vert, pos_diag],
        [shifted(0, -1), shifted(-1, 0), shifted(-1, -1)],
        shifted(-1, 1),
    )
    fwd = np.select(
        [horiz, vert, pos_diag],
        [shifted(0, 1), shifted(1, 0), shifted(1, 1)],
        shifted(1, -1),
    )
    keep = (mag > back) & (mag >= fwd)
    return np.where(keep, mag, 0.0)


def hysteresis(nms, low, high):
    """Edges: pixels above ``high`` plus 8-connected pixels above ``low`` reachable from them."""
    strong = nms > high
    weak = nms > low
    labels, count = ndimage.label(weak, structure=np.ones((3, 3), dtype=bool))
    if count == 0:
        return np.zeros(nms.shape, dtype=np.uint8)
    hit = np.zeros(count + 1, dtype=bool)
    hit[np.unique(labels[strong])] = True
    hit[0] = False
    return np.where(hit[labels], 255, 0).astype(np.uint8)


def clahe_interpolate(lum, luts, tile_h, tile_w):
    """Blend the four surrounding tile mappings bilinearly for each pixel.

    ``lum`` is (h, w) uint8, ``luts`` (tiles_y, tiles_x, 256) float64.
    """
    h, w = lum.shape
    ty, tx, _ = luts.shape
    fy = np.arange(h, dtype=np.float64) / tile_h - 0.5
    fx = np.arange(w, dtype=np.float64) / tile_w - 0.5
    y1f = np.floor(fy)
    x1f = np.floor(fx)
    ya = (fy - y1f)[:, None]
    xa = (fx - x1f)[None, :]
    y1 = y1f.astype(np.int64)
    x1 = x1f.astype(np.int64)
    y2 = np.minimum(y1 + 1, ty - 1)[:, None]
    x2 = np.minimum(x1 + 1, tx - 1)[None, :]
    y1 = np.maximum(y1, 0)[:, None]
    x1 = np.maximum(x1, 0)[None, :]
    p = lum.astype(np.int64)
    ixa = 1.0 - xa
    iya = 1.0 - ya
    top = luts[y1, x1, p] * ixa + luts[y1, x2, p] * xa
    bot = luts[y2, x1, p] * ixa + luts[y2, x2, p] * xa
    v = top * iya + bot * ya
    return np.clip(np.floor(v + 0.5), 0, 255).astype(np.uint8)
