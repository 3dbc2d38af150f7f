# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in :mod:`augdoe._pykernels`.

Same arguments, same results bit for bit; see that module for semantics.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()

cdef double TG22 = 0.41421356237309503
cdef double TG67 = 2.414213562373095


cdef inline Py_ssize_t _reflect(Py_ssize_t i, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t period
    if n == 1:
        return 0
    period = 2 * (n - 1)
    if i < 0:
        i = -i
    i = i % period
    if i >= n:
        i = period - i
    return i


cdef inline unsigned char _to_u8(double v) noexcept nogil:
    v = floor(v + 0.5)
    if v < 0.0:
        return 0
    if v > 255.0:
        return 255
    return <unsigned char>v


def warp_bilinear(src, map_x, map_y):
    cdef const unsigned char[:, :, ::1] s = np.ascontiguousarray(src, dtype=np.uint8)
    cdef const double[:, ::1] mx = np.ascontiguousarray(map_x, dtype=np.float64)
    cdef const double[:, ::1] my = np.ascontiguousarray(map_y, dtype=np.float64)
    cdef Py_ssize_t h = s.shape[0], w = s.shape[1], c = s.shape[2]
    cdef Py_ssize_t oh = mx.shape[0], ow = mx.shape[1]
    out_arr = np.empty((oh, ow, c), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, k, xa, xb, ya, yb
    cdef double x, y, x0f, y0f, fx, fy, gx, gy, w00, w10, w01, w11, v
    with nogil:
        for i in range(oh):
            for j in range(ow):
                x = mx[i, j]
                y = my[i, j]
                x0f = floor(x)
                y0f = floor(y)
                fx = x - x0f
                fy = y - y0f
                xa = _reflect(<Py_ssize_t>x0f, w)
                xb = _reflect(<Py_ssize_t>x0f + 1, w)
                ya = _reflect(<Py_ssize_t>y0f, h)
                yb = _reflect(<Py_ssize_t>y0f + 1, h)
                gx = 1.0 - fx
                gy = 1.0 - fy
                w00 = gx * gy
                w10 = fx * gy
                w01 = gx * fy
                w11 = fx * fy
                for k in range(c):
                    v = w00 * s[ya, xa, k]
                    v = v + w10 * s[ya, xb, k]
                    v = v + w01 * s[yb, xa, k]
                    v = v + w11 * s[yb, xb, k]
                    out[i, j, k] = _to_u8(v)
    return out_arr


cdef _rows(const double[:, :, ::1] src, const double[::1] ker):
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1], c = src.shape[2]
    cdef Py_ssize_t n = ker.shape[0], r = n // 2
    out_arr = np.empty((h, w, c), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, ch, t, jj
    cdef double acc
    with nogil:
        for i in range(h):
            for j in range(w):
                for ch in range(c):
                    acc = 0.0
                    for t in range(n):
                        jj = _reflect(j + t - r, w)
                        acc = acc + ker[t] * src[i, jj, ch]
                    out[i, j, ch] = acc
    return out_arr


cdef _cols(const double[:, :, ::1] src, const double[::1] ker):
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1], c = src.shape[2]
    cdef Py_ssize_t n = ker.shape[0], r = n // 2
    out_arr = np.empty((h, w, c), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, ch, t, ii
    cdef double acc
    with nogil:
        for i in range(h):
            for j in range(w):
                for ch in range(c):
                    acc = 0.0
                    for t in range(n):
                        ii = _reflect(i + t - r, h)
                        acc = acc + ker[t] * src[ii, j, ch]
                    out[i, j, ch] = acc
    return out_arr


def convolve_separable(src, kx, ky):
    out = np.ascontiguousarray(src, dtype=np.float64)
    if kx is not None:
        out = _rows(out, np.ascontiguousarray(kx, dtype=np.float64))
    if ky is not None:
        out = _cols(out, np.ascontiguousarray(ky, dtype=np.float64))
    return out


def canny_nms(gx, gy, mag):
    cdef const double[:, ::1] dx = np.ascontiguousarray(gx, dtype=np.float64)
    cdef const double[:, ::1] dy = np.ascontiguousarray(gy, dtype=np.float64)
    cdef const double[:, ::1] m = np.ascontiguousarray(mag, dtype=np.float64)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1]
    out_arr = np.zeros((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, bi, bj, fi, fj
    cdef double ax, ay, v, back, fwd
    with nogil:
        for i in range(h):
            for j in range(w):
                ax = dx[i, j]
                ay = dy[i, j]
                if ax < 0:
                    ax = -ax
                if ay < 0:
                    ay = -ay
                if ay <= TG22 * ax:
                    bi = i; bj = j - 1; fi = i; fj = j + 1
                elif ay > TG67 * ax:
                    bi = i - 1; bj = j; fi = i + 1; fj = j
                elif dx[i, j] * dy[i, j] > 0:
                    bi = i - 1; bj = j - 1; fi = i + 1; fj = j + 1
                else:
                    bi = i - 1; bj = j + 1; fi = i + 1; fj = j - 1
                back = 0.0
                fwd = 0.0
                if 0 <= bi < h and 0 <= bj < w:
                    back = m[bi, bj]
                if 0 <= fi < h and 0 <= fj < w:
                    fwd = m[fi, fj]
                v = m[i, j]
                if v > back and v >= fwd:
                    out[i, j] = v
    return out_arr


def hysteresis(nms, double low, double high):
    cdef const double[:, ::1] m = np.ascontiguousarray(nms, dtype=np.float64)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1]
    out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    stack_arr = np.empty(h * w, dtype=np.intp)
    cdef Py_ssize_t[::1] stack = stack_arr
    cdef Py_ssize_t top = 0, i, j, p, di, dj, ni, nj
    with nogil:
        for i in range(h):
            for j in range(w):
                if m[i, j] > high and out[i, j] == 0:
                    out[i, j] = 255
                    stack[top] = i * w + j
                    top += 1
                    while top > 0:
                        top -= 1
                        p = stack[top]
                        for di in range(-1, 2):
                            for dj in range(-1, 2):
                                ni = p // w + di
                                nj = p % w + dj
                                if 0 <= ni < h and 0 <= nj < w and out[ni, nj] == 0 and m[ni, nj] > low:
                                    out[ni, nj] = 255
                                    stack[top] = ni * w + nj
                                    top += 1
    return out_arr


def clahe_interpolate(lum, luts, Py_ssize_t tile_h, Py_ssize_t tile_w):
    cdef const unsigned char[:, ::1] p = np.ascontiguousarray(lum, dtype=np.uint8)
    cdef const double[:, :, ::1] lut = np.ascontiguousarray(luts, dtype=np.float64)
    cdef Py_ssize_t h = p.shape[0], w = p.shape[1]
    cdef Py_ssize_t ty = lut.shape[0], tx = lut.shape[1]
    out_arr = np.empty((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, y1, y2, x1, x2, v
    cdef double fy, fx, y1f, x1f, ya, xa, iya, ixa, top, bot
    with nogil:
        for i in range(h):
            fy = <double>i / tile_h - 0.5
            y1f = floor(fy)
            ya = fy - y1f
            iya = 1.0 - ya
            y1 = <Py_ssize_t>y1f
            y2 = y1 + 1
            if y2 > ty - 1:
                y2 = ty - 1
            if y1 < 0:
                y1 = 0
            for j in range(w):
                fx = <double>j / tile_w - 0.5
                x1f = floor(fx)
                xa = fx - x1f
                ixa = 1.0 - xa
                x1 = <Py_ssize_t>x1f
                x2 = x1 + 1
                if x2 > tx - 1:
                    x2 = tx - 1
                if x1 < 0:
                    x1 = 0
                v = p[i, j]
                top = lut[y1, x1, v] * ixa + lut[y1, x2, v] * xa
                bot = lut[y2, x1, v] * ixa + lut[y2, x2, v] * xa
                out[i, j] = _to_u8(top * iya + bot * ya)
    return out_arr
