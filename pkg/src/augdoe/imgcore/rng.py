"""Counter-based random streams.

Each stream is a key plus a counter; the ``i``-th 64-bit output is the
SplitMix64 finalizer applied to ``key + (i + 1) * GAMMA``. Because an
output depends only on (key, position) the sequence is identical on every
platform, and substreams derived from distinct labels never share state,
which is what makes augmentation results independent of the order images
are processed in.
"""

from __future__ import annotations

import numpy as np

from augdoe.errors import InvalidInputError, InvalidRangeError

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 output finalizer on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_MUL1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_MUL2)
    return z ^ (z >> np.uint64(31))


def hash_labels(*labels: int) -> int:
    """Fold integer labels into one 64-bit substream id."""
    h = 0x243F6A8885A308D3
    for label in labels:
        if not isinstance(label, (int, np.integer)):
            raise InvalidInputError(f"stream labels must be integers, got {label!r}")
        h = mix64(h ^ mix64((int(label) + GAMMA) & MASK64))
    return h


class RngStream:
    """A deterministic stream of random numbers.

    ``seed`` and ``stream_id`` fix the sequence; ``counter`` is the number of
    64-bit words consumed so far. Draw methods advance the counter in place;
    use :meth:`copy` to snapshot a position or :meth:`spawn` for an
    independent child stream.
    """

    __slots__ = ("seed", "stream_id", "counter", "_key")

    def __init__(self, seed: int, stream_id: int = 0, counter: int = 0):
        self.seed = int(seed) & MASK64
        self.stream_id = int(stream_id) & MASK64
        self.counter = int(counter)
        self._key = mix64(mix64(self.seed) ^ mix64(self.stream_id ^ 0x5851F42D4C957F2D))

    def copy(self) -> RngStream:
        return RngStream(self.seed, self.stream_id, self.counter)

    def spawn(self, *labels: int) -> RngStream:
        """Child stream keyed on this stream's id and ``labels``; does not advance self."""
        return RngStream(self.seed, hash_labels(self.stream_id, *labels))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id:#018x}, counter={self.counter})"

    # raw words

    def next_u64(self, n: int) -> np.ndarray:
        if n < 0:
            raise InvalidInputError("cannot draw a negative number of values")
        start = self.counter + 1
        idx = np.arange(start, start + n, dtype=np.uint64)
        self.counter += n
        return _mix64_array(np.uint64(self._key) + idx * np.uint64(GAMMA))

    # distributions

    def random(self, size=None):
        """Uniform doubles in [0, 1) built from the top 53 bits of each word."""
        n = 1 if size is None else int(np.prod(size))
        u = (self.next_u64(n) >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
        return float(u[0]) if size is None else u.reshape(size)

    def uniform(self, lo: float, hi: float, size=None):
        lo = float(lo)
        hi = float(hi)
        if not lo <= hi:
            raise InvalidRangeError(f"uniform needs lo <= hi, got [{lo}, {hi})")
        u = self.random(size)
        if lo == hi:
            return lo if size is None else np.full(size, lo)
        v = lo + (hi - lo) * np.asarray(u)
        # lo + (hi-lo)*u can round up to hi
        v = np.where(v >= hi, np.nextafter(hi, lo), v)
        return float(v) if size is None else v

    def integers(self, lo: int, hi: int, size=None):
        """Uniform integers in [lo, hi)."""
        lo = int(lo)
        hi = int(hi)
        if hi <= lo:
            raise InvalidRangeError(f"integers needs lo < hi, got [{lo}, {hi})")
        span = hi - lo
        u = np.asarray(self.random(size))
        v = lo + np.minimum(np.floor(u * span).astype(np.int64), span - 1)
        return int(v) if size is None else v

    def normal(self, size=None):
        """Standard normal deviates via Box-Muller (two words per deviate)."""
        n = 1 if size is None else int(np.prod(size))
        u = self.random(2 * n)
        u1 = 1.0 - u[0::2]
        u2 = u[1::2]
        z = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
        return float(z[0]) if size is None else z.reshape(size)

    def bernoulli(self, p: float) -> bool:
        if not 0.0 <= p <= 1.0:
            raise InvalidRangeError(f"probability must be in [0, 1], got {p}")
        return self.random() < p

    def permutation(self, n: int) -> np.ndarray:
        out = np.arange(n)
        for i in range(n - 1, 0, -1):
            j = self.integers(0, i + 1)
            out[i], out[j] = out[j], out[i]
        return out


def derive_stream(master_seed: int, *labels: int) -> RngStream:
    """Stream for e.g. ``(master_seed, image_index, stage_index)``."""
    return RngStream(master_seed, hash_labels(*labels))


def rng_uniform(stream: RngStream, lo: float, hi: float) -> float:
    """One uniform draw from [lo, hi); ``lo == hi`` returns ``lo``."""
    return stream.uniform(lo, hi)
