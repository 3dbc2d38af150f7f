"""Augmentation registry and parameter helpers.

Every augmentation is written as a *traced* function
``fn(img, stream, **params) -> (Image, sampled_params)``; the
:func:`augmentation` decorator registers it under a kind name and returns
the plain public function that yields only the image. Pipelines call the
traced form so that each fired stage can be logged with the values its
random draws produced.
"""

from __future__ import annotations

import functools
import inspect
import math
from dataclasses import dataclass
from typing import Any, Callable

from augdoe.errors import InvalidInputError, InvalidRangeError

GEOMETRIC = "geometric"
COLOR = "color"
TEXTURE = "texture"
WEATHER = "weather"
POINT = "point"


@dataclass(frozen=True)
class Augmentation:
    kind: str
    group: str
    traced: Callable
    defaults: dict

    def __call__(self, img, stream, **params):
        return self.traced(img, stream, **params)


_REGISTRY: dict[str, Augmentation] = {}


def augmentation(kind: str, group: str):
    def deco(fn):
        params = list(inspect.signature(fn).parameters.values())[2:]
        defaults = {p.name: p.default for p in params if p.kind is p.KEYWORD_ONLY or p.default is not p.empty}
        _REGISTRY[kind] = Augmentation(kind, group, fn, defaults)

        @functools.wraps(fn)
        def public(img, stream=None, *args, **kwargs):
            return fn(img, stream, *args, **kwargs)[0]

        public.traced = fn
        public.kind = kind
        return public

    return deco


def get(kind: str) -> Augmentation:
    try:
        return _REGISTRY[kind]
    except KeyError:
        raise InvalidInputError(f"unknown augmentation kind {kind!r}; known: {sorted(_REGISTRY)}") from None


def kinds(group: str | None = None) -> list[str]:
    return sorted(k for k, a in _REGISTRY.items() if group is None or a.group == group)


def require_stream(stream, kind):
    if stream is None:
        raise InvalidInputError(f"{kind} draws random parameters and needs an RngStream")
    return stream


def as_range(value, name: str, lo_bound: float = -math.inf, hi_bound: float = math.inf) -> tuple[float, float]:
    """Normalize a scalar or a 2-sequence into a validated closed interval."""
    if isinstance(value, (int, float)):
        lo = hi = float(value)
    else:
        try:
            lo, hi = (float(v) for v in value)
        except (TypeError, ValueError):
            raise InvalidInputError(f"{name} must be a number or a (lo, hi) pair, got {value!r}") from None
    if not lo <= hi:
        raise InvalidRangeError(f"{name} range is empty: ({lo}, {hi})")
    if lo < lo_bound or hi > hi_bound:
        raise InvalidRangeError(f"{name} range ({lo}, {hi}) outside [{lo_bound}, {hi_bound}]")
    return lo, hi


def draw_int(stream, bounds: tuple[float, float]) -> int:
    """Uniform integer in the closed interval ``bounds``."""
    lo, hi = int(bounds[0]), int(bounds[1])
    return stream.integers(lo, hi + 1)


def jsonable(value: Any):
    """Convert numpy scalars/arrays and tuples into plain JSON types."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return value.tolist()
    return value
