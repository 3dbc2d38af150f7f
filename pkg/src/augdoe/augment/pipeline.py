"""Seeded, probabilistic augmentation pipelines.

A pipeline is an ordered list of stages. Stage ``s`` applied to image
``i`` draws from its own stream keyed on ``(master_seed, i, s)``: first a
Bernoulli(p) to decide whether it fires, then whatever the augmentation
itself samples. Outputs therefore do not depend on batch composition or on
which worker handles which image.
"""

from __future__ import annotations

import inspect
import json
from dataclasses import dataclass, field

from augdoe.augment import registry
from augdoe.errors import InvalidInputError, InvalidRangeError
from augdoe.imgcore.rng import derive_stream

DEFAULT_SEED = 20230501

# pair-valued parameters that are sizes, grids or colors rather than (lo, hi) ranges
_NOT_RANGES = {"size", "tiles", "color", "roi"}


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    if isinstance(value, dict):
        return {k: _freeze(v) for k, v in value.items()}
    return value


@dataclass(frozen=True)
class AugSpec:
    kind: str
    params: dict = field(default_factory=dict)
    probability: float = 0.5

    def __post_init__(self):
        if not 0.0 <= float(self.probability) <= 1.0:
            raise InvalidRangeError(f"{self.kind}: probability must be in [0, 1], got {self.probability}")
        aug = registry.get(self.kind)
        takes_any = any(p.kind is p.VAR_KEYWORD for p in inspect.signature(aug.traced).parameters.values())
        unknown = set(self.params) - set(aug.defaults)
        if unknown and not takes_any:
            raise InvalidInputError(f"{self.kind}: unknown parameter(s) {sorted(unknown)}")
        params = _freeze(dict(self.params))
        for name, value in params.items():
            if name in _NOT_RANGES:
                continue
            if isinstance(value, tuple) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
                if value[0] > value[1]:
                    raise InvalidRangeError(f"{self.kind}: {name} range {value} is empty")
        object.__setattr__(self, "params", params)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "probability": self.probability, "params": registry.jsonable(self.params)}


@dataclass(frozen=True)
class Pipeline:
    master_seed: int = DEFAULT_SEED
    stages: tuple[AugSpec, ...] = ()

    @classmethod
    def from_dict(cls, doc: dict, seed: int | None = None) -> Pipeline:
        stages = tuple(
            AugSpec(s["kind"], s.get("params", {}), float(s.get("probability", 0.5))) for s in doc.get("stages", [])
        )
        master = seed if seed is not None else doc.get("seed", DEFAULT_SEED)
        return cls(int(master), stages)

    def to_dict(self) -> dict:
        return {"seed": self.master_seed, "stages": [s.to_dict() for s in self.stages]}


def load_pipeline(path, seed: int | None = None) -> Pipeline:
    with open(path) as fh:
        return Pipeline.from_dict(json.load(fh), seed=seed)


def run_pipeline(pipeline: Pipeline, img, image_index: int):
    """Apply the pipeline and return ``(image, records)``, one record per stage."""
    records = []
    for s, spec in enumerate(pipeline.stages):
        stream = derive_stream(pipeline.master_seed, image_index, s)
        fired = stream.bernoulli(spec.probability)
        record = {"stage": s, "kind": spec.kind, "fired": fired}
        if fired:
            img, sampled = registry.get(spec.kind)(img, stream, **spec.params)
            record["params"] = registry.jsonable(sampled)
        records.append(record)
    return img, records


def apply_pipeline(pipeline: Pipeline, img, image_index: int):
    return run_pipeline(pipeline, img, image_index)[0]
