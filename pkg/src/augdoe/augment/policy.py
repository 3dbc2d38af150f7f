"""Execution of fixed AutoAugment-style policies."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from augdoe.augment.pointops import check_magnitude, point_op
from augdoe.augment.registry import POINT, augmentation, require_stream
from augdoe.errors import InvalidInputError, InvalidRangeError


@dataclass(frozen=True)
class PolicyOp:
    kind: str
    prob: float
    magnitude: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.prob <= 1.0:
            raise InvalidRangeError(f"sub-policy probability must be in [0, 1], got {self.prob}")
        check_magnitude(self.kind, self.magnitude)


@dataclass(frozen=True)
class Policy:
    sub_policies: tuple[tuple[PolicyOp, PolicyOp], ...]
    name: str = ""

    @classmethod
    def from_dict(cls, doc: dict) -> Policy:
        try:
            raw = doc["sub_policies"]
        except (KeyError, TypeError):
            raise InvalidInputError("policy document needs a 'sub_policies' list") from None
        subs = []
        for i, pair in enumerate(raw):
            if len(pair) != 2:
                raise InvalidInputError(f"sub-policy {i} must hold exactly two operations")
            subs.append(tuple(PolicyOp(op["kind"], float(op["prob"]), op.get("magnitude")) for op in pair))
        return cls(tuple(subs), doc.get("name", ""))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "sub_policies": [[{"kind": op.kind, "prob": op.prob, "magnitude": op.magnitude} for op in pair]
                             for pair in self.sub_policies],
        }


def load_policy(path) -> Policy:
    with open(path) as fh:
        return Policy.from_dict(json.load(fh))


def imagenet_policy() -> Policy:
    """The bundled 25-sub-policy ImageNet table."""
    text = resources.files("augdoe").joinpath("data/autoaugment_imagenet.json").read_text()
    return Policy.from_dict(json.loads(text))


def _resolve(policy) -> Policy:
    if isinstance(policy, Policy):
        return policy
    if policy in (None, "imagenet"):
        return imagenet_policy()
    if isinstance(policy, dict):
        return Policy.from_dict(policy)
    return load_policy(Path(policy))


def apply_policy_traced(policy: Policy, img, stream):
    if not policy.sub_policies:
        raise InvalidInputError("policy has no sub-policies")
    stream = require_stream(stream, "autoaugment")
    index = stream.integers(0, len(policy.sub_policies))
    fired = []
    for op in policy.sub_policies[index]:
        hit = stream.random() < op.prob
        if hit:
            img = point_op(img, op.kind, op.magnitude)
        fired.append(hit)
    return img, {"sub_policy": index, "fired": fired}


def apply_policy(policy: Policy, img, stream):
    """Pick one sub-policy uniformly and apply its two ops, each gated by its own probability."""
    return apply_policy_traced(policy, img, stream)[0]


@augmentation("autoaugment", POINT)
def _autoaugment_stage(img, stream, policy="imagenet"):
    return apply_policy_traced(_resolve(policy), img, stream)
