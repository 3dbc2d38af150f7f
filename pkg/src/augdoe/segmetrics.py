"""Confusion-matrix mIoU and checkpoint selection for segmentation runs."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from augdoe.errors import InvalidInputError, UndefinedMetricError

IGNORE_INDEX = 255

# Cityscapes train ids of the 16 classes that Synthia also labels
# (everything except terrain, truck and train).
SYNTHIA16_CLASSES = (0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 15, 17, 18)
CITYSCAPES_CLASS_NAMES = (
    "road", "sidewalk", "building", "wall", "fence", "pole", "traffic light", "traffic sign", "vegetation",
    "terrain", "sky", "person", "rider", "car", "truck", "bus", "train", "motorcycle", "bicycle",
)


@dataclass(frozen=True)
class ConfusionMatrix:
    """``counts[t, p]`` is the number of pixels of true class ``t`` predicted as ``p``."""

    num_classes: int
    counts: np.ndarray = None
    ignore_index: int = IGNORE_INDEX

    def __post_init__(self):
        if self.num_classes < 1:
            raise InvalidInputError("num_classes must be positive")
        if self.ignore_index < self.num_classes:
            raise InvalidInputError("ignore_index must not collide with a class index")
        counts = np.zeros((self.num_classes,) * 2, dtype=np.int64) if self.counts is None \
            else np.array(self.counts, dtype=np.int64)
        if counts.shape != (self.num_classes, self.num_classes) or (counts < 0).any():
            raise InvalidInputError("counts must be a non-negative K x K matrix")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    def __add__(self, other: ConfusionMatrix) -> ConfusionMatrix:
        if (self.num_classes, self.ignore_index) != (other.num_classes, other.ignore_index):
            raise InvalidInputError("cannot merge confusion matrices with different class sets")
        return ConfusionMatrix(self.num_classes, self.counts + other.counts, self.ignore_index)

    def __eq__(self, other):
        return (
            isinstance(other, ConfusionMatrix)
            and self.num_classes == other.num_classes
            and self.ignore_index == other.ignore_index
            and np.array_equal(self.counts, other.counts)
        )

    __hash__ = None


def _check_labels(arr, name, cm):
    bad = (arr >= cm.num_classes) & (arr != cm.ignore_index)
    if bad.any():
        raise InvalidInputError(f"{name} holds label {int(arr[bad][0])} >= num_classes={cm.num_classes}")


def accumulate(cm: ConfusionMatrix, truth, pred) -> ConfusionMatrix:
    """Add one label-map pair; pixels where either map holds ``ignore_index`` are skipped."""
    truth = np.asarray(truth)
    pred = np.asarray(pred)
    if truth.shape != pred.shape:
        raise InvalidInputError(f"truth shape {truth.shape} != prediction shape {pred.shape}")
    if np.any(truth < 0) or np.any(pred < 0):
        raise InvalidInputError("labels must be non-negative")
    _check_labels(truth, "truth", cm)
    _check_labels(pred, "prediction", cm)
    valid = (truth != cm.ignore_index) & (pred != cm.ignore_index)
    k = cm.num_classes
    flat = truth[valid].astype(np.int64) * k + pred[valid].astype(np.int64)
    counts = np.bincount(flat, minlength=k * k).reshape(k, k)
    return ConfusionMatrix(k, cm.counts + counts, cm.ignore_index)


def iou_per_class(cm: ConfusionMatrix) -> np.ndarray:
    """IoU of every class; NaN where the class never occurs in truth or prediction."""
    c = cm.counts.astype(np.float64)
    tp = np.diag(c)
    denom = c.sum(axis=0) + c.sum(axis=1) - tp
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(denom > 0, tp / np.where(denom > 0, denom, 1.0), np.nan)


def miou(cm: ConfusionMatrix, class_subset=None, exclude_empty: bool = True):
    """Mean IoU over ``class_subset`` (default all classes) and the per-class list.

    With ``exclude_empty`` classes whose IoU is undefined (no pixels in
    either truth or prediction) are left out of the mean; otherwise they
    count as 0.
    """
    classes = list(range(cm.num_classes)) if class_subset is None else sorted(set(int(c) for c in class_subset))
    if not classes:
        raise UndefinedMetricError("class subset is empty")
    if classes[0] < 0 or classes[-1] >= cm.num_classes:
        raise InvalidInputError(f"class subset {classes} outside 0..{cm.num_classes - 1}")
    ious = iou_per_class(cm)[classes]
    if exclude_empty:
        used = ious[~np.isnan(ious)]
    else:
        used = np.nan_to_num(ious, nan=0.0)
    if used.size == 0:
        raise UndefinedMetricError("no class in the subset has a defined IoU")
    # correctly rounded sum so the mean does not depend on summation order
    return math.fsum(used.tolist()) / used.size, [None if math.isnan(v) else float(v) for v in ious]


@dataclass(frozen=True)
class CheckpointEntry:
    epoch: int
    source_val_miou: float
    target_mious: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CheckpointLog:
    entries: tuple

    def __post_init__(self):
        entries = tuple(self.entries)
        epochs = [e.epoch for e in entries]
        if any(b <= a for a, b in zip(epochs, epochs[1:])):
            raise InvalidInputError("checkpoint epochs must be strictly increasing")
        for e in entries:
            for v in (e.source_val_miou, *e.target_mious.values()):
                if not 0.0 <= v <= 1.0:
                    raise InvalidInputError(f"epoch {e.epoch}: mIoU {v} outside [0, 1]")
        object.__setattr__(self, "entries", entries)

    @property
    def targets(self) -> list[str]:
        return list(self.entries[0].target_mious) if self.entries else []


def read_checkpoint_log(path) -> CheckpointLog:
    """CSV with header ``epoch,source_val_miou,<target>...``."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        if fields[:2] != ["epoch", "source_val_miou"]:
            raise InvalidInputError(f"{path}: header must start with epoch,source_val_miou; got {fields}")
        targets = fields[2:]
        entries = [
            CheckpointEntry(int(row["epoch"]), float(row["source_val_miou"]), {t: float(row[t]) for t in targets})
            for row in reader
        ]
    return CheckpointLog(tuple(entries))


def select_checkpoint(log: CheckpointLog, mode: str = "II", target: str | None = None) -> int:
    """Epoch with the best source validation mIoU (mode ``II``) or best ``target`` mIoU (mode ``I``).

    Ties go to the earliest epoch.
    """
    if not log.entries:
        raise InvalidInputError("checkpoint log is empty")
    mode = mode.upper()
    if mode == "II":
        scores = [e.source_val_miou for e in log.entries]
    elif mode == "I":
        if target is None or target not in log.entries[0].target_mious:
            raise InvalidInputError(f"target series {target!r} not in log (have {log.targets})")
        scores = [e.target_mious[target] for e in log.entries]
    else:
        raise InvalidInputError(f"mode must be 'I' or 'II', got {mode!r}")
    best = max(range(len(scores)), key=lambda i: (scores[i], -i))
    return log.entries[best].epoch
