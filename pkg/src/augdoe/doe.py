"""Two-level full factorial plans and coded regression design matrices."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from importlib import resources

import numpy as np

from augdoe.errors import InvalidInputError
from augdoe.imgcore.rng import RngStream, hash_labels

MAX_FACTORS = 20
CODINGS = ("zero_one", "plus_minus")
MODELS = ("linear", "quadratic")


def _check_factors(factors) -> tuple[str, ...]:
    factors = tuple(str(f) for f in factors)
    if not factors:
        raise InvalidInputError("need at least one factor")
    if len(factors) > MAX_FACTORS:
        raise InvalidInputError(f"at most {MAX_FACTORS} factors are supported, got {len(factors)}")
    if len(set(factors)) != len(factors):
        dupes = sorted({f for f in factors if factors.count(f) > 1})
        raise InvalidInputError(f"duplicate factor names: {dupes}")
    if any(not f or "," in f or ":" in f for f in factors):
        raise InvalidInputError("factor names must be non-empty and contain no ',' or ':'")
    return factors


@dataclass(frozen=True)
class Design:
    """``runs[r]`` is the level vector whose binary reading (first factor most significant) is ``r``."""

    factors: tuple[str, ...]
    runs: np.ndarray
    run_order: np.ndarray
    seed: int | None = None

    @property
    def num_runs(self) -> int:
        return len(self.runs)


def level_matrix(num_factors: int) -> np.ndarray:
    r = np.arange(2**num_factors)[:, None]
    shifts = np.arange(num_factors - 1, -1, -1)[None, :]
    return ((r >> shifts) & 1).astype(np.int8)


def generate_design(factors, seed: int = 0) -> Design:
    factors = _check_factors(factors)
    runs = level_matrix(len(factors))
    order = RngStream(seed, hash_labels(len(factors))).permutation(len(runs))
    return Design(factors, runs, order, seed)


def write_manifest(design: Design, path) -> None:
    """CSV ``run_id,order,<factors...>``; ``order`` is each run's 0-based position in the execution order."""
    position = np.empty(design.num_runs, dtype=np.int64)
    position[design.run_order] = np.arange(design.num_runs)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["run_id", "order", *design.factors])
        for r, levels in enumerate(design.runs):
            w.writerow([r, int(position[r]), *(int(v) for v in levels)])


def read_manifest(path) -> Design:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if header[:2] != ["run_id", "order"]:
        raise InvalidInputError(f"{path}: manifest header must start with run_id,order")
    factors = _check_factors(header[2:])
    body.sort(key=lambda r: int(r[0]))
    runs = np.array([[int(v) for v in r[2:]] for r in body], dtype=np.int8)
    if not np.array_equal(runs, level_matrix(len(factors))):
        raise InvalidInputError(f"{path}: runs do not form the full factorial in run_id order")
    position = np.array([int(r[1]) for r in body])
    order = np.empty_like(position)
    order[position] = np.arange(len(position))
    return Design(factors, runs, order)


@dataclass(frozen=True)
class ResultsTable:
    factors: tuple[str, ...]
    levels: np.ndarray
    responses: dict

    def __post_init__(self):
        factors = _check_factors(self.factors)
        levels = np.asarray(self.levels, dtype=np.int8)
        if levels.ndim != 2 or levels.shape[1] != len(factors):
            raise InvalidInputError("levels must be an n x len(factors) matrix")
        if not np.isin(levels, (0, 1)).all():
            raise InvalidInputError("factor levels must be 0 or 1")
        keys = [tuple(r) for r in levels]
        if len(set(keys)) != len(keys):
            raise InvalidInputError("duplicate level vectors in results table")
        responses = {k: np.asarray(v, dtype=np.float64) for k, v in self.responses.items()}
        for name, v in responses.items():
            if v.shape != (len(levels),):
                raise InvalidInputError(f"response {name!r} has {v.size} values for {len(levels)} rows")
            if not np.isfinite(v).all():
                raise InvalidInputError(f"response {name!r} has missing or non-finite values")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "responses", responses)

    def response(self, name: str) -> np.ndarray:
        try:
            return self.responses[name]
        except KeyError:
            raise InvalidInputError(f"unknown response {name!r}; have {sorted(self.responses)}") from None


def _parse_results(text: str, source: str, factors=None) -> ResultsTable:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and not r[0].startswith("#")]
    header, body = rows[0], rows[1:]
    cols = {name: [r[i] for r in body] for i, name in enumerate(header)}
    skip = {"run_id", "order"}
    if factors is None:
        factors = [h for h in header if h not in skip and all(v in ("0", "1") for v in cols[h])]
    else:
        missing = [f for f in factors if f not in cols]
        if missing:
            raise InvalidInputError(f"{source}: factor columns {missing} missing")
    levels = np.array([[int(v) for v in cols[f]] for f in factors], dtype=np.int8).T
    responses = {}
    for h in header:
        if h in skip or h in factors:
            continue
        try:
            responses[h] = [float(v) for v in cols[h]]
        except ValueError:
            raise InvalidInputError(f"{source}: response column {h!r} is not numeric") from None
    return ResultsTable(tuple(factors), levels, responses)


def read_results(path, factors=None) -> ResultsTable:
    """Results CSV: manifest columns plus one numeric column per response.

    Factor columns are those holding only ``0``/``1`` unless ``factors``
    names them explicitly.
    """
    with open(path, newline="") as fh:
        return _parse_results(fh.read(), str(path), factors)


def write_results(table: ResultsTable, path) -> None:
    names = list(table.responses)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["run_id", "order", *table.factors, *names])
        weights = 1 << np.arange(len(table.factors) - 1, -1, -1)
        for i, levels in enumerate(table.levels):
            w.writerow([int(levels @ weights), i, *(int(v) for v in levels),
                        *(repr(float(table.responses[n][i])) for n in names)])


FFD_FACTORS = ("GB", "RRain", "ET", "CLA", "RRC")


def bundled_results() -> ResultsTable:
    """The 31 published factorial runs plus the reconstructed all-off run.

    The all-off run (random crop only) reuses the single-augmentation
    RandomCrop scores 35.7 / 35.4 / 60.3.
    """
    text = resources.files("augdoe").joinpath("data/ffd_results.csv").read_text()
    return _parse_results(text, "ffd_results.csv", list(FFD_FACTORS))


def term_names(factors, model: str) -> list[str]:
    if model not in MODELS:
        raise InvalidInputError(f"model must be one of {MODELS}, got {model!r}")
    names = ["(Intercept)", *factors]
    if model == "quadratic":
        names += [f"{a}:{b}" for a, b in itertools.combinations(factors, 2)]
    return names


def encode_design_matrix(table: ResultsTable, coding: str = "zero_one", model: str = "quadratic"):
    """Intercept, coded main effects and (quadratic) all pairwise products.

    Returns ``(X, names)`` with names like ``"GB"`` and ``"GB:RRain"``.
    """
    if coding not in CODINGS:
        raise InvalidInputError(f"coding must be one of {CODINGS}, got {coding!r}")
    names = term_names(table.factors, model)
    coded = table.levels.astype(np.float64)
    if coding == "plus_minus":
        coded = 2.0 * coded - 1.0
    cols = [np.ones(len(coded)), *coded.T]
    if model == "quadratic":
        if len(table.factors) < 2:
            raise InvalidInputError("the quadratic model needs at least two factors")
        cols += [coded[:, i] * coded[:, j] for i, j in itertools.combinations(range(len(table.factors)), 2)]
    return np.column_stack(cols), names


def design_results_table(design: Design, responses: dict) -> ResultsTable:
    return ResultsTable(design.factors, design.runs, responses)
