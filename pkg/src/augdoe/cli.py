"""Command line entry point: augment, plan, analyze, eval, select."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from augdoe import __version__
from augdoe.augment.pipeline import DEFAULT_SEED, Pipeline, load_pipeline, run_pipeline
from augdoe.doe import CODINGS, MODELS, bundled_results, generate_design, read_results, write_manifest
from augdoe.errors import AugDoeError, SingularDesignError
from augdoe.imgcore.io import IMAGE_SUFFIXES, read_image, read_label_map, write_image
from augdoe.regstats.analysis import RESPONSE_ALIASES, analyze, golden_for, load_goldens, match_golden
from augdoe.segmetrics import (
    CITYSCAPES_CLASS_NAMES,
    IGNORE_INDEX,
    SYNTHIA16_CLASSES,
    ConfusionMatrix,
    accumulate,
    iou_per_class,
    miou,
    read_checkpoint_log,
    select_checkpoint,
)

EXIT_OK = 0
EXIT_ITEM_ERRORS = 1
EXIT_USAGE = 2

# flags that change how work is scheduled but never what is computed
_SCHEDULING_FLAGS = {"workers"}


def _metadata(command: str, args: argparse.Namespace, **extra) -> dict:
    params = {}
    for k, v in sorted(vars(args).items()):
        if k in ("func", "command") or k in _SCHEDULING_FLAGS:
            continue
        params[k] = str(v) if isinstance(v, Path) else v
    return {"tool": "augdoe", "version": __version__, "command": command, "params": params, **extra}


def _write_json(path: Path, doc) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _worker_count(requested: int | None) -> int:
    n = requested or os.cpu_count() or 1
    cap = os.environ.get("AUGDOE_THREADS")
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def _list_images(directory: Path) -> list[Path]:
    # lexicographic order of file names fixes each image's index
    return sorted((p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES),
                  key=lambda p: p.name)


def _err(msg: str) -> None:
    print(f"augdoe: error: {msg}", file=sys.stderr)


# augment

def _augment_one(pipeline: Pipeline, index: int, src: Path, out_dir: Path) -> dict:
    item = {"index": index, "input": src.name}
    try:
        img = read_image(src)
        out, records = run_pipeline(pipeline, img, index)
        dst = out_dir / src.name
        write_image(out, dst)
        item.update(output=dst.name, stages=records)
    except AugDoeError as exc:
        item["error"] = str(exc)
    return item


def cmd_augment(args) -> int:
    in_dir, out_dir = Path(args.in_dir), Path(args.out)
    if not in_dir.is_dir():
        _err(f"input directory {in_dir} does not exist")
        return EXIT_USAGE
    if args.pipeline:
        pipeline = load_pipeline(args.pipeline, seed=args.seed)
    else:
        pipeline = Pipeline(args.seed if args.seed is not None else DEFAULT_SEED, ())
    out_dir.mkdir(parents=True, exist_ok=True)
    files = _list_images(in_dir)
    with ThreadPoolExecutor(max_workers=_worker_count(args.workers)) as pool:
        items = list(pool.map(lambda ip: _augment_one(pipeline, ip[0], ip[1], out_dir), enumerate(files)))
    errors = [it for it in items if "error" in it]
    # the manifest lives in out_dir, so out_dir itself is not recorded
    meta = _metadata("augment", args)
    meta["params"].pop("out", None)
    manifest = {"metadata": meta, "pipeline": pipeline.to_dict(), "images": items, "errors": len(errors)}
    _write_json(out_dir / args.manifest, manifest)
    for it in errors:
        _err(f"{it['input']}: {it['error']}")
    print(f"augmented {len(items) - len(errors)}/{len(items)} images into {out_dir}")
    return EXIT_ITEM_ERRORS if errors else EXIT_OK


# plan

def _split_names(values) -> list[str]:
    names = []
    for v in values:
        names += [s.strip() for s in v.split(",") if s.strip()]
    return names


def cmd_plan(args) -> int:
    factors = _split_names(args.factors)
    seed = args.seed if args.seed is not None else 0
    design = generate_design(factors, seed=seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_manifest(design, out)
    meta = _metadata("plan", args, factors=list(design.factors), seed_used=seed, runs=design.num_runs)
    _write_json(out.with_name(out.name + ".meta.json"), {"metadata": meta})
    print(f"wrote {design.num_runs}-run plan for {len(factors)} factor(s) to {out}")
    return EXIT_OK


# analyze

def _resolve_analysis(table, response, model, coding):
    """Pick the fitted analysis plus an optional golden comparison block."""
    golden = golden_for(response) if model == "quadratic" else None
    responses = RESPONSE_ALIASES.get(response, (response,))
    codings = CODINGS if coding == "auto" else (coding,)
    if golden is not None and set(load_goldens()[golden]["responses"]) >= set(responses):
        match = match_golden(table, golden, responses=responses, codings=codings)
        return match.best, match.to_dict(), match.to_text()
    if len(responses) > 1:
        raise AugDoeError(f"response {response!r} is ambiguous between {list(responses)}; name one")
    # no published table to arbitrate between codings: the first listed is used
    return analyze(table, responses[0], model, codings[0]), None, None


def cmd_analyze(args) -> int:
    if args.results:
        table = read_results(args.results)
        source = str(args.results)
    else:
        table = bundled_results()
        source = "bundled:ffd_results.csv"
    try:
        best, comparison, comparison_text = _resolve_analysis(table, args.response, args.model, args.coding)
    except SingularDesignError as exc:
        _err(f"singular design: {exc}")
        return EXIT_USAGE
    meta = _metadata("analyze", args, source=source, resolved_response=best.response, resolved_coding=best.coding)
    doc = {"metadata": meta, **best.to_dict()}
    if comparison is not None:
        doc["golden_comparison"] = comparison
    header = "# " + " ".join(f"{k}={v}" for k, v in meta["params"].items()) + f" source={source}\n"
    text = header + best.to_text() + (comparison_text or "")
    if args.out:
        out = Path(args.out)
        _write_json(out.with_suffix(".json"), doc)
        out.with_suffix(".txt").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


# eval

def _parse_classes(spec: str | None, num_classes: int):
    if spec is None:
        return None
    if spec.lower() == "synthia16":
        return list(SYNTHIA16_CLASSES)
    classes = [int(c) for c in spec.split(",") if c.strip()]
    bad = [c for c in classes if not 0 <= c < num_classes]
    if bad:
        raise AugDoeError(f"class ids {bad} outside [0, {num_classes})")
    return classes


def _eval_pair(pred: Path, truth: Path, num_classes: int):
    try:
        cm = accumulate(ConfusionMatrix(num_classes), read_label_map(truth), read_label_map(pred))
        return pred.name, cm, None
    except AugDoeError as exc:
        return pred.name, None, str(exc)


def cmd_eval(args) -> int:
    pred_dir, truth_dir = Path(args.pred_dir), Path(args.truth_dir)
    for d in (pred_dir, truth_dir):
        if not d.is_dir():
            _err(f"directory {d} does not exist")
            return EXIT_USAGE
    classes = _parse_classes(args.classes, args.num_classes)
    preds = {p.name: p for p in _list_images(pred_dir)}
    truths = {p.name: p for p in _list_images(truth_dir)}
    unmatched = sorted(set(preds) ^ set(truths))
    if unmatched:
        _err("unmatched files: " + ", ".join(unmatched))
        return EXIT_ITEM_ERRORS
    names = sorted(preds)
    with ThreadPoolExecutor(max_workers=_worker_count(args.workers)) as pool:
        results = list(pool.map(lambda n: _eval_pair(preds[n], truths[n], args.num_classes), names))
    total = ConfusionMatrix(args.num_classes)
    errors = {}
    for name, cm, error in results:
        if error:
            errors[name] = error
        else:
            total = total + cm
    mean, per_class = miou(total, classes)
    ids = classes if classes is not None else list(range(args.num_classes))
    label = (lambda c: CITYSCAPES_CLASS_NAMES[c]) if args.num_classes == len(CITYSCAPES_CLASS_NAMES) else str
    iou = iou_per_class(total)
    doc = {
        "metadata": _metadata("eval", args, ignore_index=IGNORE_INDEX),
        "files": len(names),
        "miou": mean,
        "per_class": [{"id": c, "name": label(c), "iou": v} for c, v in zip(ids, per_class)],
        "all_classes_iou": [None if np.isnan(v) else float(v) for v in iou],
        "errors": errors,
    }
    if args.out:
        _write_json(Path(args.out), doc)
    for name, msg in errors.items():
        _err(f"{name}: {msg}")
    print(f"mIoU {mean:.4f} over {len(names) - len(errors)} file(s)")
    return EXIT_ITEM_ERRORS if errors else EXIT_OK


# select

def cmd_select(args) -> int:
    log = read_checkpoint_log(args.log)
    target = args.target
    if target is None:
        if len(log.targets) != 1:
            _err(f"--target is required when the log has {len(log.targets)} target columns {log.targets}")
            return EXIT_USAGE
        target = log.targets[0]
    if target not in log.targets:
        _err(f"target column {target!r} missing; log has {log.targets}")
        return EXIT_USAGE
    by_epoch = {e.epoch: e for e in log.entries}
    modes = ("I", "II") if args.mode == "both" else (args.mode,)
    report = {}
    for mode in modes:
        epoch = select_checkpoint(log, mode, target)
        e = by_epoch[epoch]
        report[mode] = {"epoch": epoch, "source_val_miou": e.source_val_miou, "target_miou": e.target_mious[target]}
        print(f"mode {mode:<2} epoch {epoch}  source_val_miou {e.source_val_miou:.4f}  "
              f"{target} {e.target_mious[target]:.4f}")
    if args.out:
        _write_json(Path(args.out), {"metadata": _metadata("select", args, target_used=target), "selection": report})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="augdoe", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("augment", help="apply a seeded augmentation pipeline to a directory of images")
    p.add_argument("in_dir")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--pipeline", help="pipeline JSON; omitted means no stages")
    p.add_argument("--seed", type=int, default=None, help=f"master seed (default: pipeline file, else {DEFAULT_SEED})")
    p.add_argument("--workers", type=int, default=None, help="worker threads (capped by AUGDOE_THREADS)")
    p.add_argument("--manifest", default="manifest.json", help="manifest file name inside --out")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("plan", help="write a randomized two-level full factorial manifest")
    p.add_argument("factors", nargs="+", help="factor names, space or comma separated")
    p.add_argument("--seed", type=int, default=None, help="run-order seed (default 0)")
    p.add_argument("--out", required=True, help="manifest CSV path")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("analyze", help="fit the factorial regression and report coefficient tests")
    p.add_argument("results", nargs="?", help="results CSV (default: bundled factorial results)")
    p.add_argument("--response", default="synthia_ii")
    p.add_argument("--model", choices=MODELS, default="quadratic")
    p.add_argument("--coding", choices=(*CODINGS, "auto"), default="auto",
                   help="factor coding; auto fits both and keeps the one matching published values")
    p.add_argument("--out", help="report path prefix; writes <out>.json and <out>.txt")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("eval", help="mean IoU of predicted label maps against ground truth")
    p.add_argument("pred_dir")
    p.add_argument("truth_dir")
    p.add_argument("--classes", help="comma list of class ids, or 'synthia16'")
    p.add_argument("--num-classes", type=int, default=len(CITYSCAPES_CLASS_NAMES))
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", help="JSON report path")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("select", help="pick checkpoints by source validation (II) or target (I) mIoU")
    p.add_argument("log", help="CSV: epoch,source_val_miou,<target>...")
    p.add_argument("--target")
    p.add_argument("--mode", choices=("I", "II", "both"), default="both")
    p.add_argument("--out", help="JSON report path")
    p.set_defaults(func=cmd_select)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AugDoeError, OSError) as exc:
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
