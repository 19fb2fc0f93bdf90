"""Command-line surface: extract-video, extract-audio, train, evaluate,
fuse, importance.

Conventions: logs go to stderr, data to files or stdout. Every command
writes a `<output>.manifest.json` recording the tool version, resolved
options, seed, and SHA-256 digests of the inputs, so identical manifests
imply byte-identical outputs. Exit codes: 0 success, 1 usage, 2 data
error, 3 numeric failure.

A config file (plain `key = value` lines, '#' comments) may supply any
long-option default; explicit flags win.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__
from .audio import MelParams, mel_spectrogram
from .core import (
    FEATURE_NAMES,
    make_rng,
    read_feature_csv,
    read_landmark_bundle,
    read_wav,
    write_feature_csv,
)
from .errors import DataError, NumericError
from .features import DEFAULT_STRIDE, extract_video_features
from .fusion import ModalityVerdict, PairedSample, assemble_fourway, evaluate_multimodal, fuse
from .learn import (
    AnnConfig,
    CnnConfig,
    ForestConfig,
    TreeConfig,
    ann_train,
    classification_report,
    cnn_train,
    fix_frames,
    forest_train,
    format_report,
    load_model,
    permutation_importance,
    save_model,
    tree_train,
)
from .matrixio import read_matrix, write_matrix

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_path: str, args: argparse.Namespace, inputs: list[str]) -> None:
    opts = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "config")}
    doc = {
        "tool_version": __version__,
        "command": args.command,
        "options": opts,
        "option_hash": hashlib.sha256(
            json.dumps(opts, sort_keys=True, default=str).encode()
        ).hexdigest(),
        "inputs": {os.path.basename(p): _sha256(p) for p in sorted(inputs)},
    }
    with open(out_path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True, default=str)
        fh.write("\n")


def _read_labels(path: str | None) -> dict[str, int]:
    if path is None:
        return {}
    labels = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0] in ("id", "video_id", "clip_id"):
                continue
            labels[rec[0]] = int(rec[1])
    return labels


# -- extract-video --------------------------------------------------------

def cmd_extract_video(args) -> int:
    paths = sorted(
        os.path.join(args.bundles, f)
        for f in os.listdir(args.bundles)
        if f.endswith(".json") and not f.endswith(".manifest.json")
    )
    if not paths:
        raise DataError(f"no bundle JSON files in {args.bundles}")
    labels = _read_labels(args.labels)
    rows, failures = [], 0
    for path in paths:
        try:
            bundle = read_landmark_bundle(path)
            vec, log = extract_video_features(
                bundle, path, stride=args.stride, label=labels.get(bundle.video_id)
            )
            rows.append(vec)
            if log.degenerate_texture_blocks:
                _log(f"{bundle.video_id}: {log.degenerate_texture_blocks} degenerate texture blocks")
            for note in log.notes:
                _log(f"{bundle.video_id}: {note}")
        except (DataError, NumericError) as exc:
            failures += 1
            _log(f"skipping {path}: {exc}")
    if not rows:
        raise DataError(f"all {failures} bundles failed")
    write_feature_csv(rows, args.out)
    _write_manifest(args.out, args, paths)
    _log(f"wrote {len(rows)} rows to {args.out} ({failures} skipped)")
    return EXIT_OK


# -- extract-audio --------------------------------------------------------

def cmd_extract_audio(args) -> int:
    paths = sorted(
        os.path.join(args.wavs, f) for f in os.listdir(args.wavs) if f.endswith(".wav")
    )
    if not paths:
        raise DataError(f"no WAV files in {args.wavs}")
    labels = _read_labels(args.labels)
    os.makedirs(args.out, exist_ok=True)
    params = MelParams(frame_size=args.frame_size, hop=args.hop, n_bands=args.bands)
    index_rows, failures = [], 0
    for path in paths:
        clip_id = os.path.splitext(os.path.basename(path))[0]
        try:
            spec = mel_spectrogram(read_wav(path), params)
        except (DataError, NumericError) as exc:
            failures += 1
            _log(f"skipping {path}: {exc}")
            continue
        out_path = os.path.join(args.out, clip_id + ".dfsm")
        write_matrix(spec.values, out_path)
        label = labels.get(clip_id)
        index_rows.append(
            [clip_id, clip_id + ".dfsm", "" if label is None else str(label),
             str(spec.values.shape[0]), str(spec.values.shape[1])]
        )
    if not index_rows:
        raise DataError(f"all {failures} clips failed")
    index_path = os.path.join(args.out, "index.csv")
    with open(index_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["clip_id", "path", "label", "rows", "cols"])
        w.writerows(index_rows)
    _write_manifest(index_path, args, paths)
    _log(f"wrote {len(index_rows)} spectrograms to {args.out} ({failures} skipped)")
    return EXIT_OK


def _load_audio_index(index_path: str):
    base = os.path.dirname(os.path.abspath(index_path))
    ids, mats, labels = [], [], []
    with open(index_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            ids.append(rec["clip_id"])
            mats.append(read_matrix(os.path.join(base, rec["path"])))
            labels.append(int(rec["label"]) if rec["label"] != "" else None)
    return ids, mats, labels


# -- train ----------------------------------------------------------------

def cmd_train(args) -> int:
    rng = make_rng(args.seed)
    inputs = [args.data]
    if args.kind in ("ann", "tree", "forest"):
        ds = read_feature_csv(args.data)
        X, y = ds.matrix(), ds.labels()
        if args.kind == "ann":
            config = AnnConfig(epochs=args.epochs, learning_rate=args.learning_rate)
            model = ann_train(X, y, config, rng, seed=args.seed)
        elif args.kind == "tree":
            model = tree_train(X, y, TreeConfig(max_depth=args.max_depth), rng, seed=args.seed)
        else:
            model = forest_train(
                X, y, ForestConfig(n_estimators=args.estimators, max_depth=args.max_depth),
                rng, seed=args.seed,
            )
        preds = model.predict(X)
    elif args.kind == "cnn":
        ids, mats, labels = _load_audio_index(args.data)
        if any(l is None for l in labels):
            raise DataError("cnn training needs labels for every clip in the index")
        config = CnnConfig(epochs=args.epochs, learning_rate=args.learning_rate)
        X = np.stack([fix_frames(m, config.input_shape[1]) for m in mats])
        y = np.array(labels)
        model = cnn_train(X, y, config, rng, seed=args.seed)
        preds = model.predict(X)
    else:
        raise DataError(f"unknown model kind {args.kind!r}")
    save_model(model, args.out)
    history = getattr(model, "history", [])
    if args.history and history:
        with open(args.history, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["epoch", "loss", "accuracy"])
            for epoch, loss, acc in history:
                w.writerow([epoch, repr(loss), repr(acc)])
    _write_manifest(args.out, args, inputs)
    print(format_report(classification_report(y, preds)))
    return EXIT_OK


# -- evaluate ---------------------------------------------------------------

def _model_probs(model, args_data: str):
    kind = type(model).__name__
    if kind == "CnnModel":
        ids, mats, labels = _load_audio_index(args_data)
        X = np.stack([fix_frames(m, model.config.input_shape[1]) for m in mats])
        y = None if any(l is None for l in labels) else np.array(labels)
        return ids, model.predict_proba(X), y
    ds = read_feature_csv(args_data)
    ids = [r.video_id for r in ds.rows]
    y = ds.labels() if all(r.label is not None for r in ds.rows) else None
    return ids, model.predict_proba(ds.matrix()), y


def cmd_evaluate(args) -> int:
    model = load_model(args.model)
    ids, probs, y = _model_probs(model, args.data)
    if y is None:
        raise DataError("evaluation data must be fully labeled")
    report = classification_report(y, (probs >= 0.5).astype(int))
    print(format_report(report))
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump(report.as_dict(), fh, indent=1, sort_keys=True)
            fh.write("\n")
        _write_manifest(args.json_out, args, [args.model, args.data])
    return EXIT_OK


# -- fuse -------------------------------------------------------------------

def _read_pairs(path: str) -> list[PairedSample]:
    samples = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            samples.append(
                PairedSample(
                    video_id=rec["video_id"],
                    audio_id=rec["audio_id"],
                    video_label=int(rec["video_label"]),
                    audio_label=int(rec["audio_label"]),
                )
            )
    return samples


def _write_pairs(samples: list[PairedSample], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["video_id", "audio_id", "video_label", "audio_label", "category"])
        for s in samples:
            w.writerow([s.video_id, s.audio_id, s.video_label, s.audio_label, s.category])


def cmd_fuse(args) -> int:
    video_model = load_model(args.video_model)
    audio_model = load_model(args.audio_model)
    v_ids, v_probs, _ = _model_probs(video_model, args.video_data)
    a_ids, a_probs, _ = _model_probs(audio_model, args.audio_data)
    video_probs = dict(zip(v_ids, v_probs))
    audio_probs = dict(zip(a_ids, a_probs))

    if args.pairs:
        samples = _read_pairs(args.pairs)
    else:
        ds = read_feature_csv(args.video_data)
        videos = [(r.video_id, r.label) for r in ds.rows if r.label is not None]
        ids, _mats, labels = _load_audio_index(args.audio_data)
        audios = [(i, l) for i, l in zip(ids, labels) if l is not None]
        samples = assemble_fourway(videos, audios, make_rng(args.seed))
        _write_pairs(samples, args.out_prefix + ".pairs.csv")

    results, accuracy = evaluate_multimodal(samples, video_probs, audio_probs)
    with open(args.out_prefix + ".categories.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["category", "samples", "correct", "strict_correct"])
        for r in results:
            w.writerow([r.category, r.samples, r.correct, r.strict_correct])
    with open(args.out_prefix + ".verdicts.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            ["video_id", "audio_id", "category", "video_prob", "audio_prob",
             "combined_label", "truth_label"]
        )
        for s in samples:
            verdict = fuse(
                ModalityVerdict(float(video_probs[s.video_id]), "video"),
                ModalityVerdict(float(audio_probs[s.audio_id]), "audio"),
            )
            w.writerow(
                [s.video_id, s.audio_id, s.category,
                 repr(float(video_probs[s.video_id])), repr(float(audio_probs[s.audio_id])),
                 verdict.combined_label, s.truth_label]
            )
    summary = {
        "overall_accuracy": accuracy,
        "per_category": {
            r.category: {
                "samples": r.samples,
                "correct": r.correct,
                "accuracy": r.correct / r.samples if r.samples else 0.0,
            }
            for r in results
        },
    }
    with open(args.out_prefix + ".summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True)
        fh.write("\n")
    inputs = [args.video_model, args.audio_model, args.video_data]
    _write_manifest(args.out_prefix + ".summary.json", args, inputs)
    print(f"overall accuracy: {accuracy:.4f}")
    for r in results:
        print(f"{r.category}: {r.correct}/{r.samples}")
    return EXIT_OK


# -- importance ---------------------------------------------------------------

def cmd_importance(args) -> int:
    model = load_model(args.model)
    if type(model).__name__ == "CnnModel":
        raise DataError("importance supports feature-vector models (ann/tree/forest)")
    ds = read_feature_csv(args.data)
    scores = permutation_importance(model, ds.matrix(), ds.labels(), make_rng(args.seed))
    for name, score in scores:
        print(f"{name}: {score:.6f}")
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["feature", "importance"])
            for name, score in scores:
                w.writerow([name, repr(score)])
        _write_manifest(args.out, args, [args.model, args.data])
    return EXIT_OK


# -- parser -------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _log(f"error: {message}")
        raise SystemExit(EXIT_USAGE)


def _read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DataError(f"{path}: bad config line {line!r}")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def build_parser() -> _Parser:
    p = _Parser(prog="dfsuite", description="Multimodal deepfake-detection toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key=value config file; flags override")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("extract-video", help="landmark bundles -> feature CSV")
    common(sp)
    sp.add_argument("--bundles", required=True, help="directory of bundle JSON files")
    sp.add_argument("--out", required=True, help="output feature CSV")
    sp.add_argument("--stride", type=int, default=DEFAULT_STRIDE)
    sp.add_argument("--labels", help="CSV of video_id,label")
    sp.set_defaults(func=cmd_extract_video)

    sp = sub.add_parser("extract-audio", help="WAV directory -> mel-spectrogram matrices")
    common(sp)
    sp.add_argument("--wavs", required=True)
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--frame-size", type=int, default=2048, dest="frame_size")
    sp.add_argument("--hop", type=int, default=512)
    sp.add_argument("--bands", type=int, default=128)
    sp.add_argument("--labels", help="CSV of clip_id,label")
    sp.set_defaults(func=cmd_extract_audio)

    sp = sub.add_parser("train", help="train a classifier")
    common(sp)
    sp.add_argument("--kind", required=True, choices=["ann", "cnn", "tree", "forest"])
    sp.add_argument("--data", required=True, help="feature CSV (ann/tree/forest) or audio index CSV (cnn)")
    sp.add_argument("--out", required=True, help="output model JSON")
    sp.add_argument("--epochs", type=int, default=200)
    sp.add_argument("--learning-rate", type=float, default=0.01, dest="learning_rate")
    sp.add_argument("--max-depth", type=int, default=8, dest="max_depth")
    sp.add_argument("--estimators", type=int, default=100)
    sp.add_argument("--history", help="per-epoch history CSV")
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("evaluate", help="classification report on labeled data")
    common(sp)
    sp.add_argument("--model", required=True)
    sp.add_argument("--data", required=True)
    sp.add_argument("--json-out", dest="json_out")
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("fuse", help="OR-rule multimodal evaluation")
    common(sp)
    sp.add_argument("--video-model", required=True, dest="video_model")
    sp.add_argument("--audio-model", required=True, dest="audio_model")
    sp.add_argument("--video-data", required=True, dest="video_data", help="labeled feature CSV")
    sp.add_argument("--audio-data", required=True, dest="audio_data", help="labeled audio index CSV")
    sp.add_argument("--pairs", help="existing paired-sample CSV; omit to assemble four-way pairs")
    sp.add_argument("--out-prefix", required=True, dest="out_prefix")
    sp.set_defaults(func=cmd_fuse)

    sp = sub.add_parser("importance", help="permutation feature importance")
    common(sp)
    sp.add_argument("--model", required=True)
    sp.add_argument("--data", required=True, help="labeled feature CSV")
    sp.add_argument("--out", help="importance CSV")
    sp.set_defaults(func=cmd_importance)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            config = _read_config(args.config)
            explicit = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
            for key, value in config.items():
                if key in explicit or not hasattr(args, key):
                    continue
                current = getattr(args, key)
                cast = type(current) if current is not None else str
                setattr(args, key, cast(value))
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (DataError, OSError) as exc:
        _log(f"data error: {exc}")
        return EXIT_DATA
    except NumericError as exc:
        _log(f"numeric error: {exc}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
