import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from dfsuite.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from dfsuite.core import read_feature_csv, write_wav, AudioClip
from conftest import make_bundle_dir


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Bundles, WAVs, and label CSVs shared by the CLI tests."""
    root = tmp_path_factory.mktemp("cliws")
    rng = np.random.default_rng(777)
    bundles = root / "bundles"
    bundles.mkdir()
    video_labels = {}
    for i in range(4):
        label = i % 2
        make_bundle_dir(
            bundles, f"vid{i}", n_frames=12, rng=rng,
            with_audio=False, blink_frames=(4, 5) if label else (),
            yaw_wobble=4.0 * label,
        )
        video_labels[f"vid{i}"] = label
    (root / "video_labels.csv").write_text(
        "video_id,label\n" + "".join(f"vid{i},{i % 2}\n" for i in range(4))
    )
    wavs = root / "wavs"
    wavs.mkdir()
    for i in range(4):
        label = i % 2
        freq = 440.0 if label == 0 else 1760.0
        t = np.arange(32000) / 16000.0
        tone = 0.5 * np.sin(2 * math.pi * freq * t) + rng.normal(0, 0.01, 32000)
        write_wav(AudioClip(samples=np.clip(tone, -1, 1), sample_rate=16000), wavs / f"clip{i}.wav")
    (root / "audio_labels.csv").write_text(
        "clip_id,label\n" + "".join(f"clip{i},{i % 2}\n" for i in range(4))
    )
    return root


def run(args):
    return main([str(a) for a in args])


@pytest.fixture(scope="module")
def extracted(workspace):
    """Feature CSV and audio index produced once for the train/fuse tests."""
    feat = workspace / "features.csv"
    rc = run(["extract-video", "--bundles", workspace / "bundles", "--out", feat,
              "--labels", workspace / "video_labels.csv"])
    assert rc == EXIT_OK
    audio_out = workspace / "audio"
    rc = run(["extract-audio", "--wavs", workspace / "wavs", "--out", audio_out,
              "--labels", workspace / "audio_labels.csv"])
    assert rc == EXIT_OK
    return feat, audio_out / "index.csv"


class TestExtractVideo:
    def test_csv_contents(self, workspace, extracted):
        feat, _ = extracted
        ds = read_feature_csv(feat)
        assert sorted(r.video_id for r in ds.rows) == [f"vid{i}" for i in range(4)]
        assert [r.label for r in sorted(ds.rows, key=lambda r: r.video_id)] == [0, 1, 0, 1]

    def test_manifest_written(self, workspace, extracted):
        feat, _ = extracted
        doc = json.loads((workspace / "features.csv.manifest.json").read_text())
        assert doc["command"] == "extract-video"
        assert len(doc["inputs"]) == 4
        assert all(len(v) == 64 for v in doc["inputs"].values())

    def test_rerun_byte_identical(self, workspace, extracted, tmp_path):
        feat, _ = extracted
        again = tmp_path / "features.csv"
        rc = run(["extract-video", "--bundles", workspace / "bundles", "--out", again,
                  "--labels", workspace / "video_labels.csv"])
        assert rc == EXIT_OK
        assert again.read_bytes() == feat.read_bytes()

    def test_missing_dir_is_data_error(self, tmp_path):
        rc = run(["extract-video", "--bundles", tmp_path / "nope", "--out", tmp_path / "o.csv"])
        assert rc == EXIT_DATA

    def test_config_file_and_flag_override(self, workspace, tmp_path):
        cfg = tmp_path / "dfsuite.cfg"
        cfg.write_text("stride = 11  # sparse sampling\n")
        out = tmp_path / "strided.csv"
        rc = run(["extract-video", "--config", cfg, "--bundles", workspace / "bundles",
                  "--out", out, "--labels", workspace / "video_labels.csv"])
        assert rc == EXIT_OK
        doc = json.loads((tmp_path / "strided.csv.manifest.json").read_text())
        assert doc["options"]["stride"] == 11
        rc = run(["extract-video", "--config", cfg, "--stride", "5",
                  "--bundles", workspace / "bundles", "--out", out,
                  "--labels", workspace / "video_labels.csv"])
        assert rc == EXIT_OK
        doc = json.loads((tmp_path / "strided.csv.manifest.json").read_text())
        assert doc["options"]["stride"] == 5


class TestExtractAudio:
    def test_index_and_matrices(self, workspace, extracted):
        _, index = extracted
        lines = index.read_text().strip().splitlines()
        assert lines[0] == "clip_id,path,label,rows,cols"
        assert len(lines) == 5
        for line in lines[1:]:
            clip_id, path, label, rows, cols = line.split(",")
            assert (index.parent / path).exists()
            assert rows == "128"

    def test_rerun_byte_identical(self, workspace, extracted, tmp_path):
        _, index = extracted
        rc = run(["extract-audio", "--wavs", workspace / "wavs", "--out", tmp_path,
                  "--labels", workspace / "audio_labels.csv"])
        assert rc == EXIT_OK
        assert (tmp_path / "index.csv").read_bytes() == index.read_bytes()
        for name in os.listdir(tmp_path):
            if name.endswith(".dfsm"):
                assert (tmp_path / name).read_bytes() == (index.parent / name).read_bytes()

    def test_empty_dir_is_data_error(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        rc = run(["extract-audio", "--wavs", empty, "--out", tmp_path / "o"])
        assert rc == EXIT_DATA


@pytest.fixture(scope="module")
def models(workspace, extracted):
    feat, index = extracted
    paths = {}
    for kind, extra in (
        ("ann", ["--epochs", "20"]),
        ("tree", []),
        ("forest", ["--estimators", "10"]),
        ("cnn", ["--epochs", "2"]),
    ):
        out = workspace / f"model_{kind}.json"
        data = index if kind == "cnn" else feat
        rc = run(["train", "--kind", kind, "--data", data, "--out", out, "--seed", "3", *extra])
        assert rc == EXIT_OK
        paths[kind] = out
    return paths


class TestTrainEvaluate:
    def test_models_written_with_manifests(self, workspace, models):
        for kind, path in models.items():
            assert path.exists()
            doc = json.loads(path.read_text())
            assert doc["kind"] == kind
            assert (workspace / f"model_{kind}.json.manifest.json").exists()

    def test_train_deterministic(self, workspace, extracted, models, tmp_path):
        feat, _ = extracted
        out = tmp_path / "tree2.json"
        rc = run(["train", "--kind", "tree", "--data", feat, "--out", out, "--seed", "3"])
        assert rc == EXIT_OK
        assert out.read_bytes() == models["tree"].read_bytes()

    def test_history_csv(self, workspace, extracted, tmp_path):
        feat, _ = extracted
        hist = tmp_path / "hist.csv"
        rc = run(["train", "--kind", "ann", "--data", feat, "--out", tmp_path / "m.json",
                  "--epochs", "3", "--history", hist])
        assert rc == EXIT_OK
        lines = hist.read_text().strip().splitlines()
        assert lines[0] == "epoch,loss,accuracy"
        assert len(lines) == 4

    def test_evaluate_json_report(self, workspace, extracted, models, tmp_path):
        feat, _ = extracted
        out = tmp_path / "report.json"
        rc = run(["evaluate", "--model", models["tree"], "--data", feat, "--json-out", out])
        assert rc == EXIT_OK
        doc = json.loads(out.read_text())
        assert set(doc) == {"confusion", "accuracy", "per_class", "macro", "weighted"}
        assert doc["accuracy"] == 1.0  # tiny separable training set

    def test_evaluate_cnn_on_audio_index(self, extracted, models):
        _, index = extracted
        rc = run(["evaluate", "--model", models["cnn"], "--data", index])
        assert rc == EXIT_OK

    def test_bad_kind_is_usage_error(self, extracted, tmp_path):
        feat, _ = extracted
        rc = run(["train", "--kind", "svm", "--data", feat, "--out", tmp_path / "m.json"])
        assert rc == EXIT_USAGE


class TestFuseImportance:
    def test_fuse_outputs(self, workspace, extracted, models, tmp_path):
        feat, index = extracted
        prefix = tmp_path / "fused"
        rc = run(["fuse", "--video-model", models["tree"], "--audio-model", models["cnn"],
                  "--video-data", feat, "--audio-data", index,
                  "--out-prefix", prefix, "--seed", "9"])
        assert rc == EXIT_OK
        pairs = (tmp_path / "fused.pairs.csv").read_text().strip().splitlines()
        assert pairs[0] == "video_id,audio_id,video_label,audio_label,category"
        assert len(pairs) == 5  # min(4, 4) samples
        summary = json.loads((tmp_path / "fused.summary.json").read_text())
        assert set(summary["per_category"]) == {
            "real-real", "real-deepfake", "deepfake-real", "deepfake-deepfake"
        }
        assert 0.0 <= summary["overall_accuracy"] <= 1.0

    def test_fuse_deterministic(self, workspace, extracted, models, tmp_path):
        feat, index = extracted
        outs = []
        for name in ("a", "b"):
            prefix = tmp_path / name
            rc = run(["fuse", "--video-model", models["tree"], "--audio-model", models["cnn"],
                      "--video-data", feat, "--audio-data", index,
                      "--out-prefix", prefix, "--seed", "9"])
            assert rc == EXIT_OK
            outs.append((tmp_path / f"{name}.verdicts.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_fuse_with_explicit_pairs(self, workspace, extracted, models, tmp_path):
        feat, index = extracted
        pairs = tmp_path / "pairs.csv"
        pairs.write_text(
            "video_id,audio_id,video_label,audio_label\n"
            "vid0,clip0,0,0\nvid1,clip1,1,1\n"
        )
        rc = run(["fuse", "--video-model", models["tree"], "--audio-model", models["cnn"],
                  "--video-data", feat, "--audio-data", index, "--pairs", pairs,
                  "--out-prefix", tmp_path / "p"])
        assert rc == EXIT_OK
        cats = (tmp_path / "p.categories.csv").read_text()
        assert "real-real,1" in cats

    def test_importance_csv(self, workspace, extracted, models, tmp_path):
        feat, _ = extracted
        out = tmp_path / "imp.csv"
        rc = run(["importance", "--model", models["forest"], "--data", feat, "--out", out])
        assert rc == EXIT_OK
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "feature,importance"
        assert len(lines) == 14

    def test_importance_rejects_cnn(self, extracted, models, tmp_path):
        _, index = extracted
        rc = run(["importance", "--model", models["cnn"], "--data", index])
        assert rc == EXIT_DATA


class TestEntryPoints:
    def test_usage_error_exit_code(self):
        assert main([]) == EXIT_USAGE
        assert main(["extract-video"]) == EXIT_USAGE

    def test_console_script(self):
        proc = subprocess.run(
            [sys.executable, "-m", "dfsuite.cli", "--version"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.strip()
