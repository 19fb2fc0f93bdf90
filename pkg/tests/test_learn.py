import math

import numpy as np
import pytest

from dfsuite.core import Dataset, FEATURE_NAMES, VideoFeatureVector, make_rng
from dfsuite.errors import DataError
from dfsuite.learn import (
    AnnConfig,
    CnnConfig,
    ForestConfig,
    TreeConfig,
    ann_gradients,
    ann_train,
    bce_loss,
    classification_report,
    cnn_gradients,
    cnn_train,
    fix_frames,
    forest_train,
    format_report,
    init_ann,
    init_cnn,
    load_model,
    permutation_importance,
    relu,
    save_model,
    sigmoid,
    smote,
    train_test_split,
    tree_train,
)


def make_dataset(n0, n1, rng, spread=0.6, gap=3.0):
    # centers kept positive so blink_count/contrast validation holds
    rows = []
    for label, n in ((0, n0), (1, n1)):
        center = np.full(13, 2.0 if label == 0 else 2.0 + gap)
        for i in range(n):
            rows.append(
                VideoFeatureVector(
                    video_id=f"v{label}-{i}",
                    values=np.abs(center + rng.normal(0, spread, 13)),
                    label=label,
                )
            )
    return Dataset(rows=tuple(rows))


class TestLosses:
    def test_sigmoid_values(self):
        assert sigmoid(0.0) == 0.5
        assert abs(sigmoid(1.0) - 0.7310585786300049) < 1e-12
        assert abs(sigmoid(-1.0) - (1 - 0.7310585786300049)) < 1e-12

    def test_sigmoid_stable_at_extremes(self):
        assert sigmoid(1000.0) == 1.0
        assert sigmoid(-1000.0) == 0.0
        z = np.array([-1000.0, 0.0, 1000.0])
        assert np.all(np.isfinite(sigmoid(z)))

    def test_relu(self):
        assert np.array_equal(relu(np.array([-2.0, 0.0, 3.0])), [0.0, 0.0, 3.0])

    def test_bce_uninformative_is_ln2(self):
        y = np.array([0.0, 1.0, 0.0, 1.0])
        assert abs(bce_loss(y, np.full(4, 0.5)) - math.log(2)) < 1e-12

    def test_bce_perfect_is_tiny(self):
        y = np.array([0.0, 1.0])
        assert bce_loss(y, np.array([0.0, 1.0])) < 1e-10

    def test_bce_hand_value(self):
        # -(log 0.8 + log 0.7) / 2
        y = np.array([1.0, 0.0])
        p = np.array([0.8, 0.3])
        want = -(math.log(0.8) + math.log(0.7)) / 2
        assert abs(bce_loss(y, p) - want) < 1e-12


class TestSplit:
    def test_counts_per_class(self, rng):
        ds = make_dataset(10, 10, rng)
        train, test = train_test_split(ds, 0.8, make_rng(7))
        assert train.class_counts == {0: 8, 1: 8}
        assert test.class_counts == {0: 2, 1: 2}

    def test_partition(self, rng):
        ds = make_dataset(13, 7, rng)
        train, test = train_test_split(ds, 0.8, make_rng(7))
        all_ids = {r.video_id for r in ds.rows}
        train_ids = {r.video_id for r in train.rows}
        test_ids = {r.video_id for r in test.rows}
        assert train_ids | test_ids == all_ids
        assert not (train_ids & test_ids)

    def test_deterministic(self, rng):
        ds = make_dataset(12, 8, rng)
        a = train_test_split(ds, 0.8, make_rng(42))
        b = train_test_split(ds, 0.8, make_rng(42))
        assert [r.video_id for r in a[0].rows] == [r.video_id for r in b[0].rows]

    def test_tiny_class_rejected(self, rng):
        ds = make_dataset(5, 1, rng)
        with pytest.raises(DataError, match="fewer than 2"):
            train_test_split(ds, 0.8, make_rng(0))

    def test_bad_ratio(self, rng):
        ds = make_dataset(4, 4, rng)
        with pytest.raises(DataError, match="ratio"):
            train_test_split(ds, 1.5, make_rng(0))


class TestSmote:
    def test_balances_classes(self, rng):
        ds = make_dataset(30, 10, rng)
        out = smote(ds, k=5, rng=make_rng(1))
        assert out.class_counts == {0: 30, 1: 30}

    def test_original_rows_preserved(self, rng):
        ds = make_dataset(20, 8, rng)
        out = smote(ds, k=5, rng=make_rng(1))
        assert out.rows[: len(ds.rows)] == ds.rows

    def test_synthetic_on_minority_segments(self, rng):
        ds = make_dataset(25, 9, rng)
        out = smote(ds, k=5, rng=make_rng(3))
        minority = np.array([r.values for r in ds.rows if r.label == 1])
        for row in out.rows[len(ds.rows) :]:
            assert row.label == 1
            x = np.asarray(row.values)
            # x must lie on a segment between two distinct minority rows
            on_segment = False
            for i in range(len(minority)):
                for j in range(len(minority)):
                    if i == j:
                        continue
                    d = minority[j] - minority[i]
                    u = float((x - minority[i]) @ d) / float(d @ d)
                    if -1e-9 <= u <= 1 + 1e-9 and np.allclose(minority[i] + u * d, x, atol=1e-9):
                        on_segment = True
                        break
                if on_segment:
                    break
            assert on_segment

    def test_already_balanced_noop(self, rng):
        ds = make_dataset(10, 10, rng)
        assert smote(ds, rng=make_rng(0)) is ds

    def test_too_few_minority_rows(self, rng):
        ds = make_dataset(20, 4, rng)
        with pytest.raises(DataError, match="k\\+1"):
            smote(ds, k=5, rng=make_rng(0))

    def test_deterministic(self, rng):
        ds = make_dataset(18, 7, rng)
        a = smote(ds, rng=make_rng(9))
        b = smote(ds, rng=make_rng(9))
        assert all(np.array_equal(x.values, y.values) for x, y in zip(a.rows, b.rows))


class TestAnn:
    def test_forward_matches_matrix_arithmetic(self, rng):
        model = init_ann(13, AnnConfig(hidden=(5, 4)), make_rng(2))
        X = rng.normal(size=(6, 13))
        h = X
        for w, b in zip(model.weights[:-1], model.biases[:-1]):
            h = np.maximum(h @ w + b, 0.0)
        want = 1.0 / (1.0 + np.exp(-(h @ model.weights[-1] + model.biases[-1])))
        assert np.allclose(model.forward(X), want.ravel(), atol=1e-12)

    def test_gradient_check(self, rng):
        model = init_ann(4, AnnConfig(hidden=(6, 5)), make_rng(3))
        X = rng.normal(size=(8, 4))
        y = rng.integers(0, 2, 8).astype(float)
        _, gw, gb = ann_gradients(model, X, y)
        eps = 1e-6
        for params, grads in ((model.weights, gw), (model.biases, gb)):
            for p, g in zip(params, grads):
                flat = p.reshape(-1)
                for idx in rng.choice(flat.size, size=min(10, flat.size), replace=False):
                    orig = flat[idx]
                    flat[idx] = orig + eps
                    hi = bce_loss(y, model.forward(X))
                    flat[idx] = orig - eps
                    lo = bce_loss(y, model.forward(X))
                    flat[idx] = orig
                    numeric = (hi - lo) / (2 * eps)
                    denom = max(abs(numeric), abs(g.reshape(-1)[idx]), 1e-8)
                    assert abs(numeric - g.reshape(-1)[idx]) / denom < 1e-4

    def test_learns_separable_blobs(self, rng):
        ds = make_dataset(100, 100, rng)
        model = ann_train(ds.matrix(), ds.labels(), AnnConfig(epochs=60), make_rng(5))
        acc = float(np.mean(model.predict(ds.matrix()) == ds.labels()))
        assert acc >= 0.95

    def test_training_history_recorded(self, rng):
        ds = make_dataset(20, 20, rng)
        model = ann_train(ds.matrix(), ds.labels(), AnnConfig(epochs=5), make_rng(5))
        assert len(model.history) == 5
        assert model.history[0][1] > model.history[-1][1]

    def test_deterministic_training(self, rng):
        ds = make_dataset(15, 15, rng)
        cfg = AnnConfig(epochs=3)
        a = ann_train(ds.matrix(), ds.labels(), cfg, make_rng(8))
        b = ann_train(ds.matrix(), ds.labels(), cfg, make_rng(8))
        assert all(np.array_equal(x, y) for x, y in zip(a.parameters(), b.parameters()))

    def test_requires_rng(self, rng):
        ds = make_dataset(5, 5, rng)
        with pytest.raises(DataError, match="generator"):
            ann_train(ds.matrix(), ds.labels())


class TestCnn:
    SMALL = CnnConfig(
        input_shape=(12, 12), filters=(3, 4), dense_units=8,
        dropout=0.0, learning_rate=0.02, epochs=10, batch_size=8,
    )

    def test_fix_frames_pads_and_crops(self):
        m = np.arange(12.0).reshape(3, 4)
        padded = fix_frames(m, n_frames=8)
        assert padded.shape == (3, 8)
        assert np.array_equal(padded[:, 2:6], m)
        assert padded[:, :2].sum() == 0 and padded[:, 6:].sum() == 0
        cropped = fix_frames(padded, n_frames=4)
        assert np.array_equal(cropped, m)

    def test_fix_frames_identity(self, rng):
        m = rng.normal(size=(5, 7))
        assert np.array_equal(fix_frames(m, 7), m)

    def test_gradient_check(self, rng):
        model = init_cnn(self.SMALL, make_rng(4))
        X = rng.normal(size=(4, 1, 12, 12))
        y = np.array([0.0, 1.0, 1.0, 0.0])
        _, grads = cnn_gradients(model, X, y, dropout=False)
        params = model.parameters()
        eps = 1e-6
        check_rng = make_rng(11)
        for p, g in zip(params, grads):
            flat = p.reshape(-1)
            gflat = np.asarray(g).reshape(-1)
            for idx in check_rng.choice(flat.size, size=min(6, flat.size), replace=False):
                orig = flat[idx]
                flat[idx] = orig + eps
                hi = bce_loss(y, model._forward(X)[0])
                flat[idx] = orig - eps
                lo = bce_loss(y, model._forward(X)[0])
                flat[idx] = orig
                numeric = (hi - lo) / (2 * eps)
                denom = max(abs(numeric), abs(gflat[idx]), 1e-8)
                assert abs(numeric - gflat[idx]) / denom < 1e-4

    def test_learns_band_energy(self, rng):
        # class 0 has energy in the top rows, class 1 in the bottom rows
        X, y = [], []
        for i in range(40):
            img = rng.normal(0, 0.05, (12, 12))
            label = i % 2
            rows = slice(0, 4) if label == 0 else slice(8, 12)
            img[rows, :] += 1.0 + rng.normal(0, 0.1)
            X.append(img)
            y.append(label)
        X, y = np.array(X), np.array(y)
        model = cnn_train(X, y, self.SMALL, make_rng(6))
        acc = float(np.mean(model.predict(X) == y))
        assert acc >= 0.9

    def test_input_shape_enforced(self, rng):
        with pytest.raises(DataError, match="inputs must be"):
            cnn_train(rng.normal(size=(4, 10, 10)), np.zeros(4), self.SMALL, make_rng(0))

    def test_dropout_only_affects_training_path(self, rng):
        model = init_cnn(self.SMALL, make_rng(4))
        X = rng.normal(size=(2, 1, 12, 12))
        a = model.predict_proba(X)
        b = model.predict_proba(X)
        assert np.array_equal(a, b)


class TestTrees:
    def test_single_threshold_split(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([0, 0, 1, 1])
        model = tree_train(X, y, TreeConfig(max_depth=3))
        assert np.array_equal(model.predict(X), y)
        assert model.root.feature == 0
        assert 1.0 < model.root.threshold < 2.0

    def test_pure_node_is_leaf(self):
        model = tree_train(np.zeros((4, 2)), np.zeros(4, dtype=int), TreeConfig())
        assert model.root.is_leaf

    def test_depth_limit(self, rng):
        X = rng.normal(size=(200, 3))
        y = rng.integers(0, 2, 200)

        def depth(node):
            if node.is_leaf:
                return 0
            return 1 + max(depth(node.left), depth(node.right))

        model = tree_train(X, y, TreeConfig(max_depth=4))
        assert depth(model.root) <= 4

    def test_forest_equals_tree_when_degenerate(self, rng):
        ds = make_dataset(30, 30, rng, spread=1.2)
        X, y = ds.matrix(), ds.labels()
        tree = tree_train(X, y, TreeConfig(max_depth=8))
        forest = forest_train(
            X, y,
            ForestConfig(n_estimators=1, bootstrap=False, max_features=None, max_depth=8),
            make_rng(0),
        )
        probe = rng.normal(size=(50, 13)) * 2
        assert np.array_equal(tree.predict(probe), forest.predict(probe))

    def test_forest_learns_blobs(self, rng):
        ds = make_dataset(50, 50, rng)
        X, y = ds.matrix(), ds.labels()
        model = forest_train(X, y, ForestConfig(n_estimators=25), make_rng(2))
        assert float(np.mean(model.predict(X) == y)) >= 0.95

    def test_forest_vote_fractions(self, rng):
        ds = make_dataset(20, 20, rng)
        model = forest_train(ds.matrix(), ds.labels(), ForestConfig(n_estimators=10), make_rng(3))
        proba = model.predict_proba(ds.matrix())
        assert np.all((proba >= 0) & (proba <= 1))
        assert np.all(np.isclose(proba * 10, np.rint(proba * 10)))


class TestMetrics:
    def test_hand_computed_confusion(self):
        y_true = [1, 1, 1, 1, 1, 0, 0, 0, 0, 0]
        y_pred = [1, 1, 1, 1, 0, 0, 0, 0, 0, 1]
        m = classification_report(y_true, y_pred)
        assert (m.tp, m.fp, m.tn, m.fn) == (4, 1, 4, 1)
        assert m.accuracy == 0.8
        assert m.per_class[1].precision == 0.8
        assert m.per_class[1].recall == 0.8
        assert m.per_class[1].f1 == pytest.approx(0.8)
        assert m.macro_f1 == pytest.approx(0.8)
        assert m.weighted_f1 == pytest.approx(0.8)

    def test_zero_denominator_flagged(self):
        m = classification_report([0, 0, 0], [0, 0, 0])
        assert m.per_class[1].precision == 0.0
        assert m.per_class[1].degenerate
        assert not m.per_class[0].degenerate
        assert m.accuracy == 1.0

    def test_weighted_average_arithmetic(self):
        y_true = [1, 1, 1, 0]
        y_pred = [1, 0, 1, 0]
        m = classification_report(y_true, y_pred)
        want = m.per_class[0].f1 * 0.25 + m.per_class[1].f1 * 0.75
        assert m.weighted_f1 == pytest.approx(want)

    def test_format_report_contains_rows(self):
        text = format_report(classification_report([0, 1, 1], [0, 1, 0]))
        assert "accuracy" in text
        assert "precision" in text

    def test_length_mismatch(self):
        with pytest.raises(DataError, match="mismatch"):
            classification_report([0, 1], [0])


class TestImportance:
    def test_informative_feature_ranks_first(self, rng):
        X = rng.normal(size=(200, 13))
        y = (X[:, 4] > 0).astype(int)
        model = tree_train(X, y, TreeConfig(max_depth=4))
        ranking = permutation_importance(model, X, y, make_rng(1))
        assert ranking[0][0] == FEATURE_NAMES[4]
        assert ranking[0][1] > 0.2

    def test_noise_features_near_zero(self, rng):
        X = rng.normal(size=(200, 13))
        y = (X[:, 4] > 0).astype(int)
        model = tree_train(X, y, TreeConfig(max_depth=4))
        ranking = dict(permutation_importance(model, X, y, make_rng(1)))
        others = [v for kname, v in ranking.items() if kname != FEATURE_NAMES[4]]
        assert max(abs(v) for v in others) < 0.1


class TestModelIo:
    def test_ann_round_trip(self, tmp_path, rng):
        ds = make_dataset(10, 10, rng)
        model = ann_train(ds.matrix(), ds.labels(), AnnConfig(epochs=2), make_rng(1), seed=1)
        path = tmp_path / "ann.json"
        save_model(model, path)
        back = load_model(path)
        X = rng.normal(size=(7, 13))
        assert np.array_equal(model.predict_proba(X), back.predict_proba(X))
        assert back.seed == 1

    def test_cnn_round_trip(self, tmp_path, rng):
        cfg = CnnConfig(input_shape=(12, 12), filters=(2, 2), dense_units=4, epochs=1)
        X = rng.normal(size=(6, 12, 12))
        y = np.array([0, 1, 0, 1, 0, 1], dtype=float)
        model = cnn_train(X, y, cfg, make_rng(2))
        path = tmp_path / "cnn.json"
        save_model(model, path)
        back = load_model(path)
        assert np.allclose(model.predict_proba(X), back.predict_proba(X), atol=1e-12)

    def test_tree_and_forest_round_trip(self, tmp_path, rng):
        ds = make_dataset(15, 15, rng)
        X, y = ds.matrix(), ds.labels()
        for model in (
            tree_train(X, y, TreeConfig()),
            forest_train(X, y, ForestConfig(n_estimators=5), make_rng(3)),
        ):
            path = tmp_path / "m.json"
            save_model(model, path)
            back = load_model(path)
            assert np.array_equal(model.predict(X), back.predict(X))

    def test_tampered_dimensions_rejected(self, tmp_path, rng):
        import json

        ds = make_dataset(10, 10, rng)
        model = ann_train(ds.matrix(), ds.labels(), AnnConfig(epochs=1), make_rng(1))
        path = tmp_path / "ann.json"
        save_model(model, path)
        doc = json.loads(path.read_text())
        doc["weights"][0]["shape"][0] = 7
        path.write_text(json.dumps(doc))
        with pytest.raises(DataError):
            load_model(path)

    def test_unknown_kind_rejected(self, tmp_path):
        import json

        path = tmp_path / "x.json"
        path.write_text(json.dumps({"kind": "mystery", "format_version": 1}))
        with pytest.raises(DataError, match="kind"):
            load_model(path)
