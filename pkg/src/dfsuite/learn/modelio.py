"""Model serialization: one JSON document per trained model.

The document records the model kind, hyperparameters, flattened weight
arrays, normalization statistics, the training seed, and per-epoch
history. JSON floats use Python's shortest round-trip representation,
so loading reproduces bit-identical predictions.
"""
from __future__ import annotations

import json
from dataclasses import asdict

import numpy as np

from ..errors import DataError
from .ann import AnnConfig, AnnModel
from .cnn import CnnConfig, CnnModel
from .tree import ForestConfig, ForestModel, TreeConfig, TreeModel, TreeNode

FORMAT_VERSION = 1


def _arr(a: np.ndarray) -> dict:
    return {"shape": list(a.shape), "data": np.asarray(a, dtype=np.float64).ravel().tolist()}


def _unarr(doc: dict) -> np.ndarray:
    a = np.array(doc["data"], dtype=np.float64)
    shape = tuple(doc["shape"])
    if a.size != int(np.prod(shape)):
        raise DataError(f"weight array size {a.size} inconsistent with shape {shape}")
    return a.reshape(shape)


def _node_to_doc(node: TreeNode) -> dict:
    doc = {"prediction": int(node.prediction), "probability": float(node.probability)}
    if not node.is_leaf:
        doc.update(
            feature=int(node.feature),
            threshold=float(node.threshold),
            left=_node_to_doc(node.left),
            right=_node_to_doc(node.right),
        )
    return doc


def _node_from_doc(doc: dict) -> TreeNode:
    node = TreeNode(prediction=int(doc["prediction"]), probability=float(doc["probability"]))
    if "feature" in doc:
        node.feature = int(doc["feature"])
        node.threshold = float(doc["threshold"])
        node.left = _node_from_doc(doc["left"])
        node.right = _node_from_doc(doc["right"])
    return node


def _tree_doc(model: TreeModel) -> dict:
    return {
        "config": asdict(model.config),
        "n_features": model.n_features,
        "root": _node_to_doc(model.root),
    }


def _tree_from_doc(doc: dict, seed) -> TreeModel:
    return TreeModel(
        root=_node_from_doc(doc["root"]),
        config=TreeConfig(**doc["config"]),
        n_features=int(doc["n_features"]),
        seed=seed,
    )


def save_model(model, path) -> None:
    if isinstance(model, AnnModel):
        doc = {
            "kind": "ann",
            "config": asdict(model.config),
            "layer_dims": list(model.layer_dims),
            "weights": [_arr(w) for w in model.weights],
            "biases": [_arr(b) for b in model.biases],
            "norm_mean": _arr(model.norm_mean),
            "norm_std": _arr(model.norm_std),
            "history": model.history,
        }
    elif isinstance(model, CnnModel):
        doc = {
            "kind": "cnn",
            "config": asdict(model.config),
            "conv_kernels": [_arr(k) for k in model.conv_kernels],
            "conv_biases": [_arr(b) for b in model.conv_biases],
            "dense_w": _arr(model.dense_w),
            "dense_b": _arr(model.dense_b),
            "out_w": _arr(model.out_w),
            "out_b": _arr(model.out_b),
            "norm_mean": model.norm_mean,
            "norm_std": model.norm_std,
            "history": model.history,
        }
    elif isinstance(model, TreeModel):
        doc = {"kind": "tree", **_tree_doc(model)}
    elif isinstance(model, ForestModel):
        doc = {
            "kind": "forest",
            "config": asdict(model.config),
            "n_features": model.n_features,
            "trees": [_tree_doc(t) for t in model.trees],
        }
    else:
        raise DataError(f"cannot serialize {type(model).__name__}")
    doc["format_version"] = FORMAT_VERSION
    doc["seed"] = getattr(model, "seed", None)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_model(path):
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    kind = doc.get("kind")
    seed = doc.get("seed")
    if kind == "ann":
        config = AnnConfig(**{**doc["config"], "hidden": tuple(doc["config"]["hidden"])})
        weights = [_unarr(w) for w in doc["weights"]]
        biases = [_unarr(b) for b in doc["biases"]]
        dims = tuple(doc["layer_dims"])
        chain = [w.shape for w in weights]
        expect = list(zip(dims, dims[1:]))
        if chain != expect:
            raise DataError(f"layer dims {dims} inconsistent with weights {chain}")
        model = AnnModel(
            layer_dims=dims,
            weights=weights,
            biases=biases,
            norm_mean=_unarr(doc["norm_mean"]),
            norm_std=_unarr(doc["norm_std"]),
            config=config,
            seed=seed,
            history=[tuple(h) for h in doc.get("history", [])],
        )
        return model
    if kind == "cnn":
        cdoc = dict(doc["config"])
        cdoc["input_shape"] = tuple(cdoc["input_shape"])
        cdoc["filters"] = tuple(cdoc["filters"])
        model = CnnModel(
            config=CnnConfig(**cdoc),
            conv_kernels=[_unarr(k) for k in doc["conv_kernels"]],
            conv_biases=[_unarr(b) for b in doc["conv_biases"]],
            dense_w=_unarr(doc["dense_w"]),
            dense_b=_unarr(doc["dense_b"]),
            out_w=_unarr(doc["out_w"]),
            out_b=_unarr(doc["out_b"]),
            norm_mean=float(doc["norm_mean"]),
            norm_std=float(doc["norm_std"]),
            seed=seed,
            history=[tuple(h) for h in doc.get("history", [])],
        )
        return model
    if kind == "tree":
        return _tree_from_doc(doc, seed)
    if kind == "forest":
        return ForestModel(
            trees=[_tree_from_doc(t, None) for t in doc["trees"]],
            config=ForestConfig(**doc["config"]),
            n_features=int(doc["n_features"]),
            seed=seed,
        )
    raise DataError(f"{path}: unknown model kind {kind!r}")
