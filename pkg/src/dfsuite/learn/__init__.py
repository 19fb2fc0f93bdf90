"""Classifiers and training utilities, all implemented from scratch."""

from .ann import AnnConfig, AnnModel, ann_gradients, ann_train, init_ann
from .cnn import CnnConfig, CnnModel, cnn_gradients, cnn_train, fix_frames, init_cnn
from .importance import permutation_importance
from .losses import bce_loss, relu, sigmoid
from .metrics import ClassMetrics, Metrics, classification_report, format_report
from .modelio import load_model, save_model
from .smote import smote
from .split import train_test_split
from .tree import (
    ForestConfig,
    ForestModel,
    TreeConfig,
    TreeModel,
    forest_train,
    tree_train,
)

__all__ = [
    "AnnConfig",
    "AnnModel",
    "ClassMetrics",
    "CnnConfig",
    "CnnModel",
    "ForestConfig",
    "ForestModel",
    "Metrics",
    "TreeConfig",
    "TreeModel",
    "ann_gradients",
    "ann_train",
    "bce_loss",
    "classification_report",
    "cnn_gradients",
    "cnn_train",
    "fix_frames",
    "forest_train",
    "format_report",
    "init_ann",
    "init_cnn",
    "load_model",
    "permutation_importance",
    "relu",
    "save_model",
    "sigmoid",
    "smote",
    "train_test_split",
    "tree_train",
]
