"""Validation-accuracy-driven switching between a simple and a complex classifier."""

import json

from . import _core
from ._core import (
    Dataset,
    Model,
    accuracy,
    add_noise,
    decide,
    format_accuracy,
    generate,
    load_model,
    read_csv,
    set_worker_count,
    train_val_split,
    worker_count,
    write_csv,
)

__all__ = [
    "Dataset",
    "Model",
    "accuracy",
    "add_noise",
    "decide",
    "evaluate",
    "fit_boosted",
    "fit_forest",
    "fit_linear_svm",
    "format_accuracy",
    "generate",
    "load_model",
    "model_from_json",
    "read_csv",
    "run_experiment_1",
    "run_experiment_2",
    "run_size_sweep",
    "set_worker_count",
    "switch_models",
    "train_val_split",
    "worker_count",
    "write_csv",
]


def _params(params):
    return json.dumps(params) if params else ""


def fit_forest(data, **params):
    """Fit a random forest. Keyword arguments override ForestParams fields."""
    return _core.fit("rf", data, _params(params))


def fit_boosted(data, **params):
    """Fit Newton-boosted trees. Keyword arguments override BoostParams fields."""
    return _core.fit("gbt", data, _params(params))


def fit_linear_svm(data, **params):
    """Fit a Pegasos linear SVM. Keyword arguments override LinearSvmParams fields."""
    return _core.fit("svm", data, _params(params))


def evaluate(model, data):
    """Accuracy and confusion counts as a dict."""
    return json.loads(_core.evaluate(model, data))


def model_from_json(doc):
    return _core.model_from_json(doc if isinstance(doc, str) else json.dumps(doc))


def switch_models(current, train, val, candidate="gbt", params=None, threshold=0.8,
                  require_threshold=True, margin=0.0, noise=None, seed=42):
    """Train a candidate and keep whichever model wins on val.

    Returns (model, report_dict, log_lines).
    """
    model, report, lines = _core.switch_models(
        current, train, val, candidate, _params(params), threshold, require_threshold,
        margin, noise, seed)
    return model, json.loads(report), lines


def run_experiment_1(seed=42):
    return json.loads(_core.run_experiment(1, seed))


def run_experiment_2(seed=42):
    return json.loads(_core.run_experiment(2, seed))


def run_size_sweep(sizes, seed=42):
    return [json.loads(r) for r in _core.run_size_sweep(list(sizes), seed)]
