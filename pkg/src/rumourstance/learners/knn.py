"""k-nearest-neighbour classifier with inverse-distance vote weighting.

Distances are Euclidean over min-max-normalized columns; the ranges come
from the training data only. Zero-range columns normalize to 0 so constant
features never contribute to distance. Neighbour ties on distance resolve
by training order, vote ties by the fixed class order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .base import CLASS_NAMES, N_CLASSES, TrainedModel, labels_to_indices, resolve_labels, to_dense

log = logging.getLogger(__name__)

_WEIGHTINGS = ("inverse_distance", "uniform")
DISTANCE_FLOOR = 1e-9


@dataclass(frozen=True)
class KnnParams:
    k: int = 10
    weighting: str = "inverse_distance"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.weighting not in _WEIGHTINGS:
            raise ValueError(f"weighting must be one of {_WEIGHTINGS}")


def normalize_columns(X: np.ndarray, mins: np.ndarray,
                      ranges: np.ndarray) -> np.ndarray:
    out = np.zeros_like(X)
    nonzero = ranges > 0
    out[:, nonzero] = (X[:, nonzero] - mins[nonzero]) / ranges[nonzero]
    return out


def fit_knn(X, y=None, params: KnnParams = KnnParams(), *,
            schema=None, n_features=None) -> TrainedModel:
    if not X:
        raise ValueError("cannot fit k-NN on an empty training set")
    if n_features is None:
        if schema is None:
            raise ValueError("supply schema or n_features")
        n_features = len(schema)
    fingerprint = schema.fingerprint if schema is not None else X[0].schema_fingerprint
    labels = resolve_labels(X, y)
    dense = to_dense(X, n_features)
    indices = labels_to_indices(labels)
    k = params.k
    if k > len(X):
        log.warning("k=%d exceeds the %d training instances; clamping", k, len(X))
        k = len(X)
    mins = dense.min(axis=0) if len(X) else np.zeros(n_features)
    maxs = dense.max(axis=0) if len(X) else np.zeros(n_features)
    ranges = maxs - mins
    normalized = normalize_columns(dense, mins, ranges)
    instances = []
    for row in normalized:
        nz = np.nonzero(row)[0]
        instances.append({str(int(i)): float(row[i]) for i in nz})
    return TrainedModel(
        kind="knn",
        schema_fingerprint=fingerprint,
        n_features=n_features,
        classes=CLASS_NAMES,
        payload={
            "instances": instances,
            "labels": [int(i) for i in indices],
            "mins": [float(v) for v in mins],
            "ranges": [float(v) for v in ranges],
            "k": k,
            "weighting": params.weighting,
        },
    )


def _dense_instances(payload: dict, n_features: int) -> np.ndarray:
    X = np.zeros((len(payload["instances"]), n_features), dtype=np.float64)
    for row, sparse in enumerate(payload["instances"]):
        for index_text, value in sparse.items():
            X[row, int(index_text)] = value
    return X


def knn_distribution(payload: dict, row: np.ndarray, n_features: int) -> np.ndarray:
    # the dense training matrix is memoized on the payload; io.save_model
    # strips underscore-prefixed keys
    matrix = payload.get("_matrix")
    if matrix is None:
        matrix = _dense_instances(payload, n_features)
        payload["_matrix"] = matrix
    mins = np.asarray(payload["mins"])
    ranges = np.asarray(payload["ranges"])
    query = normalize_columns(row.reshape(1, -1), mins, ranges)[0]
    distances = np.sqrt(((matrix - query) ** 2).sum(axis=1))
    # stable sort keeps training order among equal distances
    order = np.argsort(distances, kind="stable")[:payload["k"]]
    votes = np.zeros(N_CLASSES, dtype=np.float64)
    train_labels = payload["labels"]
    for i in order:
        weight = 1.0 if payload["weighting"] == "uniform" \
            else 1.0 / (distances[i] + DISTANCE_FLOOR)
        votes[train_labels[i]] += weight
    return votes / votes.sum()
