"""Versioned JSON model container."""

from __future__ import annotations

import json

from ..errors import ModelError
from .base import TrainedModel

MODEL_MAGIC = "STANCEMODEL"
MODEL_VERSION = 1

_REQUIRED_KEYS = ("magic", "version", "kind", "schema_fingerprint",
                  "n_features", "classes", "payload")
_KINDS = ("tree", "forest", "knn")


def _without_memos(obj):
    """Copy nested JSON data, dropping underscore-prefixed dict keys
    (runtime memos such as the k-NN dense matrix)."""
    if isinstance(obj, dict):
        return {k: _without_memos(v) for k, v in obj.items()
                if not k.startswith("_")}
    if isinstance(obj, list):
        return [_without_memos(v) for v in obj]
    return obj


def save_model(model: TrainedModel, path) -> None:
    container = {
        "magic": MODEL_MAGIC,
        "version": MODEL_VERSION,
        "kind": model.kind,
        "schema_fingerprint": model.schema_fingerprint,
        "n_features": model.n_features,
        "classes": list(model.classes),
        "payload": _without_memos(model.payload),
        "context": _without_memos(model.context),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(container, fh, sort_keys=True, allow_nan=False)
        fh.write("\n")


def load_model(path) -> TrainedModel:
    try:
        with open(path, encoding="utf-8") as fh:
            container = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ModelError(f"{path}: corrupted model file: {exc}") from None
    except OSError as exc:
        raise ModelError(f"{path}: cannot read model file: {exc}") from None
    if not isinstance(container, dict):
        raise ModelError(f"{path}: corrupted model file: not an object")
    if container.get("magic") != MODEL_MAGIC:
        raise ModelError(f"{path}: not a stance model file")
    if container.get("version") != MODEL_VERSION:
        raise ModelError(
            f"{path}: unsupported model version {container.get('version')!r}; "
            f"this build reads version {MODEL_VERSION}")
    missing = [key for key in _REQUIRED_KEYS if key not in container]
    if missing:
        raise ModelError(f"{path}: corrupted model file: missing {missing}")
    if container["kind"] not in _KINDS:
        raise ModelError(f"{path}: unknown model kind {container['kind']!r}")
    return TrainedModel(
        kind=container["kind"],
        schema_fingerprint=int(container["schema_fingerprint"]),
        n_features=int(container["n_features"]),
        classes=tuple(container["classes"]),
        payload=container["payload"],
        context=container.get("context", {}),
    )
