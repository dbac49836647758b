"""Paths to the data files shipped inside the package.

The bundle and both corpora are synthetic; scripts/make_bundled_data.py in
the repository regenerates them deterministically.
"""

from __future__ import annotations

from pathlib import Path

_DATA = Path(__file__).resolve().parent / "data"


def default_bundle_path() -> Path:
    """Directory of the bundled linguistic resources."""
    return _DATA / "bundle"


def micro_corpus_path() -> Path:
    """Tiny two-event corpus used by tests and quickstart examples."""
    return _DATA / "micro_corpus.jsonl"


def ottawa_path() -> Path:
    """Single-event corpus whose label counts match the published statistics."""
    return _DATA / "ottawa.jsonl"
