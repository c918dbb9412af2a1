"""Versioned JSON model files that reproduce predictions bit-exactly.

Floats are serialised with Python's shortest-round-trip repr, so a
loaded model computes exactly what the saved one did. Keys are sorted
and no timestamps are embedded: saving the same model twice yields
byte-identical files.
"""

from __future__ import annotations

import hashlib
import json

FORMAT_VERSION = "fraudlex-model-v1"


def save_model(model, path) -> None:
    doc = model.to_dict()
    doc["format"] = FORMAT_VERSION
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_model(path):
    from fraudlex.models import _MODEL_CLASSES

    from fraudlex.errors import MalformedDocument

    try:
        with open(path, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise MalformedDocument(f"{path}: invalid model JSON: {exc}") from exc
    except OSError as exc:
        raise MalformedDocument(f"{path}: {exc}") from exc
    if doc.get("format") != FORMAT_VERSION:
        raise MalformedDocument(
            f"{path}: unsupported model format {doc.get('format')!r}"
        )
    kind = doc.get("kind")
    if kind not in _MODEL_CLASSES:
        raise MalformedDocument(f"{path}: unknown model kind {kind!r}")
    return _MODEL_CLASSES[kind].from_dict(doc)


def file_digest(path) -> str:
    """SHA-256 of a file's bytes, for determinism checks."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()
