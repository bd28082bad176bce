"""Shared JSON file helpers with deterministic output."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import MalformedFile


def canonical_dumps(obj) -> str:
    """Serialize with sorted keys and a trailing newline, for stable files."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(canonical_dumps(obj))


def read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedFile(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: not valid JSON ({exc})") from exc
