"""Artifact writers: CSV tables with a provenance header and JSON documents.

Every file is written to a temporary sibling and moved into place with
``os.replace`` so that a crashed run never leaves a partial artifact.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

__all__ = ["config_hash", "write_csv", "write_json", "to_jsonable", "read_csv"]


def config_hash(config: dict) -> str:
    """sha256 of the canonical JSON form of ``config`` (sorted keys, no spaces)."""
    text = json.dumps(to_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def to_jsonable(obj):
    """Convert numpy scalars/arrays, tuples and non-finite floats for JSON."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(obj, complex):
        return {"re": to_jsonable(obj.real), "im": to_jsonable(obj.imag)}
    return obj


def _atomic_write(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(path, columns: dict[str, str], data, config_sha: str, comment: str | None = None) -> Path:
    """Write a CSV whose header lines start with ``#``.

    Parameters
    ----------
    columns : dict
        Ordered ``{name: unit}``; the unit string may be empty.
    data : array_like, shape (rows, len(columns))
    config_sha : str
        Hash of the producing configuration, recorded in the header.
    """
    arr = np.atleast_2d(np.asarray(data, dtype=float))
    if arr.size and arr.shape[1] != len(columns):
        raise ValueError(f"{len(columns)} columns declared but data has {arr.shape[1]}")
    units = ", ".join(f"{name} [{unit or '1'}]" for name, unit in columns.items())
    lines = [f"# units: {units}", f"# config_sha256: {config_sha}"]
    if comment:
        lines.extend(f"# {line}" for line in comment.splitlines())
    lines.append(",".join(columns))
    lines.extend(",".join(repr(float(v)) for v in row) for row in arr)
    return _atomic_write(Path(path), "\n".join(lines) + "\n")


def write_json(path, payload: dict) -> Path:
    text = json.dumps(to_jsonable(payload), indent=2, sort_keys=True)
    return _atomic_write(Path(path), text + "\n")


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Read back a CSV written by :func:`write_csv` (header comments skipped)."""
    with open(path, encoding="utf-8") as fh:
        rows = [line.rstrip("\n") for line in fh if not line.startswith("#")]
    names = rows[0].split(",")
    data = np.array([[float(x) for x in r.split(",")] for r in rows[1:] if r], dtype=float)
    return names, data.reshape(-1, len(names))
