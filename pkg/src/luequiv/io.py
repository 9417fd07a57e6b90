"""JSON state files and verdict reports.

State file schema (version 1)::

    {
      "schema_version": 1,
      "local_dim": 2,
      "label": "optional text",
      "matrix": [[[re, im], ...], ...]   # row-major, N^2 x N^2
    }

Complex numbers are always [re, im] pairs of doubles; serialization uses
Python's shortest-round-trip float repr, so files are bit-faithful and
diff cleanly.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import ParseError
from .states import DensityMatrix, validate_density

STATE_SCHEMA_VERSION = 1
REPORT_SCHEMA_VERSION = 1


def matrix_to_pairs(m: np.ndarray) -> list:
    a = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def pairs_to_matrix(data) -> np.ndarray:
    try:
        rows = []
        for row in data:
            rows.append([complex(float(z[0]), float(z[1])) for z in row])
        out = np.array(rows, dtype=complex)
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    if out.ndim != 2:
        raise ParseError("matrix must be a nested array")
    if not np.all(np.isfinite(out.view(float))):
        raise ParseError("matrix contains non-finite entries")
    return out


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def dump_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def save_state(path, matrix, local_dim: int, label: str | None = None) -> None:
    doc = {
        "schema_version": STATE_SCHEMA_VERSION,
        "local_dim": int(local_dim),
        "matrix": matrix_to_pairs(matrix),
    }
    if label is not None:
        doc["label"] = label
    Path(path).write_text(dump_json(doc))


def load_state(
    path, tol: Tolerances = DEFAULT_TOL, validate: bool = True
) -> tuple[DensityMatrix, str | None]:
    """Parse a state file; validation errors propagate as typed exceptions."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top-level JSON object expected")
    if doc.get("schema_version") != STATE_SCHEMA_VERSION:
        raise ParseError(f"{path}: unsupported schema_version {doc.get('schema_version')!r}")
    try:
        n = int(doc["local_dim"])
        matrix = pairs_to_matrix(doc["matrix"])
    except KeyError as exc:
        raise ParseError(f"{path}: missing field {exc}") from exc
    label = doc.get("label")
    if validate:
        return validate_density(matrix, n, tol), label
    if matrix.shape != (n * n, n * n):
        raise ParseError(f"{path}: matrix shape {matrix.shape} does not match local_dim {n}")
    return DensityMatrix(n, matrix), label


def complex_to_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]
