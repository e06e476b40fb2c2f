"""JSON interchange for complex matrices and command reports.

A matrix document looks like::

    {"rows": 2, "cols": 2, "data": [[[1.0, 0.0], [0.0, -1.0]], ...]}

where each entry is an ``[re, im]`` pair.  Floats are written with Python's
shortest round-trip ``repr`` so ``dumps(loads(text)) == text`` for any text
this module produced.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any, Dict

import numpy as np

__all__ = [
    "DocumentError",
    "matrix_to_document",
    "document_to_matrix",
    "dumps",
    "loads",
    "load_matrix",
    "digest",
    "metric_value",
]


class DocumentError(ValueError):
    """Malformed matrix document; ``field`` is the offending path."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def matrix_to_document(M) -> Dict[str, Any]:
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2:
        raise DocumentError("data", f"expected a 2-D matrix, got ndim={M.ndim}")
    if not np.all(np.isfinite(M)):
        raise DocumentError("data", "non-finite entry")
    rows, cols = M.shape
    data = [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return {"rows": int(rows), "cols": int(cols), "data": data}


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentError(where, f"expected a number, got {type(value).__name__}")
    out = float(value)
    if not math.isfinite(out):
        raise DocumentError(where, "non-finite number")
    return out


def document_to_matrix(doc) -> np.ndarray:
    if not isinstance(doc, dict):
        raise DocumentError("<root>", "expected a JSON object")
    for key in ("rows", "cols", "data"):
        if key not in doc:
            raise DocumentError(key, "missing field")
    rows, cols = doc["rows"], doc["cols"]
    for key, v in (("rows", rows), ("cols", cols)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise DocumentError(key, f"expected a non-negative integer, got {v!r}")
    data = doc["data"]
    if not isinstance(data, list) or len(data) != rows:
        raise DocumentError("data", f"expected {rows} rows")
    out = np.empty((rows, cols), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise DocumentError(f"data[{i}]", f"expected {cols} entries")
        for j, entry in enumerate(row):
            where = f"data[{i}][{j}]"
            if not isinstance(entry, list) or len(entry) != 2:
                raise DocumentError(where, "expected an [re, im] pair")
            out[i, j] = complex(_number(entry[0], where + "[0]"), _number(entry[1], where + "[1]"))
    return out


def _reject_constant(name):
    raise DocumentError("<json>", f"non-finite literal {name}")


def dumps(obj) -> str:
    return json.dumps(obj, allow_nan=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DocumentError("<json>", str(exc)) from None


def load_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return document_to_matrix(loads(fh.read()))


def digest(doc) -> str:
    """SHA-256 of the canonical serialisation of `doc`."""
    return hashlib.sha256(dumps(doc).encode("utf-8")).hexdigest()


def metric_value(x: float):
    """JSON-safe metric: finite floats stay numbers, others become strings."""
    x = float(x)
    if math.isfinite(x):
        return x
    if math.isnan(x):
        return "nan"
    return "inf" if x > 0 else "-inf"
