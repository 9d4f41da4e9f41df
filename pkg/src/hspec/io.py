"""JSON codecs for matrices, vectors, and result documents.

Serialization is hand-rolled so every float is written as decimal with 17
significant digits (enough for exact double round-trips); the stdlib
encoder does not expose that knob.  Parsing goes through ``json.loads``
followed by schema validation, and every malformed document surfaces as
:class:`~hspec.errors.FormatError`.

Schemas::

    quaternion  [w, x, y, z]
    vector      {"n": int, "entries": [[w,x,y,z], ...]}
    matrix      {"n": int, "entries": [[[w,x,y,z], ... n], ... n rows]}
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import FormatError
from .hspace import HMatrix, HVector
from .quaternion import Quaternion

__all__ = [
    "dumps",
    "format_float",
    "loads_document",
    "quaternion_to_doc",
    "parse_quaternion",
    "matrix_to_doc",
    "parse_matrix",
    "loads_matrix",
    "load_matrix",
    "vector_to_doc",
    "parse_vector",
]


def format_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise FormatError(f"cannot serialize non-finite number {x!r}")
    return f"{x:.17g}"


def _emit(obj, out):
    if isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if not isinstance(k, str):
                raise FormatError("JSON object keys must be strings")
            if i:
                out.append(", ")
            out.append(json.dumps(k))
            out.append(": ")
            _emit(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _emit(v, out)
        out.append("]")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif obj is None:
        out.append("null")
    else:
        raise FormatError(f"cannot serialize object of type {type(obj).__name__}")


def dumps(obj):
    """Serialize a document built from dict/list/str/num with 17-digit floats."""
    out = []
    _emit(obj, out)
    return "".join(out)


def loads_document(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None


# ---------------------------------------------------------------------------
# quaternions
# ---------------------------------------------------------------------------

def quaternion_to_doc(q):
    a = q.array if isinstance(q, Quaternion) else np.asarray(q, dtype=float)
    return [float(c) for c in a]


def parse_quaternion(doc):
    if (not isinstance(doc, (list, tuple)) or len(doc) != 4
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool)
                       and math.isfinite(c) for c in doc)):
        raise FormatError("quaternion must be a list of four finite numbers")
    return Quaternion(*(float(c) for c in doc))


# ---------------------------------------------------------------------------
# vectors and matrices
# ---------------------------------------------------------------------------

def vector_to_doc(v):
    return {
        "n": v.n,
        "entries": [quaternion_to_doc(v.array[i]) for i in range(v.n)],
    }


def parse_vector(doc):
    if not isinstance(doc, dict) or set(doc) != {"n", "entries"}:
        raise FormatError('vector document must have exactly the keys "n" and "entries"')
    n, entries = doc["n"], doc["entries"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError('"n" must be a positive integer')
    if not isinstance(entries, list) or len(entries) != n:
        raise FormatError(f'"entries" must be a list of {n} quaternions')
    return HVector(np.stack([parse_quaternion(e).array for e in entries]))


def matrix_to_doc(m):
    if m.shape[0] != m.shape[1]:
        raise FormatError("matrix document requires a square matrix")
    n = m.n
    return {
        "n": n,
        "entries": [[quaternion_to_doc(m.array[i, j]) for j in range(n)]
                    for i in range(n)],
    }


def parse_matrix(doc):
    if not isinstance(doc, dict) or set(doc) != {"n", "entries"}:
        raise FormatError('matrix document must have exactly the keys "n" and "entries"')
    n, entries = doc["n"], doc["entries"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError('"n" must be a positive integer')
    if not isinstance(entries, list) or len(entries) != n:
        raise FormatError(f'"entries" must be a list of {n} rows')
    rows = []
    for row in entries:
        if not isinstance(row, list) or len(row) != n:
            raise FormatError(f"every matrix row must hold {n} quaternions")
        rows.append([parse_quaternion(e).array for e in row])
    return HMatrix(np.asarray(rows))


def loads_matrix(text):
    return parse_matrix(loads_document(text))


def load_matrix(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    return loads_matrix(text)
