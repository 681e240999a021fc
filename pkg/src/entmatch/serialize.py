"""JSON state files.

Every file is an object ``{"schema_version": "1", "kind": ..., "dims": [...],
"data": ...}`` where complex numbers are ``[re, im]`` pairs and matrices are
nested row-major.  Per kind:

``pure_state``        dims = tensor factors, data = flat list of amplitudes
``density_operator``  dims = tensor factors, data = square matrix
``antilinear_op``     dims = [dim_in, dim_out], data = dim_out x dim_in matrix M
                      (action ``psi -> M conj(psi)``)
``unitary``           dims = [n], data = n x n matrix

Floats are written with ``repr`` precision so a round trip is bit exact.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from math import prod
from pathlib import Path

import numpy as np

from .antilinear import AntilinearOp
from .linalg import DensityOperator, PureState, as_matrix, is_unitary

SCHEMA_VERSION = "1"
KINDS = ("pure_state", "antilinear_op", "density_operator", "unitary")

_PAIR = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}

STATE_FILE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "StateFile",
    "type": "object",
    "required": ["schema_version", "kind", "dims", "data"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"enum": list(KINDS)},
        "dims": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "data": {
            "type": "array",
            "minItems": 1,
            "items": {
                "oneOf": [_PAIR, {"type": "array", "items": _PAIR, "minItems": 1}],
            },
        },
    },
}


class StateFileError(ValueError):
    pass


def _pairs(a: np.ndarray):
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in a]
    return [_pairs(row) for row in a]


def _complex(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"data is not a regular nested array of [re, im] pairs: {exc}") from exc
    if arr.ndim < 2 or arr.shape[-1] != 2:
        raise StateFileError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def to_dict(obj, kind: str | None = None) -> dict:
    if isinstance(obj, PureState):
        kind, dims, data = "pure_state", list(obj.dims), _pairs(obj.amplitudes)
    elif isinstance(obj, DensityOperator):
        kind, dims, data = "density_operator", list(obj.dims), _pairs(obj.matrix)
    elif isinstance(obj, AntilinearOp):
        kind, dims, data = "antilinear_op", [obj.dim_in, obj.dim_out], _pairs(obj.matrix)
    elif kind == "unitary":
        m = as_matrix(obj)
        dims, data = [m.shape[0]], _pairs(m)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} (kind={kind!r})")
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "dims": dims, "data": data}


def from_dict(d: dict):
    if not isinstance(d, dict):
        raise StateFileError("state file must contain a JSON object")
    missing = {"schema_version", "kind", "dims", "data"} - d.keys()
    if missing:
        raise StateFileError(f"missing fields: {sorted(missing)}")
    if d["schema_version"] != SCHEMA_VERSION:
        raise StateFileError(f"unsupported schema_version {d['schema_version']!r}")
    kind = d["kind"]
    dims = d["dims"]
    if not (isinstance(dims, list) and dims and all(isinstance(x, int) and x >= 1 for x in dims)):
        raise StateFileError(f"invalid dims {dims!r}")
    data = _complex(d["data"])
    try:
        if kind == "pure_state":
            if data.ndim != 1:
                raise StateFileError("pure_state data must be a flat list of pairs")
            return PureState(tuple(dims), data)
        if kind == "density_operator":
            return DensityOperator(tuple(dims), data)
        if kind == "antilinear_op":
            if len(dims) != 2 or data.shape != (dims[1], dims[0]):
                raise StateFileError(f"antilinear_op data shape {data.shape} does not match dims {dims}")
            return AntilinearOp(data)
        if kind == "unitary":
            n = prod(dims)
            if data.shape != (n, n):
                raise StateFileError(f"unitary data shape {data.shape} does not match dims {dims}")
            if not is_unitary(data):
                raise StateFileError("matrix is not unitary")
            return data
    except StateFileError:
        raise
    except ValueError as exc:
        raise StateFileError(str(exc)) from exc
    raise StateFileError(f"unknown kind {kind!r}")


def dumps(obj, kind: str | None = None) -> str:
    return json.dumps(to_dict(obj, kind), indent=1)


def loads(text: str):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON: {exc}") from exc
    return from_dict(d)


def load(path) -> tuple[object, str, str]:
    """Return ``(object, kind, sha256 hex digest)`` for a state file."""
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise StateFileError(f"{path}: not UTF-8") from exc
    obj = loads(text)
    return obj, json.loads(text)["kind"], hashlib.sha256(raw).hexdigest()


def write_files(files: dict[Path, str]):
    """Write several files so that either all appear or none do."""
    staged = []
    try:
        for path, text in files.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            staged.append((tmp, path))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, path in staged:
        os.replace(tmp, path)
