"""JSON file formats for tensors, vectors, instances and reports.

Tensors are sparse COO objects with 1-based indices::

    {"order": 3, "dim": 2, "entries": [{"idx": [1, 1, 1], "val": 1.0}, ...]}

Instances are ``{"tensor": <tensor>, "q": [...]}`` and reports are
line-delimited JSON records.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .tensor import Tensor, build_tensor


class FormatError(ValueError):
    """A file or object that does not match the expected schema."""


def tensor_to_obj(A: Tensor) -> dict:
    entries = []
    for idx in zip(*np.nonzero(A.data)):
        entries.append({"idx": [int(i) + 1 for i in idx], "val": float(A.data[idx])})
    return {"order": A.order, "dim": A.dim, "entries": entries}


def _int_field(obj, name, where):
    v = obj.get(name)
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"{where}: field {name!r} must be an integer, got {v!r}")
    return v


def tensor_from_obj(obj, where: str = "tensor") -> Tensor:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    order = _int_field(obj, "order", where)
    dim = _int_field(obj, "dim", where)
    if order < 2 or dim < 1:
        raise FormatError(f"{where}: need order >= 2 and dim >= 1, got order={order}, dim={dim}")
    entries = obj.get("entries", [])
    if not isinstance(entries, list):
        raise FormatError(f"{where}: field 'entries' must be a list")
    coords, seen = [], set()
    for k, rec in enumerate(entries):
        loc = f"{where}: entries[{k}]"
        if not isinstance(rec, dict) or "idx" not in rec or "val" not in rec:
            raise FormatError(f"{loc}: expected an object with 'idx' and 'val'")
        idx, val = rec["idx"], rec["val"]
        if not isinstance(idx, list) or len(idx) != order or not all(
                isinstance(i, int) and not isinstance(i, bool) for i in idx):
            raise FormatError(f"{loc}: 'idx' must be a list of {order} integers, got {idx!r}")
        if any(i < 1 or i > dim for i in idx):
            raise FormatError(f"{loc}: index {idx} out of range 1..{dim}")
        if tuple(idx) in seen:
            raise FormatError(f"{loc}: duplicate index {idx}")
        if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
            raise FormatError(f"{loc}: 'val' must be a finite number, got {val!r}")
        seen.add(tuple(idx))
        coords.append((tuple(i - 1 for i in idx), val))
    return build_tensor(order, dim, coords)


def vector_to_obj(v) -> dict:
    v = np.asarray(v, dtype=float)
    return {"dim": int(v.size), "values": [float(x) for x in v]}


def _values(vals, where, dim=None):
    if not isinstance(vals, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x) for x in vals):
        raise FormatError(f"{where}: expected a list of finite numbers")
    if dim is not None and len(vals) != dim:
        raise FormatError(f"{where}: expected {dim} values, got {len(vals)}")
    return np.array(vals, dtype=float)


def vector_from_obj(obj, where: str = "vector") -> np.ndarray:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    dim = _int_field(obj, "dim", where)
    return _values(obj.get("values"), f"{where}: values", dim)


def instance_to_obj(inst) -> dict:
    return {"tensor": tensor_to_obj(inst.A), "q": [float(v) for v in inst.q]}


def instance_from_obj(obj, where: str = "instance"):
    from .solve import TcpInstance

    if not isinstance(obj, dict) or "tensor" not in obj or "q" not in obj:
        raise FormatError(f"{where}: expected an object with 'tensor' and 'q'")
    A = tensor_from_obj(obj["tensor"], f"{where}: tensor")
    return TcpInstance(A, _values(obj["q"], f"{where}: q", A.dim))


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FormatError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def dumps_records(records) -> str:
    return "".join(json.dumps(r, separators=(", ", ": ")) + "\n" for r in records)


def load(path, kind: str):
    """Load a ``tensor``, ``instance``, ``vector`` or ``report`` file."""
    if kind == "report":
        try:
            with open(path, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise FormatError(f"{path}: cannot read file ({exc.strerror})") from exc
        out = []
        for k, line in enumerate(lines, 1):
            if line.strip():
                try:
                    out.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise FormatError(f"{path}: line {k}: {exc.msg}") from exc
        return out
    obj = _read_json(path)
    if kind == "tensor":
        return tensor_from_obj(obj, str(path))
    if kind == "instance":
        return instance_from_obj(obj, str(path))
    if kind == "vector":
        return vector_from_obj(obj, str(path))
    raise ValueError(f"unknown kind {kind!r}")


def store(path, obj, kind: str):
    if kind == "report":
        text = dumps_records(obj)
    elif kind == "tensor":
        text = json.dumps(tensor_to_obj(obj)) + "\n"
    elif kind == "instance":
        text = json.dumps(instance_to_obj(obj)) + "\n"
    elif kind == "vector":
        text = json.dumps(vector_to_obj(obj)) + "\n"
    else:
        raise ValueError(f"unknown kind {kind!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
