"""CSV ingestion and JSON (de)serialisation of tensors and functionals."""
from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

import numpy as np

from ._layout import offsets, tensor_size
from .errors import InputError, RoughPathError
from .rough import MultiplicativeFunctional
from .signature import SampledPath
from .tensor import TruncatedTensor


def _read_text(source) -> tuple[str, str]:
    if hasattr(source, "read"):
        return source.read(), getattr(source, "name", "<stream>")
    path = Path(os.fspath(source))
    try:
        return path.read_text(encoding="utf-8"), str(path)
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not valid UTF-8") from exc


def parse_csv(text: str, name: str = "<csv>") -> SampledPath:
    """Parse ``t,x1,...,xd`` text into a path with times mapped onto [0, 1]."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise InputError(f"{name}: empty input")
    header = [c.strip() for c in rows[0]]
    d = len(header) - 1
    if d < 1 or header != ["t"] + [f"x{i}" for i in range(1, d + 1)]:
        raise InputError(f"{name}: header must be 't,x1,...,xd', got {','.join(header)!r}")
    if len(rows) < 2:
        raise InputError(f"{name}: no data rows")
    data = np.empty((len(rows) - 1, d + 1))
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != d + 1:
            raise InputError(f"{name}: row {r} has {len(row)} values, expected {d + 1}")
        for c, cell in enumerate(row, start=1):
            try:
                data[r - 2, c - 1] = float(cell)
            except ValueError:
                raise InputError(f"{name}: row {r}, column {c}: not a number: {cell!r}") from None
        if not np.all(np.isfinite(data[r - 2])):
            raise InputError(f"{name}: row {r}: non-finite value")
        if r > 2 and data[r - 2, 0] <= data[r - 3, 0]:
            raise InputError(f"{name}: row {r}: time {float(data[r - 2, 0])!r} is not increasing")
    t = data[:, 0]
    t0, t1 = float(t[0]), float(t[-1])
    times = (t - t0) / (t1 - t0) if t1 > t0 else np.zeros(1)
    if times.size > 1:
        times[-1] = 1.0
    try:
        return SampledPath(times, data[:, 1:], {"time_span": [t0, t1], "source": name})
    except RoughPathError as exc:
        raise InputError(f"{name}: {exc}") from exc


def read_csv(source) -> SampledPath:
    """Read a CSV time series from a path or an open text stream."""
    text, name = _read_text(source)
    return parse_csv(text, name)


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _levels_text(x: TruncatedTensor) -> str:
    return "[" + ",".join("[" + ",".join(map(_num, lev)) + "]" for lev in x.levels) + "]"


def write_tensor_json(x: TruncatedTensor, interval=(0.0, 1.0), meta: dict | None = None) -> str:
    """Serialise a tensor with 17 significant digits per coefficient.

    Keys appear in the fixed order d, depth, interval, levels (then meta).
    """
    parts = [
        f'"d":{x.d}',
        f'"depth":{x.depth}',
        f'"interval":[{_num(interval[0])},{_num(interval[1])}]',
        f'"levels":{_levels_text(x)}',
    ]
    if meta:
        parts.append(f'"meta":{json.dumps(meta, separators=(",", ":"))}')
    return "{" + ",".join(parts) + "}"


def _tensor_from_obj(obj: dict, where: str) -> TruncatedTensor:
    try:
        d, depth, levels = int(obj["d"]), int(obj["depth"]), obj["levels"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: missing or invalid d/depth/levels") from exc
    if not isinstance(levels, list) or len(levels) != depth + 1:
        raise InputError(f"{where}: expected {depth + 1} levels")
    for k, lev in enumerate(levels):
        if not isinstance(lev, list) or len(lev) != d**k:
            raise InputError(f"{where}: level {k} must have {d**k} entries")
    try:
        return TruncatedTensor.from_levels(levels, d=d)
    except (RoughPathError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def parse_tensor_json(text: str, name: str = "<json>") -> tuple[TruncatedTensor, tuple[float, float], dict]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{name}: invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputError(f"{name}: expected a JSON object")
    x = _tensor_from_obj(obj, name)
    interval = tuple(float(v) for v in obj.get("interval", (0.0, 1.0)))
    return x, interval, obj.get("meta", {})


def read_tensor_json(source):
    """Inverse of :func:`write_tensor_json`: (tensor, interval, meta)."""
    text, name = _read_text(source)
    return parse_tensor_json(text, name)


def write_functional_json(mf: MultiplicativeFunctional) -> str:
    """Serialise every increment X_{s,t}, s <= t, of a tabulated functional."""
    off = offsets(mf.d, mf.depth)
    incs = []
    n = len(mf)
    for i in range(n):
        for j in range(i, n):
            row = mf.table[i, j]
            levels = [[float(v) for v in row[off[k] : off[k + 1]]] for k in range(mf.depth + 1)]
            incs.append({"s_index": i, "t_index": j, "levels": levels})
    return json.dumps(
        {"d": mf.d, "depth": mf.depth, "times": [float(t) for t in mf.times], "increments": incs},
        separators=(",", ":"),
    )


def parse_functional_json(text: str, name: str = "<json>") -> MultiplicativeFunctional:
    try:
        obj = json.loads(text)
        d, depth = int(obj["d"]), int(obj["depth"])
        times = np.asarray(obj["times"], dtype=np.float64)
        incs = obj["increments"]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{name}: not a functional JSON document: {exc}") from exc
    n = times.size
    table = np.zeros((n, n, tensor_size(d, depth)))
    seen = np.zeros((n, n), dtype=bool)
    for item in incs:
        try:
            i, j = int(item["s_index"]), int(item["t_index"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{name}: increment without valid s_index/t_index") from exc
        if not 0 <= i <= j < n:
            raise InputError(f"{name}: increment index pair ({i}, {j}) out of range")
        x = _tensor_from_obj({"d": d, "depth": depth, "levels": item.get("levels")}, name)
        table[i, j] = x.flat
        seen[i, j] = True
    if not np.all(seen[np.triu_indices(n)]):
        raise InputError(f"{name}: increments missing for some pairs s <= t")
    try:
        return MultiplicativeFunctional(d, depth, times, table)
    except RoughPathError as exc:
        raise InputError(f"{name}: {exc}") from exc
