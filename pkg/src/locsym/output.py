"""Deterministic serialization for CLI outputs.

Identical inputs must give byte-identical files, so floats are printed
through fixed format strings instead of whatever repr the platform json
module picks: %.17g round-trips every finite double. Key order is insertion
order; the caller builds dicts in the order the schema documents. NaN and
infinities are rejected early since they have no JSON encoding.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

__all__ = ["format_float", "json_text", "write_json", "write_csv"]


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite float {x!r} cannot be serialized")
    s = "%.17g" % x
    # -0.0 prints as -0; normalize so equal values serialize equally
    return "0" if s == "-0" else s


def _escape(s: str) -> str:
    out = []
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append({"\n": "\\n", "\t": "\\t", "\r": "\\r"}.get(ch, "\\u%04x" % ord(ch)))
        else:
            out.append(ch)
    return "".join(out)


def _emit(v, indent: int, parts: list) -> None:
    pad = "  " * indent
    if isinstance(v, np.generic):
        v = v.item()
    if v is None:
        parts.append("null")
    elif isinstance(v, bool):
        # bool before int: bool is an int subclass
        parts.append("true" if v else "false")
    elif isinstance(v, int):
        parts.append(str(v))
    elif isinstance(v, float):
        parts.append(format_float(v))
    elif isinstance(v, str):
        parts.append(f'"{_escape(v)}"')
    elif isinstance(v, dict):
        if not v:
            parts.append("{}")
            return
        parts.append("{\n")
        for i, (k, item) in enumerate(v.items()):
            if not isinstance(k, str):
                raise TypeError(f"JSON object keys must be str, got {type(k).__name__}")
            parts.append(f'{pad}  "{_escape(k)}": ')
            _emit(item, indent + 1, parts)
            parts.append(",\n" if i < len(v) - 1 else "\n")
        parts.append(pad + "}")
    elif isinstance(v, (list, tuple)):
        if not len(v):
            parts.append("[]")
            return
        parts.append("[\n")
        for i, item in enumerate(v):
            parts.append(pad + "  ")
            _emit(item, indent + 1, parts)
            parts.append(",\n" if i < len(v) - 1 else "\n")
        parts.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(v).__name__} to JSON")


def json_text(obj) -> str:
    parts: list = []
    _emit(obj, 0, parts)
    parts.append("\n")
    return "".join(parts)


def write_json(path, obj) -> None:
    Path(path).write_text(json_text(obj))


def write_csv(path, header, rows) -> None:
    """CSV with repr-exact floats and unix newlines regardless of platform."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, np.generic):
                v = v.item()
            if isinstance(v, float):
                cells.append(format_float(v))
            elif isinstance(v, bool):
                cells.append("true" if v else "false")
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")
