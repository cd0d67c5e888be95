"""Deterministic JSON text with 17-significant-digit floats.

``json.dumps`` writes the shortest round-trip repr; artifacts here use a
fixed ``%.17g`` instead so that diffs line up digit for digit. Non-finite
floats become null.
"""

from __future__ import annotations

import json
import math

import numpy as np


def _float(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    s = f"{v:.17g}"
    # keep it a JSON number that reads back as float
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def _emit(obj, indent: int, level: int, out: list[str]) -> None:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," if indent else ", "
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append(json.dumps(None if obj is None else bool(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for n, (k, v) in enumerate(obj.items()):
            if n:
                out.append(sep)
            out.append(pad + json.dumps(str(k), ensure_ascii=False) + ": ")
            _emit(v, indent, level + 1, out)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        # numeric rows stay on one line
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj)
        out.append("[")
        for n, v in enumerate(obj):
            if n:
                out.append(", " if flat else sep)
            if not flat:
                out.append(pad)
            _emit(v, indent, level + 1, out)
        out.append("]" if flat else end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _emit(obj, indent, 0, out)
    return "".join(out) + "\n"


def loads(text: str):
    return json.loads(text)
