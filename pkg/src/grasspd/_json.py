"""Deterministic JSON text with floats written to 17 significant digits."""

import json
import math


def _scalar(x):
    return x is None or isinstance(x, (bool, int, float, str))


def _number(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot encode {x!r} as JSON")
    if x == 0.0:
        return "0.0"
    text = format(x, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _encode(obj, level, out):
    pad = "  " * level
    if obj is None or isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, (bool, int, float)):
        out.append(_number(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for k, (key, val) in enumerate(obj.items()):
            out.append(pad + "  " + json.dumps(str(key), ensure_ascii=False) + ": ")
            _encode(val, level + 1, out)
            out.append(",\n" if k + 1 < len(obj) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if all(_scalar(x) for x in obj):
            out.append("[")
            for k, x in enumerate(obj):
                if k:
                    out.append(", ")
                _encode(x, level + 1, out)
            out.append("]")
            return
        out.append("[\n")
        for k, x in enumerate(obj):
            out.append(pad + "  ")
            _encode(x, level + 1, out)
            out.append(",\n" if k + 1 < len(obj) else "\n")
        out.append(pad + "]")
    elif hasattr(obj, "item"):  # numpy scalars
        _encode(obj.item(), level, out)
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj):
    out = []
    _encode(obj, 0, out)
    out.append("\n")
    return "".join(out)
