"""Deterministic JSON output with full-precision floats.

Floats are printed with 17 significant digits so that equal doubles give
byte-identical documents regardless of platform or repetition; key order
is insertion order.  Only the types the reports need are supported.
"""

from __future__ import annotations

import json
import math
import numbers


def _fmt_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError("non-finite numbers cannot be serialized")
        return format(value, ".17g")
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _is_scalar(value) -> bool:
    return value is None or isinstance(value, (bool, str, numbers.Real))


def _render(value, indent: int, level: int) -> str:
    if _is_scalar(value):
        return _fmt_scalar(value)
    pad = " " * (indent * (level + 1))
    closing_pad = " " * (indent * level)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_render(v, indent, level + 1)}"
                 for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + closing_pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(_is_scalar(v) for v in value):
            return "[" + ", ".join(_fmt_scalar(v) for v in value) + "]"
        items = [f"{pad}{_render(v, indent, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + closing_pad + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(document, indent: int = 2) -> str:
    return _render(document, indent, 0) + "\n"
