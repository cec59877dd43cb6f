"""CSV/JSON writers with a fixed, byte-stable number format."""

from __future__ import annotations

import io
import json
import math
import os
from typing import Iterable, Sequence

SIG_DIGITS = 9


def fmt(value) -> str:
    """Scientific notation with 9 significant digits; ints and strings pass through."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    value = float(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.{SIG_DIGITS - 1}e}"


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO(newline="")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _jsonable(value, rounded=True):
    if isinstance(value, dict):
        return {str(k): _jsonable(v, rounded) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v, rounded) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        value = value.item()
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(fmt(value)) if rounded else value
    return value


def json_text(metadata: dict, rows: list[dict]) -> str:
    """Single JSON object; row numbers carry 9 significant digits, metadata is exact."""
    doc = {"metadata": _jsonable(metadata, rounded=False), "rows": _jsonable(rows)}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def write_text(path: str | os.PathLike, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
