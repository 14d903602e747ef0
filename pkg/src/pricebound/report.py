"""Deterministic report serialization.

Reports must round-trip byte-for-byte: parsing the emitted text and
reserializing it reproduces the same bytes.  That rules out the stock
JSON encoder on two counts: float repr (17 significant digits, locale
quirks across versions) and infinities (not representable in JSON at
all).  The canonical form here fixes floats at 12 significant digits and
encodes the infinities as the strings "inf" / "-inf"; keys keep their
insertion order.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ReportEnvelope", "to_jsonable", "canonical_json", "format_sig"]


@dataclass(frozen=True)
class ReportEnvelope:
    spec_text: str
    seed: int
    reports: dict  # analysis name -> report dataclass or plain mapping
    tool_version: str
    runtime_ms: int = 0  # stays 0 unless timings were requested


def format_sig(x: float) -> str:
    """Fixed 12-significant-digit decimal form of a finite float."""
    return "%.12g" % x


def to_jsonable(obj):
    """Plain dict/list/scalar view of reports, field order preserved."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _scalar(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        if math.isnan(x):
            return '"nan"'
        return format_sig(x)
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _emit(obj, pieces: list, pad: str):
    inner = pad + "  "
    if isinstance(obj, dict):
        if not obj:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            pieces.append(inner + json.dumps(str(k), ensure_ascii=False) + ": ")
            _emit(v, pieces, inner)
            pieces.append(",\n" if i + 1 < len(obj) else "\n")
        pieces.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            pieces.append("[]")
            return
        pieces.append("[\n")
        for i, v in enumerate(obj):
            pieces.append(inner)
            _emit(v, pieces, inner)
            pieces.append(",\n" if i + 1 < len(obj) else "\n")
        pieces.append(pad + "]")
    else:
        pieces.append(_scalar(obj))


def canonical_json(obj) -> str:
    """Serialize a report (dataclasses welcome) to the canonical text form."""
    pieces: list = []
    _emit(to_jsonable(obj), pieces, "")
    pieces.append("\n")
    return "".join(pieces)
