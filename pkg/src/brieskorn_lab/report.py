"""Deterministic report serialization.

Reports are plain dictionaries rendered to JSON with sorted keys and a fixed
layout, so identical configurations produce byte-identical files.  Complex
numbers serialize as [re, im] pairs and exact integers as decimal strings to
survive a lossless round-trip.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import is_dataclass, asdict

import numpy as np

TOOL_NAME = "brieskorn-lab"


def encode_value(value):
    """Recursively convert a value into JSON-safe deterministic primitives."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        iv = int(value)
        # exact integers beyond the float53 window become decimal strings
        if abs(iv) > 2**53:
            return str(iv)
        return iv
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return [encode_value(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): encode_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=repr) if isinstance(value, (set, frozenset)) else value
        return [encode_value(v) for v in items]
    if hasattr(value, "to_serializable"):
        return encode_value(value.to_serializable())
    if is_dataclass(value) and not isinstance(value, type):
        return encode_value(asdict(value))
    raise TypeError(f"cannot serialize value of type {type(value)!r}")


def dumps_json(payload: dict) -> str:
    return json.dumps(encode_value(payload), sort_keys=True, indent=2) + "\n"


def dumps_csv(payload: dict) -> str:
    """Flatten the results rows of a report into CSV."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check", "name", "value", "threshold", "pass", "witness"])
    check = payload.get("check", "")
    for row in payload.get("results", []):
        writer.writerow(
            [
                check,
                row.get("name", ""),
                json.dumps(encode_value(row.get("value")), sort_keys=True),
                json.dumps(encode_value(row.get("threshold")), sort_keys=True),
                row.get("pass", ""),
                json.dumps(encode_value(row.get("witness")), sort_keys=True),
            ]
        )
    writer.writerow(["", "overall", "", "", payload.get("pass", ""), ""])
    return buf.getvalue()


def render_report(payload: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return dumps_json(payload)
    if fmt == "csv":
        return dumps_csv(payload)
    raise ValueError(f"unknown report format {fmt!r}")


def write_report(path, payload: dict, fmt: str = "json") -> str:
    text = render_report(payload, fmt)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
