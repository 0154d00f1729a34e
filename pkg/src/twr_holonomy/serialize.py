"""Deterministic report output: JSON with 17-significant-digit floats and CSV
with a fixed column order."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

REPORT_COLUMNS = (
    "scenario_id",
    "kind",
    "mass",
    "v1_x", "v1_y", "v1_z",
    "v2_x", "v2_y", "v2_z",
    "speed",
    "algebraic_angle",
    "algebraic_axis_x", "algebraic_axis_y", "algebraic_axis_z",
    "geometric_angle",
    "geometric_axis_x", "geometric_axis_y", "geometric_axis_z",
    "angle_diff",
    "axis_deviation",
    "su2_deviation",
    "discretization_estimate",
    "tolerance",
    "steps",
    "pass",
)

WIGNER_COLUMNS = (
    ("angle", "axis_x", "axis_y", "axis_z")
    + tuple(f"r{i}{j}" for i in range(3) for j in range(3))
)

HOLONOMY_COLUMNS = (
    ("angle", "axis_x", "axis_y", "axis_z", "convergence", "frame", "engine", "degenerate", "steps")
    + tuple(f"u{i}{j}_{part}" for i in range(2) for j in range(2) for part in ("re", "im"))
    + tuple(f"r{i}{j}" for i in range(3) for j in range(3))
)


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x} cannot be serialized")
    if x == 0.0:
        return "0.0"  # also folds -0.0
    text = format(x, ".17g")
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _emit(obj, indent: int, level: int, out: list) -> None:
    pad = " " * (indent * (level + 1))
    end_pad = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for k, (key, val) in enumerate(obj.items()):
            out.append(pad + json.dumps(key) + ": ")
            _emit(val, indent, level + 1, out)
            out.append(",\n" if k < len(obj) - 1 else "\n")
        out.append(end_pad + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
        elif all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            parts = []
            for v in obj:
                _emit(v, indent, level + 1, parts)
            out.append("[" + ", ".join(parts) + "]")
        else:
            out.append("[\n")
            for k, val in enumerate(obj):
                out.append(pad)
                _emit(val, indent, level + 1, out)
                out.append(",\n" if k < len(obj) - 1 else "\n")
            out.append(end_pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj, indent: int = 2) -> str:
    out: list[str] = []
    _emit(_plain(obj), indent, 0, out)
    return "".join(out) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def dumps_csv(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def report_row(report: dict) -> dict:
    """Flatten a report dict into REPORT_COLUMNS."""
    params = report["parameters"]
    row = {k: report[k] for k in REPORT_COLUMNS if k in report}
    row["mass"] = params.get("mass")
    for name in ("v1", "v2"):
        if name in params:
            for c, x in zip("xyz", params[name]):
                row[f"{name}_{c}"] = x
    row["speed"] = params.get("speed")
    for side in ("algebraic", "geometric"):
        for c, x in zip("xyz", report[f"{side}_axis"]):
            row[f"{side}_axis_{c}"] = x
    return row


def schema_path():
    """Location of the published JSON schema for command output."""
    from pathlib import Path

    return Path(__file__).parent / "schemas" / "report.schema.json"
