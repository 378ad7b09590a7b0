"""Byte-stable CSV and JSON emission plus the shipped report schemas."""

import csv
import io
import json
import math
from importlib import resources

import numpy as np

SCHEMA_VERSION = 1
FLOAT_FMT = ".17g"


def fmt(v):
    """CSV cell text: floats with 17 significant digits, everything else as str."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), FLOAT_FMT)
    if v is None:
        return ""
    return str(v)


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def json_text(report):
    """Canonical JSON: sorted keys, fixed indentation, non-finite floats as null."""
    return json.dumps(_jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_text(path, text):
    """Write with LF line endings regardless of platform."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def load_schema(name):
    """Shipped JSON schema for the report of a command (synth, classify, ...)."""
    ref = resources.files("su2mintime").joinpath("schemas", f"{name}.schema.json")
    return json.loads(ref.read_text(encoding="utf-8"))
