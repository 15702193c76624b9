"""CSV / JSON emitters for result tables.

Floats are written with 17 significant digits in CSV and with Python's
shortest round-trip repr in JSON; both parse back to the identical double.
Nothing time-dependent is written unless metadata is explicitly requested.
"""

from __future__ import annotations

import csv
import json
import math


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return format(value, ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_csv(stream, columns, rows, meta=None):
    if meta:
        for key, value in meta.items():
            stream.write(f"# {key}: {value}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(c)) for c in columns])


def write_json(stream, columns, rows, unit, extra=None, meta=None):
    doc = {"unit": unit, "columns": list(columns),
           "rows": [{c: _json_value(row.get(c)) for c in columns} for row in rows]}
    if extra:
        doc.update(extra)
    if meta:
        doc["meta"] = meta
    json.dump(doc, stream, indent=2, allow_nan=False)
    stream.write("\n")


def emit(stream, fmt, columns, rows, unit, extra=None, meta=None):
    if fmt == "json":
        write_json(stream, columns, rows, unit, extra=extra, meta=meta)
    else:
        write_csv(stream, columns, rows, meta=meta)
