"""CSV output with '#'-prefixed metadata lines and exact float text."""
from __future__ import annotations

import csv
import io
import math

import numpy as np


def fmt(value):
    """Shortest round-tripping text for floats; plain str otherwise."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def render(columns, rows, meta=()):
    buf = io.StringIO()
    for line in meta:
        buf.write(line if line.startswith("#") else "# " + line)
        buf.write("\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def write(path, columns, rows, meta=()):
    text = render(columns, rows, meta)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text


def read(path):
    """(metadata lines, header, rows as lists of str)."""
    meta, body = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            (meta if line.startswith("#") else body).append(line.rstrip("\n"))
    rows = list(csv.reader(body))
    if not rows:
        return meta, [], []
    return meta, rows[0], rows[1:]


def read_columns(path):
    """(metadata, {column: float array}) for numeric CSV files."""
    meta, header, rows = read(path)
    data = np.array([[float(x) for x in r] for r in rows], dtype=float).reshape(len(rows), len(header))
    return meta, {name: data[:, i] for i, name in enumerate(header)}
