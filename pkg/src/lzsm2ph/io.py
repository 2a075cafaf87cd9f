"""CSV / JSON tables with a shared schema.

CSV files carry ``# key: <json>`` metadata lines, then one header row,
then data rows with every number written to 17 significant digits.  The
JSON form holds the same three parts as ``metadata``, ``columns`` and
``rows``.  Both carry ``schema_version``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


@dataclass
class Table:
    columns: list
    data: np.ndarray
    metadata: dict = field(default_factory=dict)

    def column(self, name):
        return self.data[:, self.columns.index(name)]


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _json_number(x):
    x = float(x)
    return None if math.isnan(x) else x


def write_table(path, columns, rows, metadata=None, fmt=None) -> Path:
    path = Path(path)
    known = path.suffix in (".csv", ".json")
    fmt = fmt or (path.suffix.lstrip(".") if known else "csv")
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown table format {fmt!r}")
    if not known:
        path = path.with_name(path.name + "." + fmt)
    elif path.suffix != "." + fmt:
        path = path.with_suffix("." + fmt)
    rows = np.atleast_2d(np.asarray(rows, dtype=float)) if len(rows) else np.empty((0, len(columns)))
    if rows.shape[1] != len(columns):
        raise ValueError(f"{len(columns)} columns but rows have width {rows.shape[1]}")
    meta = {"schema_version": SCHEMA_VERSION, **(metadata or {})}
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            for key, value in meta.items():
                fh.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_fmt(x) for x in row])
    else:
        doc = {"metadata": meta, "columns": list(columns),
               "rows": [[_json_number(x) for x in row] for row in rows]}
        path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return path


def read_table(path) -> Table:
    path = Path(path)
    if path.suffix == ".json":
        doc = json.loads(path.read_text())
        data = np.array([[np.nan if x is None else x for x in row] for row in doc["rows"]],
                        dtype=float).reshape(-1, len(doc["columns"]))
        return Table(doc["columns"], data, doc["metadata"])
    meta, body = {}, []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(":")
                meta[key.strip()] = json.loads(value)
            else:
                body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    data = np.array([[float(x) for x in row] for row in reader], dtype=float)
    return Table(columns, data.reshape(-1, len(columns)), meta)


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path
