"""Rectangular result tables and their CSV / JSON encodings.

CSV layout: ``#`` provenance comment lines, a header row, a units row, then
data. Floats are written with 17 significant digits so they round-trip
exactly; JSON uses Python's shortest round-trip repr, so both encodings
carry identical values.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field


@dataclass
class OutputTable:
    columns: list[str]
    units: list[str]
    rows: list[tuple] = field(default_factory=list)

    def __post_init__(self):
        if len(self.columns) != len(self.units):
            raise ValueError("columns and units differ in length")
        for row in self.rows:
            self._check(row)

    def _check(self, row):
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} cells, table has {len(self.columns)} columns")

    def append(self, *row):
        self._check(row)
        self.rows.append(tuple(row))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    return str(v)


def to_csv(table: OutputTable, metadata: dict) -> str:
    buf = io.StringIO()
    for key, value in metadata.items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    writer.writerow(table.units)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def to_json(table: OutputTable, metadata: dict) -> str:
    payload = {
        "metadata": metadata,
        "units": dict(zip(table.columns, table.units)),
        "columns": {name: [_json_value(r[i]) for r in table.rows] for i, name in enumerate(table.columns)},
    }
    return json.dumps(payload, indent=1, allow_nan=False) + "\n"


def read_csv(text: str) -> tuple[dict, OutputTable]:
    """Inverse of :func:`to_csv`; numeric cells come back as float."""
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# ") and not body:
            key, _, value = line[2:].partition(": ")
            meta[key] = value
        else:
            body.append(line)
    reader = list(csv.reader(body))
    columns, units, data = reader[0], reader[1], reader[2:]

    def conv(s):
        try:
            return float(s)
        except ValueError:
            return s

    return meta, OutputTable(columns, units, [tuple(conv(c) for c in r) for r in data])
