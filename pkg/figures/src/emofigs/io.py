"""CSV ingestion for the documented sweep-table and vitality schemas.

The tables come from the simulator CLI: sweep CSVs carry a leading '#'
column-order comment, then a header row; the vitality export is plain
"user,vitality,dominant". This package reads only those files and never
imports the simulator.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass


class FigureInputError(ValueError):
    """Bad or unusable input table."""


EMOTIONS = ("anger", "joy", "disgust", "sadness")


@dataclass(frozen=True)
class SweepTable:
    """One sweep CSV: per-(value, seed) rows of floats keyed by column."""

    path: str
    variable: str  # name of the first column: "tau" or "gap"
    rows: tuple[dict, ...]

    def values(self) -> list[float]:
        return sorted({r[self.variable] for r in self.rows})

    def column(self, name: str, value=None) -> list[float]:
        picked = [r for r in self.rows if value is None or r[self.variable] == value]
        return [r[name] for r in picked if r[name] is not None]

    def mean_curve(self, name: str) -> tuple[list[float], list[float]]:
        xs, ys = [], []
        for v in self.values():
            col = self.column(name, v)
            if col:
                xs.append(v)
                ys.append(sum(col) / len(col))
        return xs, ys


def _require(columns, needed, path) -> None:
    missing = [c for c in needed if c not in columns]
    if missing:
        raise FigureInputError(
            f"{path}: missing column(s) {', '.join(missing)}; "
            f"found {', '.join(columns)}"
        )


def load_sweep(path, needed_columns=()) -> SweepTable:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader, None)
    if not header:
        raise FigureInputError(f"{path}: empty file")
    variable = header[0]
    if variable not in ("tau", "gap"):
        raise FigureInputError(f"{path}: first column must be tau or gap, got {variable!r}")
    _require(header, needed_columns, path)
    rows = []
    for record in reader:
        row = {}
        for key, cell in zip(header, record):
            row[key] = None if cell == "" else float(cell)
        rows.append(row)
    if not rows:
        raise FigureInputError(f"{path}: no data rows")
    return SweepTable(path=str(path), variable=variable, rows=tuple(rows))


@dataclass(frozen=True)
class VitalityTable:
    path: str
    vitalities: dict  # dominance label -> list of vitality ints

    def group(self, label: str) -> list[int]:
        return self.vitalities.get(label, [])


def load_vitality(path) -> VitalityTable:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise FigureInputError(f"{path}: empty file")
        _require(header, ("user", "vitality", "dominant"), path)
        idx_v = header.index("vitality")
        idx_d = header.index("dominant")
        groups: dict[str, list[int]] = {}
        for record in reader:
            label = record[idx_d]
            if label:
                groups.setdefault(label, []).append(int(record[idx_v]))
    if not groups:
        raise FigureInputError(f"{path}: no dominated users")
    return VitalityTable(path=str(path), vitalities=groups)


def ccdf(values) -> tuple[list[int], list[float]]:
    """Distinct sorted values and P(V >= value)."""
    n = len(values)
    if n == 0:
        return [], []
    histogram: dict[int, int] = {}
    for v in values:
        histogram[v] = histogram.get(v, 0) + 1
    xs = sorted(histogram)
    ys = []
    remaining = n
    for x in xs:
        ys.append(remaining / n)
        remaining -= histogram[x]
    return xs, ys
