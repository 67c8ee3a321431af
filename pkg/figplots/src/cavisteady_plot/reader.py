"""Readers for cavisteady scan CSV files.

The file layout is: comment lines starting with '#', one header row, then
long-format data rows (one per scan value and method). Plotted values are
taken verbatim from the file; rows whose requested cell is empty or whose
error column is set are skipped (the caller reports them)."""

from __future__ import annotations

import csv
import sys

from .errors import MissingColumn


def read_scan_csv(path: str) -> list[dict[str, str]]:
    """Raw rows as string dicts, comments stripped."""
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def series_for_method(
    rows: list[dict[str, str]],
    method: str,
    x_column: str,
    y_column: str,
    *,
    negate_x: bool = False,
    report=None,
) -> tuple[list[float], list[float]]:
    """(x, y) series of one method, file order preserved.

    Values equal the CSV text parsed as floats; the only transform offered
    is the explicit x negation used by detuning-scan presets. Skipped rows
    (solver error recorded, or empty cell) are reported to ``report``
    (default: a line on stderr)."""
    if report is None:
        report = lambda msg: print(msg, file=sys.stderr)
    xs: list[float] = []
    ys: list[float] = []
    for k, row in enumerate(rows):
        for col in (x_column, y_column, "method"):
            if col not in row or row[col] is None:
                raise MissingColumn(f"column {col!r} not present in the CSV")
        if row["method"] != method:
            continue
        if row.get("error"):
            report(f"skipping row {k}: solver error {row['error']!r}")
            continue
        if row[x_column] == "" or row[y_column] == "":
            report(f"skipping row {k}: empty {y_column!r} cell")
            continue
        x = float(row[x_column])
        xs.append(-x if negate_x else x)
        ys.append(float(row[y_column]))
    return xs, ys
