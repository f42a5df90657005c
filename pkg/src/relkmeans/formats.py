"""Reading and writing matrices, point sets, labels and run reports.

Matrices and point sets are dense delimited text. The delimiter is a tab for
``.tsv``/``.tab`` files and a comma otherwise unless given explicitly.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

import numpy as np

from .errors import ParseError
from .matrix import validate_matrix


def infer_delimiter(path) -> str:
    return "\t" if Path(path).suffix.lower() in (".tsv", ".tab") else ","


def _read_rows(path, delimiter):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh, delimiter=delimiter, strict=True))
    except UnicodeDecodeError as exc:
        raise ParseError(path, 1, None, f"not valid UTF-8 text ({exc.reason})") from exc
    except csv.Error as exc:
        raise ParseError(path, 1, None, f"malformed delimited text: {exc}") from exc
    # line numbers are kept 1-based; blank lines are skipped
    return [(k + 1, row) for k, row in enumerate(rows) if any(cell.strip() for cell in row)]


def _parse_grid(path, rows, first_column_names):
    names, grid, width = [], [], None
    for line, row in rows:
        cells = row
        if first_column_names:
            names.append(row[0].strip())
            cells = row[1:]
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ParseError(path, line, None, f"row has {len(cells)} values, expected {width}")
        values = []
        for col, cell in enumerate(cells, start=2 if first_column_names else 1):
            try:
                x = float(cell)
            except ValueError:
                raise ParseError(path, line, col, f"not a number: {cell.strip()[:40]!r}") from None
            if not np.isfinite(x):
                raise ParseError(path, line, col, f"non-finite value {cell.strip()!r}")
            values.append(x)
        grid.append(values)
    return names, grid


def _check_names(path, names, n):
    if len(names) != n:
        raise ParseError(path, 1, None, f"{len(names)} names for {n} rows")
    if len(set(names)) != len(names):
        raise ParseError(path, 1, None, "point names are not unique")


def read_matrix(path, delimiter: str | None = None, header: bool = False,
                row_names: bool = False, square_input: bool = False,
                tolerance: float | None = None):
    """Load a square matrix of squared dissimilarities.

    Returns ``(matrix, names)``; ``names`` is ``None`` unless a header row or a
    name column was requested. With ``square_input`` the file holds plain
    distances which are squared on load.
    """
    delimiter = delimiter or infer_delimiter(path)
    rows = _read_rows(path, delimiter)
    if not rows:
        raise ParseError(path, 1, None, "file contains no data")
    names = None
    if header:
        _, head = rows[0]
        rows = rows[1:]
        names = [h.strip() for h in (head[1:] if row_names else head)]
    col_names, grid = _parse_grid(path, rows, row_names)
    n = len(grid)
    if n == 0:
        raise ParseError(path, 1, None, "file contains no data rows")
    if len(grid[0]) != n:
        raise ParseError(path, rows[0][0], None, f"matrix is {n}x{len(grid[0])}, not square")
    if row_names:
        if names is not None and names != col_names:
            raise ParseError(path, 1, None, "header names differ from row names")
        names = col_names
    if names is not None:
        _check_names(path, names, n)
    a = np.array(grid, dtype=float)
    if square_input:
        a = a * a
    return validate_matrix(a, tolerance), names


def read_points(path, delimiter: str | None = None, header: bool = False,
                row_names: bool = False):
    """Load a point set, one point per row. Returns ``(points, names)``."""
    delimiter = delimiter or infer_delimiter(path)
    rows = _read_rows(path, delimiter)
    if header and rows:
        rows = rows[1:]
    if not rows:
        raise ParseError(path, 1, None, "file contains no points")
    names, grid = _parse_grid(path, rows, row_names)
    if row_names:
        _check_names(path, names, len(grid))
    if not grid[0]:
        raise ParseError(path, rows[0][0], None, "points have no coordinates")
    return np.array(grid, dtype=float), (names or None)


def _fmt(x: float) -> str:
    # repr is the shortest string that round-trips a double exactly
    return repr(float(x))


def write_matrix(path, matrix, names=None, delimiter: str | None = None):
    delimiter = delimiter or infer_delimiter(path)
    a = np.asarray(matrix, dtype=float)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        if names is not None:
            w.writerow(["", *names])
            for name, row in zip(names, a):
                w.writerow([name, *map(_fmt, row)])
        else:
            w.writerows([list(map(_fmt, row)) for row in a])


def write_labels(path, labels, names=None):
    """CSV with header ``point,cluster``, one row per point in input order."""
    labels = np.asarray(labels)
    ids = names if names is not None else range(len(labels))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["point", "cluster"])
        for point, c in zip(ids, labels):
            w.writerow([point, int(c)])


def report_dict(report, config, n: int, provenance: dict | None = None,
                labels_file=None, wall_time: float | None = None) -> dict:
    return {
        "input": provenance or {},
        "config": config.as_dict(),
        "n": n,
        "N": config.num_clusters,
        "objective": report.final_objective,
        "beta": report.beta_final,
        "beta_increments": [{"iteration": it, "delta": d} for it, d in report.beta_increments],
        "iterations": report.iterations,
        "converged": report.converged,
        "objective_trajectory": list(report.objective_trajectory),
        "restart_index_of_best": report.restart_index_of_best,
        "labels_file": None if labels_file is None else os.fspath(labels_file),
        "wall_time": wall_time,
    }


def write_report(path, report, config, n: int, provenance: dict | None = None,
                 labels_file=None, wall_time: float | None = None):
    doc = report_dict(report, config, n, provenance, labels_file, wall_time)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
