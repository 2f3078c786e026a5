"""CSV serialisation of convergence records."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .experiment import METHODS, ConvergenceRecord

__all__ = ["HEADER", "TableError", "export_table", "import_table", "format_table"]

HEADER = (
    "method", "assumed_order", "smoothness_s", "dim", "n",
    "replicate", "seed", "abs_error", "wce", "weight_sq_norm",
)
_INT_FIELDS = ("assumed_order", "smoothness_s", "dim", "n", "replicate", "seed")
_FLOAT_FIELDS = ("abs_error", "wce", "weight_sq_norm")


class TableError(ValueError):
    pass


def _fmt(v) -> str:
    # empty cell marks a failed (missing) replicate
    return "" if v is None else format(v, ".17g")


def format_table(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for r in sorted(records, key=lambda r: (r.method, r.n, r.replicate)):
        writer.writerow(
            [r.method]
            + [str(getattr(r, f)) for f in _INT_FIELDS]
            + [_fmt(getattr(r, f)) for f in _FLOAT_FIELDS]
        )
    return buf.getvalue()


def export_table(records, path) -> None:
    Path(path).write_text(format_table(records))


def import_table(path) -> list[ConvergenceRecord]:
    """Read records back, reporting malformed rows by line number."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}") from exc
    rows = csv.reader(io.StringIO(text))
    header = next(rows, None)
    if header is None or tuple(header) != HEADER:
        raise TableError(f"{path}:1: header must be {','.join(HEADER)}")
    records = []
    for row in rows:
        lineno = rows.line_num
        if not row:
            continue
        if len(row) != len(HEADER):
            raise TableError(f"{path}:{lineno}: expected {len(HEADER)} fields, got {len(row)}")
        cells = dict(zip(HEADER, row))
        if cells["method"] not in METHODS:
            raise TableError(f"{path}:{lineno}: unknown method {cells['method']!r}")
        try:
            ints = {f: int(cells[f]) for f in _INT_FIELDS}
            floats = {f: (None if cells[f] == "" else float(cells[f])) for f in _FLOAT_FIELDS}
            records.append(ConvergenceRecord(method=cells["method"], **ints, **floats))
        except ValueError as exc:
            raise TableError(f"{path}:{lineno}: {exc}") from exc
    return records
