"""Flat-file export: versioned CSV and JSON, written atomically."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

SCHEMA = "deltac-v1"
SCHEMA_LINE = f"#schema={SCHEMA}"

KERNEL_COLUMNS = ("x", "y", "m", "re_eta", "im_eta")
SWEEP_COLUMNS = ("sigma", "k_or_xmean", "L", "omega_or_gamma", "E_kinetic", "E_coupling",
                 "E_nonhermitian", "E_total", "method")


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return "%.17g" % (v + 0.0)  # drops the sign of -0.0
    return str(v)


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_csv(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def render_json(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    records = [dict(zip(columns, row)) for row in rows]
    return json.dumps({"schema": SCHEMA, "columns": list(columns), "rows": records},
                      indent=1, allow_nan=True) + "\n"


def render(columns, rows, fmt: str = "csv") -> str:
    rows = list(rows)
    if fmt == "csv":
        return render_csv(columns, rows)
    if fmt == "json":
        return render_json(columns, rows)
    raise ValueError(f"unknown format {fmt!r}")


def write_table(path, columns, rows, fmt: str = "csv") -> None:
    atomic_write(path, render(columns, rows, fmt))


def _parse(cell: str):
    try:
        return float(cell)
    except ValueError:
        return cell


def read_csv(path) -> tuple[list[str], list[list]]:
    """Read a file written by :func:`write_table`; numeric cells come back as floats."""
    with open(path, encoding="utf-8", newline="") as fh:
        first = fh.readline().rstrip("\n")
        if first != SCHEMA_LINE:
            raise ValueError(f"missing schema line, found {first!r}")
        reader = csv.reader(fh)
        header = next(reader)
        return header, [[_parse(c) for c in row] for row in reader]
