"""CSV and JSON files: explicit headers, complex values as _re/_im columns,
UTF-8 with LF endings, and atomic writes (temporary file + rename)."""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path

import numpy as np


class InputError(ValueError):
    """A data file is missing, empty or malformed."""


def atomic_write(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _fmt(v) -> str:
    return repr(float(v))


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, np.floating, int, np.integer)) and not isinstance(v, bool) else v for v in r])
    return buf.getvalue()


def write_csv(path, columns, rows) -> Path:
    return atomic_write(path, csv_text(columns, rows))


def read_table(path) -> tuple[list[str], np.ndarray]:
    """Header and float matrix of a CSV file; raises InputError when malformed."""
    p = Path(path)
    if not p.is_file():
        raise InputError(f"no such file: {p}")
    text = p.read_text(encoding="utf-8")
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise InputError(f"{p}: needs a header line and at least one data row")
    header = [c.strip() for c in rows[0]]
    data = []
    for k, r in enumerate(rows[1:], start=2):
        if len(r) != len(header):
            raise InputError(f"{p}:{k}: expected {len(header)} fields, got {len(r)}")
        try:
            data.append([float(c) for c in r])
        except ValueError as exc:
            raise InputError(f"{p}:{k}: {exc}") from exc
    arr = np.asarray(data, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{p}: non-finite values")
    return header, arr


def read_signal_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """``tau,g_re[,g_im]`` with tau strictly increasing; returns (tau, g)."""
    header, arr = read_table(path)
    if header[:2] != ["tau", "g_re"] or len(header) not in (2, 3) or (len(header) == 3 and header[2] != "g_im"):
        raise InputError(f"{path}: header must be tau,g_re[,g_im], got {','.join(header)}")
    tau = arr[:, 0]
    if tau.size < 2 or np.any(np.diff(tau) <= 0):
        raise InputError(f"{path}: tau must be strictly increasing with at least 2 samples")
    g = arr[:, 1] + (1j * arr[:, 2] if arr.shape[1] == 3 else 0.0)
    return tau, g


def complex_columns(name: str) -> list[str]:
    return [f"{name}_re", f"{name}_im"]
