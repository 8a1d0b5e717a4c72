"""Structured results of verification runs.

A :class:`DiagnosticsReport` holds per-check records and convergence tables.
Each record stores the measured value, the target and the tolerance together
with the comparison mode, and ``passed`` is recomputed from those fields, so
a reader of the JSON can re-derive every verdict.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Any

MODES = ("rel", "abs", "max", "min", "true")


def _compare(mode: str, value, target, tolerance) -> bool:
    if mode == "true":
        return bool(value)
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return False
    if mode == "rel":
        return abs(value - target) <= tolerance * abs(target)
    if mode == "abs":
        return abs(value - target) <= tolerance
    if mode == "max":
        return value <= tolerance
    if mode == "min":
        return value >= tolerance
    raise ValueError(f"unknown comparison mode {mode!r}")


@dataclass
class CheckRecord:
    """One check: ``mode`` decides how value, target and tolerance compare.

    rel:  |value - target| <= tolerance * |target|
    abs:  |value - target| <= tolerance
    max:  value <= tolerance      (value is an error or a bound)
    min:  value >= tolerance      (value is an order or a margin)
    true: value is truthy         (structural property)
    """

    name: str
    value: Any
    target: Any = None
    tolerance: Any = None
    mode: str = "max"
    note: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown comparison mode {self.mode!r}")
        if isinstance(self.value, bool) or self.value is None:
            pass
        elif isinstance(self.value, (int, float)):
            self.value = float(self.value)

    @property
    def passed(self) -> bool:
        return _compare(self.mode, self.value, self.target, self.tolerance)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "target": self.target,
            "tolerance": self.tolerance,
            "mode": self.mode,
            "note": self.note,
            "passed": self.passed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckRecord":
        return cls(d["name"], d["value"], d.get("target"), d.get("tolerance"), d.get("mode", "max"), d.get("note", ""))


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def add(self, *row):
        if len(row) != len(self.columns):
            raise ValueError("row length does not match the columns")
        self.rows.append([_plain(v) for v in row])

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_dict(self) -> dict:
        return {"columns": list(self.columns), "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_dict(cls, d: dict) -> "Table":
        return cls(list(d["columns"]), [list(r) for r in d["rows"]])


def _plain(v):
    # numpy scalars -> python, complex -> [re, im]
    if hasattr(v, "item") and not isinstance(v, (list, tuple)):
        try:
            v = v.item()
        except (ValueError, AttributeError):
            pass
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


@dataclass
class DiagnosticsReport:
    command: str
    parameters: dict = field(default_factory=dict)
    checks: list[CheckRecord] = field(default_factory=list)
    tables: dict[str, Table] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    wall_time: float = 0.0
    _t0: float = field(default_factory=time.perf_counter, repr=False, compare=False)

    def check(self, name, value, target=None, tolerance=None, mode="max", note="") -> CheckRecord:
        rec = CheckRecord(name, _plain(value), _plain(target), _plain(tolerance), mode, note)
        self.checks.append(rec)
        return rec

    def table(self, name: str, columns) -> Table:
        tab = Table(list(columns))
        self.tables[name] = tab
        return tab

    def note(self, text: str):
        self.notes.append(text)

    def finish(self) -> "DiagnosticsReport":
        self.wall_time = time.perf_counter() - self._t0
        return self

    def merge(self, other: "DiagnosticsReport", prefix: str = ""):
        for rec in other.checks:
            self.checks.append(CheckRecord(prefix + rec.name, rec.value, rec.target, rec.tolerance, rec.mode, rec.note))
        for k, tab in other.tables.items():
            self.tables[prefix + k] = tab
        self.notes.extend(other.notes)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.checks)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.checks if not r.passed]

    def __getitem__(self, name: str) -> CheckRecord:
        for r in self.checks:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self, include_time: bool = True) -> dict:
        d = {
            "command": self.command,
            "parameters": _jsonable(self.parameters),
            "checks": [r.to_dict() for r in self.checks],
            "tables": {k: v.to_dict() for k, v in self.tables.items()},
            "notes": list(self.notes),
            "passed": self.passed,
        }
        if include_time:
            d["wall_time"] = self.wall_time
        return d

    def to_json(self, include_time: bool = True) -> str:
        return json.dumps(self.to_dict(include_time), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "DiagnosticsReport":
        rep = cls(d["command"], dict(d.get("parameters", {})))
        rep.checks = [CheckRecord.from_dict(c) for c in d.get("checks", [])]
        rep.tables = {k: Table.from_dict(v) for k, v in d.get("tables", {}).items()}
        rep.notes = list(d.get("notes", []))
        rep.wall_time = float(d.get("wall_time", 0.0))
        return rep

    @classmethod
    def from_json(cls, text: str) -> "DiagnosticsReport":
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        lines = [f"{self.command}: {'PASS' if self.passed else 'FAIL'}"]
        for r in self.checks:
            lines.append(f"  [{'pass' if r.passed else 'FAIL'}] {r.name}: value={_fmt(r.value)} target={_fmt(r.target)} tol={_fmt(r.tolerance)} ({r.mode})")
        return "\n".join(lines)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return _plain(obj)
