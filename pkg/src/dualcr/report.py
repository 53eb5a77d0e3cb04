"""Structured run reports: versioned JSON with an optional CSV flattening.

Reports are deterministic for a fixed configuration and seed, up to the
timing field.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

SCHEMA_VERSION = "1"


@dataclass
class CheckRecord:
    name: str
    label: str
    max_residual: float
    tolerance: float
    verdict: bool
    excluded_points: int = 0
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "label": self.label,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "excluded_points": self.excluded_points,
            "verdict": self.verdict,
        }
        if self.detail:
            d["detail"] = _jsonable(self.detail)
        return d


@dataclass
class Report:
    command: str
    surface: str = ""
    grid: str = ""
    checks: list = field(default_factory=list)
    version: str = SCHEMA_VERSION
    started: float = field(default_factory=time.time)
    wall_time: float = 0.0

    def add(self, name, label, max_residual, tolerance, verdict=None,
            excluded_points=0, **detail) -> CheckRecord:
        if verdict is None:
            verdict = bool(max_residual <= tolerance)
        rec = CheckRecord(name, label, float(max_residual), float(tolerance),
                          bool(verdict), int(excluded_points), detail)
        self.checks.append(rec)
        return rec

    @property
    def passed(self) -> bool:
        return all(c.verdict for c in self.checks)

    def finish(self) -> "Report":
        self.wall_time = time.time() - self.started
        return self

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "command": self.command,
            "surface": self.surface,
            "grid": self.grid,
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
            "wall_time_seconds": round(self.wall_time, 3),
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent, default=_jsonable_value)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf)
        wr.writerow(["name", "label", "max_residual", "tolerance",
                     "excluded_points", "verdict"])
        for c in self.checks:
            wr.writerow([c.name, c.label, repr(c.max_residual),
                         repr(c.tolerance), c.excluded_points, c.verdict])
        return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return _jsonable_value(obj)


def _jsonable_value(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "ndim") and obj.ndim > 0:
        return _jsonable(obj.tolist())
    if hasattr(obj, "item"):
        v = obj.item()
        return _jsonable_value(v) if isinstance(v, complex) else v
    return obj
