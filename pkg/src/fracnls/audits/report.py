"""Structured audit results and their deterministic serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np


def _plain(x):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    return x


def format_float(x) -> str:
    """17 significant digits: enough to round-trip any double."""
    return f"{float(x):.17g}"


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
        return buf.getvalue()

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def as_dict(self) -> dict:
        return {"name": self.name, "columns": list(self.columns), "rows": [list(r) for r in self.rows]}


@dataclass
class AuditReport:
    """Outcome of one audit.

    ``checks`` holds the individual sub-criteria; ``passed`` is their conjunction.
    ``runtime_seconds`` is kept out of the canonical JSON (written as null) so that
    re-runs are byte-identical; :meth:`write` puts the measured value in a sidecar.
    """

    name: str
    params: dict
    extremals: list[dict] = field(default_factory=list)
    tables: list[Table] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)
    verdict: str = ""
    notes: list[str] = field(default_factory=list)
    runtime_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def table(self, name: str) -> Table:
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(name)

    def extremal(self, label: str) -> dict:
        for e in self.extremals:
            if e["label"] == label:
                return e
        raise KeyError(label)

    def to_dict(self, include_runtime: bool = False) -> dict:
        return _plain({
            "name": self.name,
            "params": self.params,
            "extremals": self.extremals,
            "tables": [t.as_dict() for t in self.tables],
            "checks": self.checks,
            "pass": self.passed,
            "verdict": self.verdict,
            "notes": self.notes,
            "runtime_seconds": self.runtime_seconds if include_runtime else None,
        })

    def to_json(self, include_runtime: bool = False) -> str:
        return json.dumps(self.to_dict(include_runtime), indent=2, ensure_ascii=False, allow_nan=False) + "\n"

    def write(self, outdir) -> list[str]:
        """Write ``<name>.json``, one ``<name>.<table>.csv`` per table and ``<name>.timing.json``."""
        os.makedirs(outdir, exist_ok=True)
        paths = []
        p = os.path.join(outdir, f"{self.name}.json")
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_json())
        paths.append(p)
        for t in self.tables:
            p = os.path.join(outdir, f"{self.name}.{t.name}.csv")
            with open(p, "w", encoding="utf-8", newline="") as fh:
                fh.write(t.to_csv())
            paths.append(p)
        p = os.path.join(outdir, f"{self.name}.timing.json")
        with open(p, "w", encoding="utf-8") as fh:
            json.dump({"runtime_seconds": self.runtime_seconds}, fh)
            fh.write("\n")
        return paths

    def summary_line(self) -> str:
        return f"{self.name}: {'PASS' if self.passed else 'FAIL'}" + (f" ({self.verdict})" if self.verdict else "")


def relative_change(a: float, b: float) -> float:
    return abs(b - a) / abs(a) if a != 0 else math.inf
