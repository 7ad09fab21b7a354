"""Result tables and their CSV/JSON persistence."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

CSV_HEADER = ("m", "law", "metric", "value", "ci_low", "ci_high",
              "n_reps", "mean_count", "se_count", "wall_ms")
_INT_FIELDS = {"m", "n_reps"}
_STR_FIELDS = {"law", "metric"}


def fmt_float(x: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"


@dataclass
class ResultRow:
    m: int
    law: str
    metric: str
    value: float
    ci_low: float = math.nan
    ci_high: float = math.nan
    n_reps: int = 0
    mean_count: float = math.nan
    se_count: float = math.nan
    wall_ms: float = math.nan

    def as_strings(self) -> list[str]:
        out = []
        for name in CSV_HEADER:
            v = getattr(self, name)
            if name in _INT_FIELDS:
                out.append(str(int(v)))
            elif name in _STR_FIELDS:
                out.append(str(v))
            else:
                out.append(fmt_float(v))
        return out

    def same_as(self, other: "ResultRow", ignore=()) -> bool:
        for f in fields(self):
            if f.name in ignore:
                continue
            a, b = getattr(self, f.name), getattr(other, f.name)
            if isinstance(a, float) and math.isnan(a):
                if not (isinstance(b, float) and math.isnan(b)):
                    return False
            elif a != b:
                return False
        return True


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    # per-row bootstrap replicates keyed by (m, law); kept in memory only
    replicates: dict = field(default_factory=dict, repr=False)

    def append(self, row: ResultRow, replicates=None) -> None:
        self.rows.append(row)
        if replicates is not None:
            self.replicates[(row.m, row.law)] = np.asarray(replicates)

    def for_law(self, law: str) -> list[ResultRow]:
        return [r for r in self.rows if r.law == law]

    def to_csv_text(self) -> str:
        lines = [",".join(CSV_HEADER)]
        lines.extend(",".join(r.as_strings()) for r in self.rows)
        return "\n".join(lines) + "\n"

    def write(self, path) -> tuple[Path, Path]:
        """Write the CSV at ``path`` and the JSON companion next to it."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv_text(), encoding="utf-8")
        side = path.with_suffix(".json")
        side.write_text(json.dumps(_jsonable(self.meta), indent=2, sort_keys=True) + "\n",
                        encoding="utf-8")
        return path, side

    @classmethod
    def read(cls, path) -> "ResultTable":
        path = Path(path)
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = tuple(next(reader))
            if header != CSV_HEADER:
                raise ValueError(f"unexpected CSV header {header}")
            rows = []
            for rec in reader:
                kw = {}
                for name, text in zip(header, rec):
                    if name in _INT_FIELDS:
                        kw[name] = int(text)
                    elif name in _STR_FIELDS:
                        kw[name] = text
                    else:
                        kw[name] = float(text)
                rows.append(ResultRow(**kw))
        side = path.with_suffix(".json")
        meta = json.loads(side.read_text(encoding="utf-8")) if side.exists() else {}
        return cls(rows, meta)


def _jsonable(obj):
    """Convert numpy scalars, tuples and floats (17 digits, NaN as null) for JSON."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(fmt_float(x))
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj
