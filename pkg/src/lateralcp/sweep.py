"""Rectangular parameter grids, deterministic parallel evaluation, CSV/JSON emission."""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .errors import ConfigError

PROVENANCE_COLUMNS = ("scenario_hash", "code_version")


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int
    scale: str = "linear"
    points: tuple[float, ...] | None = None

    @classmethod
    def from_points(cls, name: str, points) -> "Axis":
        pts = tuple(float(p) for p in points)
        if not pts:
            raise ConfigError(f"axis {name!r}: no points")
        return cls(name, pts[0], pts[-1], len(pts), "list", pts)

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ConfigError(f"axis {self.name!r}: count must be >= 1")
        if self.scale not in ("linear", "log", "list"):
            raise ConfigError(f"axis {self.name!r}: scale must be 'linear' or 'log'")
        if self.scale == "list" and (self.points is None or len(self.points) != self.count):
            raise ConfigError(f"axis {self.name!r}: list axes need exactly count points")
        if self.scale == "log" and not (self.start > 0 and self.stop > 0):
            raise ConfigError(f"axis {self.name!r}: log axes need positive bounds")

    def values(self) -> np.ndarray:
        if self.points is not None:
            return np.array(self.points, dtype=float)
        if self.count == 1:
            return np.array([float(self.start)])
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def to_dict(self) -> dict:
        out = {"name": self.name, "start": self.start, "stop": self.stop, "count": self.count, "scale": self.scale}
        if self.points is not None:
            out["points"] = list(self.points)
        return out


def scenario_hash(config: Any) -> str:
    """Short stable digest of a JSON-serializable scenario description."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def format_value(v: Any) -> str:
    """Shortest round-trip text for floats; plain text otherwise."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return repr(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    return str(getattr(v, "value", v))


def parse_value(text: str) -> Any:
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


@dataclass
class SweepGrid:
    """Row-major records over the Cartesian product of ``axes`` (last axis fastest)."""

    axes: list[Axis]
    payload: list[str]
    records: list[dict] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        expected = math.prod(a.count for a in self.axes) if self.axes else len(self.records)
        if self.records and len(self.records) != expected:
            raise ConfigError(f"grid holds {len(self.records)} records, axes imply {expected}")

    @property
    def columns(self) -> list[str]:
        cols = [a.name for a in self.axes] + list(self.payload)
        extra = [k for k in (self.records[0] if self.records else {}) if k not in cols and k not in PROVENANCE_COLUMNS]
        return cols + extra + list(PROVENANCE_COLUMNS)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.records], dtype=float)

    def to_csv(self, path: str | Path | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = self.columns
        w.writerow(cols)
        for rec in self.records:
            w.writerow([format_value(rec.get(c)) for c in cols])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    def to_json(self, path: str | Path | None = None) -> str:
        def clean(v):
            if isinstance(v, (float, np.floating)):
                v = float(v)
                return None if math.isnan(v) else v
            if isinstance(v, (np.integer,)):
                return int(v)
            return getattr(v, "value", v)

        doc = {
            "meta": {**self.meta, "axes": [a.to_dict() for a in self.axes], "payload": list(self.payload)},
            "records": [{c: clean(r.get(c)) for c in self.columns} for r in self.records],
        }
        text = json.dumps(doc, indent=1, sort_keys=False) + "\n"
        if path is not None:
            Path(path).write_text(text)
        return text

    def write(self, path: str | Path | None, fmt: str = "csv") -> str:
        if fmt == "csv":
            return self.to_csv(path)
        if fmt == "json":
            return self.to_json(path)
        raise ConfigError(f"unknown output format {fmt!r}")


def parse_csv_text(text: str) -> list[dict]:
    """Parse CSV text written by :meth:`SweepGrid.to_csv` back into records."""
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    return [{h: parse_value(v) for h, v in zip(header, row)} for row in body]


def read_csv_records(path: str | Path) -> list[dict]:
    return parse_csv_text(Path(path).read_text())


def grid_points(axes: Sequence[Axis]) -> list[tuple[float, ...]]:
    return list(itertools.product(*(a.values() for a in axes)))


def parallel_map(fn: Callable[[Any], Any], items: Iterable[Any], threads: int = 1) -> list[Any]:
    """Evaluate independent grid points; results come back in input order."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_sweep(
    axes: Sequence[Axis],
    fn: Callable[..., dict],
    payload: Sequence[str],
    config: Any = None,
    threads: int = 1,
    meta: dict | None = None,
) -> SweepGrid:
    """Evaluate ``fn(**point)`` on every grid point and stamp provenance on each record."""
    names = [a.name for a in axes]
    digest = scenario_hash(config)

    def one(point):
        rec = dict(zip(names, (float(v) for v in point)))
        rec.update(fn(**rec))
        rec["scenario_hash"] = digest
        rec["code_version"] = __version__
        return rec

    records = parallel_map(one, grid_points(axes), threads)
    info = {"scenario_hash": digest, "code_version": __version__}
    info.update(meta or {})
    return SweepGrid(list(axes), list(payload), records, info)


def stamp(records: list[dict], config: Any) -> list[dict]:
    digest = scenario_hash(config)
    for r in records:
        r["scenario_hash"] = digest
        r["code_version"] = __version__
    return records
