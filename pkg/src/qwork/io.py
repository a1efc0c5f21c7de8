"""Result tables and their CSV / JSON serialization."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass
class SweepResult:
    columns: list[str]
    rows: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float).reshape(-1, len(self.columns))

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]


def _plain(obj):
    """Make metadata JSON-serializable with deterministic content."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def to_csv(result: SweepResult) -> str:
    meta = _plain(result.metadata)
    lines = [f"# {key}: {json.dumps(meta[key], sort_keys=True)}" for key in sorted(meta)]
    lines.append(",".join(result.columns))
    for row in result.rows:
        lines.append(",".join("%.17g" % v for v in row))
    return "\n".join(lines) + "\n"


def to_json(result: SweepResult) -> str:
    doc = {
        "metadata": _plain(result.metadata),
        "columns": list(result.columns),
        "rows": result.rows.tolist(),
    }
    return json.dumps(doc, sort_keys=True, indent=1, allow_nan=False) + "\n"


def emit(result: SweepResult, fmt: str, path) -> Path:
    if fmt == "csv":
        text = to_csv(result)
    elif fmt == "json":
        text = to_json(result)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path


def load_json(path) -> SweepResult:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return SweepResult(doc["columns"], np.array(doc["rows"], dtype=float), doc["metadata"])


def load_csv(path) -> SweepResult:
    meta, header, rows = {}, None, []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            meta[key] = json.loads(value)
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    return SweepResult(header, np.array(rows, dtype=float), meta)
