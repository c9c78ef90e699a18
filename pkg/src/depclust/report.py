"""Analysis configuration and the versioned JSON report.

Column indices in reports are 1-based. Floats are written with 17
significant digits so that parsing a report gives back the same numbers.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .csvio import format_float, matrix_to_csv

SCHEMA_VERSION = 1
TOOL_NAME = "depclust"


@dataclass(frozen=True)
class AnalysisConfig:
    rank_tol: str = "default"
    zero_tol: float | None = None
    edge_tol: float = 1e-8
    threshold_policy: str = "local-maxima"
    seed: int = 0
    target: str | None = None
    column: int | None = None

    def __post_init__(self):
        for name in ("zero_tol", "edge_tol"):
            val = getattr(self, name)
            if val is not None and not (val >= 0 and math.isfinite(val)):
                raise ValueError(f"{name} must be finite and >= 0")


@dataclass
class AnalysisReport:
    command: str
    config: dict
    input: dict
    independent: list = field(default_factory=list)
    clusters: list = field(default_factory=list)
    feature_selection: dict | None = None
    perturbation: dict | None = None
    signature: list | None = None
    schema_version: int = SCHEMA_VERSION
    tool: str = TOOL_NAME
    version: str = ""

    def to_dict(self) -> dict:
        order = ["schema_version", "tool", "version", "command", "config", "input",
                 "independent", "clusters", "feature_selection", "perturbation", "signature"]
        d = asdict(self)
        return {k: d[k] for k in order}

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in known})


def plain(obj):
    """Convert numpy scalars/arrays and tuples to JSON-ready Python values."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _encode(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(v is None or isinstance(v, (int, float, str)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [_encode(v, indent, level + 1) for v in obj]
        return "[" + pad + ("," + pad).join(items) + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _encode(plain(obj), indent, 0) + "\n"


def write_report(report: AnalysisReport, fmt: str = "json") -> bytes:
    """Serialize a report. ``csv-matrix`` dumps only the signature matrix."""
    if fmt == "json":
        return dumps(report.to_dict()).encode("utf-8")
    if fmt == "csv-matrix":
        if report.signature is None:
            raise ValueError("report carries no matrix to dump")
        return matrix_to_csv(np.asarray(report.signature, dtype=float)).encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}")


def read_report(data: bytes | str) -> AnalysisReport:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return AnalysisReport.from_dict(json.loads(data))
