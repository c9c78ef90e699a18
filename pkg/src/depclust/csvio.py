"""Numeric CSV ingestion and matrix dumps."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .featsel import Dataset


class CsvFormatError(ValueError):
    """Malformed numeric CSV. ``row`` and ``col`` are 1-based data coordinates."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        super().__init__(message)
        self.row = row
        self.col = col


@dataclass(frozen=True)
class LabeledMatrix:
    values: np.ndarray
    names: tuple[str, ...] | None = None


def _resolve_target(target, names, ncols) -> int:
    if isinstance(target, int):
        idx = target
    elif names is not None and target in names:
        return names.index(target)
    elif str(target).lstrip("-").isdigit():
        idx = int(target)
    else:
        raise CsvFormatError(f"target column {target!r} not found in header")
    if not 1 <= idx <= ncols:
        raise CsvFormatError(f"target column {idx} out of range 1..{ncols}")
    return idx - 1


def read_matrix_csv(path, header: bool = True, delimiter: str = ",", target_column=None):
    """Read an all-numeric CSV into a matrix (rows are records).

    With ``target_column`` (a header name or 1-based index) the result is a
    :class:`Dataset` whose ``b`` is that column; otherwise a
    :class:`LabeledMatrix`.
    """
    text = Path(path).read_text(encoding="utf-8-sig")
    records = [r for r in csv.reader(io.StringIO(text), delimiter=delimiter) if r]
    names = None
    if header:
        if not records:
            raise CsvFormatError(f"{path}: empty file")
        names = [h.strip() for h in records[0]]
        records = records[1:]
    if not records:
        raise CsvFormatError(f"{path}: no data rows")

    width = len(names) if names is not None else len(records[0])
    values = np.empty((len(records), width))
    for r, rec in enumerate(records, start=1):
        if len(rec) != width:
            raise CsvFormatError(
                f"{path}: row {r} has {len(rec)} fields, expected {width}", row=r
            )
        for c, cell in enumerate(rec, start=1):
            try:
                val = float(cell)
            except ValueError:
                raise CsvFormatError(
                    f"{path}: non-numeric cell {cell.strip()!r} at row {r}, column {c}", r, c
                ) from None
            if not math.isfinite(val):
                raise CsvFormatError(f"{path}: non-finite cell at row {r}, column {c}", r, c)
            values[r - 1, c - 1] = val

    if target_column is None:
        return LabeledMatrix(values, tuple(names) if names is not None else None)
    t = _resolve_target(target_column, names, width)
    keep = [j for j in range(width) if j != t]
    if not keep:
        raise CsvFormatError("target is the only column; no features remain")
    feat_names = tuple(names[j] for j in keep) if names is not None else None
    target_name = names[t] if names is not None else str(t + 1)
    return Dataset(values[:, keep], values[:, t], feat_names, target_name)


def format_float(x: float) -> str:
    """17 significant digits, always carrying a decimal point or exponent."""
    s = format(float(x), ".17g")
    if not any(ch in s for ch in ".enN"):
        s += ".0"
    return s


def matrix_to_csv(M: np.ndarray, names=None, delimiter: str = ",") -> str:
    lines = []
    if names is not None:
        lines.append(delimiter.join(names))
    for row in np.atleast_2d(M):
        lines.append(delimiter.join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def write_matrix_csv(path, M: np.ndarray, names=None, delimiter: str = ",") -> None:
    Path(path).write_text(matrix_to_csv(M, names, delimiter), encoding="utf-8")
