"""Loading and preprocessing of univariate / multi-covariate series.

Three on-disk layouts are understood:

``wide_csv``
    Header row, optional leading ``t``/``timestamp`` column (ignored), one
    column per covariate.
``long_csv``
    Header ``series_id,t,value``; rows may come in any order and are sorted
    stably by ``(series_id, t)``.
``jsonl``
    One ``{"name": ..., "values": [...]}`` object per line.

Empty cells, ``NaN`` (any case) and ``null`` are read as missing. Any other
cell that does not parse as a float is also stored as missing.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import LoadError, MissingValuesError

logger = logging.getLogger(__name__)

FORMATS = ("wide_csv", "long_csv", "jsonl")
MISSING_POLICIES = ("drop", "linear_interpolate", "error")
_TIME_COLUMNS = {"t", "timestamp"}


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Ordered real samples plus the time between them."""

    name: str
    values: np.ndarray
    dt: float = 1.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float).ravel()
        if values.size < 1:
            raise ValueError(f"series {self.name!r} is empty")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (self.name == other.name and self.dt == other.dt
                and np.array_equal(self.values, other.values, equal_nan=True))

    __hash__ = None

    @property
    def has_missing(self) -> bool:
        return bool(np.isnan(self.values).any())


@dataclass(frozen=True)
class Dataset:
    name: str
    series: tuple[TimeSeries, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        series = tuple(self.series)
        if not series:
            raise ValueError(f"dataset {self.name!r} has no series")
        names = [s.name for s in series]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise ValueError(f"duplicate series names: {sorted(dup)}")
        object.__setattr__(self, "series", series)
        object.__setattr__(self, "warnings", tuple(self.warnings))

    def __len__(self):
        return len(self.series)

    def __iter__(self):
        return iter(self.series)

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.series]

    @classmethod
    def from_arrays(cls, name: str, arrays: dict[str, Sequence[float]], dt: float = 1.0) -> Dataset:
        return cls(name, tuple(TimeSeries(k, v, dt) for k, v in arrays.items()))


@dataclass(frozen=True)
class PreprocessPolicy:
    missing: str = "drop"
    max_len: int | None = 4096
    take: str = "head"
    zeros_missing: bool = False

    def __post_init__(self):
        if self.missing not in MISSING_POLICIES:
            raise ValueError(f"missing policy must be one of {MISSING_POLICIES}")
        if self.take not in ("head", "tail"):
            raise ValueError("take must be 'head' or 'tail'")
        if self.max_len is not None and self.max_len < 2:
            raise ValueError("max_len must be >= 2 (or None for unlimited)")


def _parse_cell(cell) -> float:
    if cell is None:
        return math.nan
    if isinstance(cell, (int, float)) and not isinstance(cell, bool):
        return float(cell)
    text = str(cell).strip()
    if not text or text.lower() in ("nan", "null"):
        return math.nan
    try:
        return float(text)
    except ValueError:
        return math.nan


def _read_text(path) -> str:
    try:
        return Path(path).read_bytes().decode("utf-8-sig")
    except (OSError, UnicodeDecodeError) as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc


def _load_wide(text: str, name: str, dt: float) -> Dataset:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise LoadError("zero usable columns")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise LoadError(f"mixed-length rows: line {lineno} has {len(row)} fields, "
                            f"header has {len(header)}")
    start = 1 if header and header[0].lower() in _TIME_COLUMNS else 0
    columns = {}
    for j in range(start, len(header)):
        col = np.array([_parse_cell(r[j]) for r in body], dtype=float)
        if col.size and not np.isnan(col).all():
            columns[header[j]] = col
    if not columns:
        raise LoadError("zero usable columns")
    return Dataset.from_arrays(name, columns, dt)


def _load_long(text: str, name: str, dt: float) -> Dataset:
    reader = csv.DictReader(io.StringIO(text))
    fields = [f.strip() for f in (reader.fieldnames or [])]
    if fields[:3] != ["series_id", "t", "value"]:
        if not fields:
            raise LoadError("zero usable columns")
        raise LoadError(f"long_csv header must be series_id,t,value (got {','.join(fields)})")
    reader.fieldnames = fields
    records = []
    for row in reader:
        t = _parse_cell(row["t"])
        # non-numeric time stamps sort lexically after numeric ones
        key = (0, t, "") if not math.isnan(t) else (1, 0.0, row["t"])
        records.append((row["series_id"], key, _parse_cell(row["value"])))
    if not records:
        raise LoadError("zero usable columns")
    records.sort(key=lambda r: (r[0], r[1]))
    grouped: dict[str, list[float]] = {}
    for sid, _, v in records:
        grouped.setdefault(sid, []).append(v)
    grouped = {k: v for k, v in grouped.items() if not np.isnan(v).all()}
    if not grouped:
        raise LoadError("zero usable columns")
    return Dataset.from_arrays(name, grouped, dt)


def _load_jsonl(text: str, name: str, dt: float) -> Dataset:
    arrays = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            arrays[str(obj["name"])] = [_parse_cell(v) for v in obj["values"]]
        except (ValueError, KeyError, TypeError) as exc:
            raise LoadError(f"line {lineno}: {exc}") from exc
    arrays = {k: v for k, v in arrays.items() if v and not np.isnan(v).all()}
    if not arrays:
        raise LoadError("zero usable columns")
    return Dataset.from_arrays(name, arrays, dt)


_LOADERS = {"wide_csv": _load_wide, "long_csv": _load_long, "jsonl": _load_jsonl}


def infer_format(path) -> str:
    """Guess the layout from the extension and, for CSV, the header."""
    path = Path(path)
    if path.suffix.lower() in (".jsonl", ".ndjson"):
        return "jsonl"
    with open(path, encoding="utf-8-sig") as fh:
        first = fh.readline().strip().lower()
    if first.replace(" ", "").startswith("series_id,t,value"):
        return "long_csv"
    return "wide_csv"


def load_dataset(path, format: str | None = None, name: str | None = None,
                 dt: float = 1.0) -> Dataset:
    """Read a dataset from ``path``.

    Parameters
    ----------
    path : str or Path
    format : {"wide_csv", "long_csv", "jsonl"}, optional
        Inferred with :func:`infer_format` when omitted.
    name : str, optional
        Dataset name; defaults to the file stem.
    dt : float
        Sampling interval attached to every series.

    Raises
    ------
    LoadError
        Unreadable file, no usable columns, or ragged wide rows.
    """
    path = Path(path)
    if format is None:
        if not path.exists():
            raise LoadError(f"cannot read {path}: no such file")
        format = infer_format(path)
    if format not in _LOADERS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    text = _read_text(path)
    return _LOADERS[format](text, name or path.stem, dt)


def _interpolate(values: np.ndarray) -> np.ndarray:
    ok = ~np.isnan(values)
    idx = np.flatnonzero(ok)
    if idx.size == 0:
        return values[:0]
    # interior gaps only; leading/trailing gaps cannot be interpolated
    lo, hi = idx[0], idx[-1] + 1
    pos = np.arange(lo, hi)
    return np.interp(pos, idx, values[idx])


def _truncate(values: np.ndarray, max_len: int | None, take: str) -> np.ndarray:
    if max_len is None or values.size <= max_len:
        return values
    return values[:max_len] if take == "head" else values[-max_len:]


def preprocess(d: Dataset, p: PreprocessPolicy = PreprocessPolicy()) -> Dataset:
    """Apply the missing-value policy, then truncate to ``p.max_len``.

    Series left with fewer than two samples are removed and a warning is
    appended to ``Dataset.warnings``.
    """
    kept = []
    warnings = list(d.warnings)
    for s in d.series:
        values = np.array(s.values, dtype=float)
        if p.zeros_missing:
            values[values == 0.0] = np.nan
        values[~np.isfinite(values)] = np.nan
        missing = np.isnan(values)
        if missing.any():
            if p.missing == "error":
                raise MissingValuesError(
                    f"series {s.name!r} has {int(missing.sum())} missing values")
            if p.missing == "drop":
                values = values[~missing]
            else:
                values = _interpolate(values)
        values = _truncate(values, p.max_len, p.take)
        if values.size < 2:
            msg = f"series {s.name!r} removed: {values.size} usable samples"
            logger.warning(msg)
            warnings.append(msg)
            continue
        kept.append(TimeSeries(s.name, values, s.dt))
    if not kept:
        raise MissingValuesError(f"all series removed from dataset {d.name!r}")
    return Dataset(d.name, tuple(kept), tuple(warnings))


def split_covariates(d: Dataset) -> list[Dataset]:
    """One single-series dataset per covariate, in input order."""
    return [Dataset(f"{d.name}__{s.name}", (s,), d.warnings) for s in d.series]


def write_wide_csv(path, columns: dict[str, Iterable[float]], index_name: str = "t") -> None:
    """Write equal-length columns as a wide CSV with a leading step index."""
    cols = {k: list(v) for k, v in columns.items()}
    lengths = {len(v) for v in cols.values()}
    if len(lengths) > 1:
        raise ValueError("columns must have equal length")
    n = lengths.pop() if lengths else 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([index_name, *cols])
        for i in range(n):
            w.writerow([i, *(repr(float(cols[k][i])) for k in cols)])

