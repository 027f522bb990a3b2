"""Point-forecast error metrics and the pairwise relative-error gain."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, LoadError, UndefinedDelta

FAMILIES = ("statistical", "deep_learning", "pretrained", "zero_shot", "fine_tuned", "agentic")


def _pair(target, forecast) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(target, dtype=float).ravel()
    f = np.asarray(forecast, dtype=float).ravel()
    if y.size != f.size or y.size < 1:
        raise DataError(f"target and forecast must be non-empty and equal length ({y.size} vs {f.size})")
    if not (np.isfinite(y).all() and np.isfinite(f).all()):
        raise DataError("target and forecast must be finite")
    return y, f


def smape(target, forecast) -> float:
    """Symmetric MAPE on the [0, 2] scale.

    Each step contributes ``2|f - y| / (|f| + |y|)``; a step with
    ``f == y == 0`` contributes 0.
    """
    y, f = _pair(target, forecast)
    num = 2.0 * np.abs(f - y)
    den = np.abs(f) + np.abs(y)
    terms = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
    return float(terms.mean())


def mse(target, forecast) -> float:
    y, f = _pair(target, forecast)
    return float(np.mean((f - y) ** 2))


def relative_error_delta(smape_a: float, smape_b: float) -> float:
    """``100 (a - b) / a``; negative means model A has the lower error."""
    if smape_a == 0:
        raise UndefinedDelta("relative error gain is undefined when sMAPE(A) is 0")
    return 100.0 * (smape_a - smape_b) / smape_a


@dataclass(frozen=True)
class MetricRow:
    model: str
    family: str
    dataset: str
    smape: float
    mse: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown model family {self.family!r}; expected one of {FAMILIES}")
        if not 0.0 <= self.smape <= 2.0:
            raise ValueError(f"sMAPE {self.smape} outside [0, 2]")
        if self.mse is not None and not self.mse >= 0:
            raise ValueError(f"MSE {self.mse} must be non-negative")


@dataclass(frozen=True)
class DeltaRecord:
    model_a: str
    model_b: str
    dataset: str
    omega: float
    delta_pct: float


METRIC_HEADER = ["model", "family", "dataset", "smape", "mse"]


def write_metric_rows(path, rows) -> None:
    rows = list(rows)
    with_mse = any(r.mse is not None for r in rows)
    header = METRIC_HEADER if with_mse else METRIC_HEADER[:4]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            out = [r.model, r.family, r.dataset, repr(r.smape)]
            if with_mse:
                out.append("" if r.mse is None else repr(r.mse))
            w.writerow(out)


def read_metric_rows(path) -> list[MetricRow]:
    """Parse a ``model,family,dataset,smape[,mse]`` CSV."""
    try:
        fh = open(Path(path), newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc
    rows = []
    with fh:
        reader = csv.DictReader(fh)
        missing = {"model", "family", "dataset", "smape"} - set(reader.fieldnames or [])
        if missing:
            raise LoadError(f"{path}: missing columns {sorted(missing)}")
        for lineno, rec in enumerate(reader, start=2):
            try:
                raw_mse = (rec.get("mse") or "").strip()
                rows.append(MetricRow(rec["model"], rec["family"], rec["dataset"],
                                      float(rec["smape"]),
                                      float(raw_mse) if raw_mse else None))
            except ValueError as exc:
                raise LoadError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise LoadError(f"{path}: no metric rows")
    return rows

