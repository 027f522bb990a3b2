"""End-to-end workflows shared by the command line and the notebooks.

``run_sweep`` reproduces the controlled synthetic experiment with the two
baseline forecasters; ``run_stats`` runs the correlation / binning / trend
analysis on externally produced leaderboard rows.
"""
from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import statlab
from .baselines import ForecastTask, naive_forecast, season_from_peak, seasonal_naive_forecast
from .errors import DataError, LoadError, SpecPredError
from .forecast_metrics import DeltaRecord, MetricRow, mse, relative_error_delta, smape
from .spectral import SpectralConfig, omega
from .synthgen import SweepFailure, generate_sweep

DEFAULT_TARGETS = tuple(round(0.2 + 0.1 * i, 10) for i in range(7))


@dataclass
class SweepSeries:
    dataset: str
    target_omega: float
    achieved_omega: float
    context_omega: float
    season_length: int


@dataclass
class SweepOutcome:
    rows: list[MetricRow]
    series: list[SweepSeries]
    failures: list[SweepFailure]
    report: dict = field(default_factory=dict)

    def level_means(self, model: str) -> dict[float, float]:
        target = {s.dataset: s.target_omega for s in self.series}
        acc = defaultdict(list)
        for r in self.rows:
            if r.model == model:
                acc[target[r.dataset]].append(r.smape)
        return {k: float(np.mean(v)) for k, v in sorted(acc.items())}

    def xy(self, model: str, metric: str = "smape") -> tuple[np.ndarray, np.ndarray]:
        om = {s.dataset: s.context_omega for s in self.series}
        pts = [(om[r.dataset], getattr(r, metric)) for r in self.rows if r.model == model]
        x, y = zip(*pts)
        return np.array(x), np.array(y)


def forecast_window(values: np.ndarray, context: int, horizon: int,
                    spectral_cfg: SpectralConfig = SpectralConfig()):
    """Split the head of ``values`` and run both baselines.

    Omega and the season length come from the context window alone.
    """
    if values.size < context + horizon:
        raise DataError(f"series of length {values.size} cannot hold context {context} "
                        f"+ horizon {horizon}")
    ctx, target = values[:context], values[context:context + horizon]
    rep = omega(ctx, spectral_cfg)
    season = season_from_peak(context, rep.peak_bins[0])
    task = ForecastTask(ctx, horizon, season)
    return rep, season, target, {"Naive": naive_forecast(task),
                                 "Seasonal_Naive": seasonal_naive_forecast(task)}


def _safe(fn, *args):
    try:
        return fn(*args)
    except (SpecPredError, ValueError) as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}


def _corr(x, y) -> dict:
    res = _safe(statlab.correlation_summary, x, y)
    return res if isinstance(res, dict) else res.to_dict()


def run_sweep(targets=DEFAULT_TARGETS, per_level: int = 10, length: int = 4096,
              seed: int = 0, context: int = 512, horizon: int = 96,
              tolerance: float = 0.02, n_harmonics: int = 1,
              spectral_cfg: SpectralConfig = SpectralConfig()) -> SweepOutcome:
    """Calibrated synthetic sweep scored with Naive and Seasonal Naive."""
    if context + horizon > length:
        raise ValueError("context + horizon must not exceed length")
    results = generate_sweep(targets, per_level, length, seed, tolerance, n_harmonics)
    rows, series, failures = [], [], []
    for res in results:
        if isinstance(res, SweepFailure):
            failures.append(res)
            continue
        name = res.series.name
        rep, season, target, forecasts = forecast_window(res.series.values, context, horizon,
                                                         spectral_cfg)
        series.append(SweepSeries(name, res.target_omega, res.achieved_omega, rep.omega, season))
        for model, f in forecasts.items():
            rows.append(MetricRow(model, "statistical", name, smape(target, f), mse(target, f)))
    out = SweepOutcome(rows, series, failures)
    if not series:
        return out
    report = {"n_series": len(series), "n_failed": len(failures),
              "length": length, "context": context, "horizon": horizon, "seed": seed,
              "targets": [float(t) for t in targets], "per_level": per_level, "models": {}}
    for model in ("Naive", "Seasonal_Naive"):
        x, y = out.xy(model)
        _, m = out.xy(model, "mse")
        report["models"][model] = {
            "smape": _corr(x, y), "mse": _corr(x, m),
            "mean_smape_by_target": {f"{k:.2f}": v for k, v in out.level_means(model).items()},
        }
    out.report = report
    return out


def read_omega_table(path) -> dict[str, dict]:
    """``dataset,omega[,lle]`` CSV keyed by dataset."""
    try:
        fh = open(Path(path), newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc
    table = {}
    with fh:
        reader = csv.DictReader(fh)
        if not {"dataset", "omega"} <= set(reader.fieldnames or []):
            raise LoadError(f"{path}: header must contain dataset,omega")
        for lineno, rec in enumerate(reader, start=2):
            try:
                lle = (rec.get("lle") or "").strip()
                table[rec["dataset"]] = {"omega": float(rec["omega"]),
                                         "lle": float(lle) if lle else None}
            except ValueError as exc:
                raise LoadError(f"{path}:{lineno}: {exc}") from exc
    if not table:
        raise LoadError(f"{path}: no rows")
    return table


def join_rows(rows: list[MetricRow], omegas: dict[str, dict]) -> None:
    missing = sorted({r.dataset for r in rows} - set(omegas))
    if missing:
        raise LoadError("datasets without an omega value: " + ", ".join(missing))


def _per_dataset(rows, select) -> dict[str, float]:
    acc = defaultdict(list)
    for r in rows:
        if select(r):
            acc[r.dataset].append(r.smape)
    return {k: float(np.mean(v)) for k, v in acc.items()}


def resolve_side(rows: list[MetricRow], key: str) -> dict[str, float]:
    """Per-dataset sMAPE for a model name, or the family mean for a family name."""
    models = {r.model for r in rows}
    families = {r.family for r in rows}
    if key in models:
        return _per_dataset(rows, lambda r: r.model == key)
    if key in families:
        return _per_dataset(rows, lambda r: r.family == key)
    raise DataError(f"{key!r} is neither a model nor a family in the results")


def delta_records(rows, omegas, a: str, b: str) -> list[DeltaRecord]:
    sa, sb = resolve_side(rows, a), resolve_side(rows, b)
    out = []
    for ds in sorted(set(sa) & set(sb)):
        if sa[ds] == 0:
            continue
        out.append(DeltaRecord(a, b, ds, omegas[ds]["omega"], relative_error_delta(sa[ds], sb[ds])))
    if not out:
        raise DataError(f"no dataset has results for both {a!r} and {b!r}")
    return out


def run_stats(rows: list[MetricRow], omegas: dict[str, dict], bins: int = 6,
              frac: float = 0.4, n_boot: int = 300, seed: int = 0,
              delta: tuple[str, str] | None = None) -> tuple[dict, statlab.TrendBand | None,
                                                             list[DeltaRecord]]:
    """Correlations, quantile bins and the LOWESS band for joined results.

    Without ``delta`` the trend is fitted to per-dataset mean sMAPE; with
    ``delta=(A, B)`` it is fitted to the relative error gain of A over B.
    """
    join_rows(rows, omegas)
    report: dict = {"n_rows": len(rows), "bins": bins, "frac": frac, "n_boot": n_boot,
                    "seed": seed}
    x_all = np.array([omegas[r.dataset]["omega"] for r in rows])
    y_all = np.array([r.smape for r in rows])
    corr = {"all_rows": _corr(x_all, y_all)}
    ds_mean = _per_dataset(rows, lambda r: True)
    dsx = np.array([omegas[d]["omega"] for d in ds_mean])
    dsy = np.array(list(ds_mean.values()))
    corr["dataset_means"] = _corr(dsx, dsy)
    mse_rows = [r for r in rows if r.mse is not None]
    if mse_rows:
        corr["mse_all_rows"] = _corr([omegas[r.dataset]["omega"] for r in mse_rows],
                                     [r.mse for r in mse_rows])
    by_family = {}
    binned = {}
    for fam in sorted({r.family for r in rows}):
        fam_rows = [r for r in rows if r.family == fam]
        by_family[fam] = _corr([omegas[r.dataset]["omega"] for r in fam_rows],
                               [r.smape for r in fam_rows])
        per_ds = _per_dataset(fam_rows, lambda r: True)
        bx = [omegas[d]["omega"] for d in per_ds]
        res = _safe(statlab.quantile_bins, bx, list(per_ds.values()), bins)
        binned[fam] = res if isinstance(res, dict) else res.to_dict()
    corr["by_family"] = by_family
    report["correlations"] = corr
    res = _safe(statlab.quantile_bins, dsx, dsy, bins)
    binned["all"] = res if isinstance(res, dict) else res.to_dict()
    report["bins_by_family"] = binned

    deltas: list[DeltaRecord] = []
    if delta is None:
        band = _safe(statlab.bootstrap_band, dsx, dsy, frac, n_boot, seed)
        report["trend_target"] = "dataset_mean_smape"
    else:
        deltas = delta_records(rows, omegas, *delta)
        dx = np.array([d.omega for d in deltas])
        dy = np.array([d.delta_pct for d in deltas])
        ts = _safe(statlab.theil_sen_slope, dx, dy)
        report["delta"] = {"model_a": delta[0], "model_b": delta[1], "n": len(deltas),
                           "theil_sen_slope": ts, "correlation": _corr(dx, dy)}
        band = _safe(statlab.bootstrap_band, dx, dy, frac, n_boot, seed)
        report["trend_target"] = f"delta_pct[{delta[0]}->{delta[1]}]"
    if isinstance(band, dict):
        report["trend_band"] = band
        band = None
    else:
        report["trend_band"] = band.to_dict()
    return report, band, deltas


def json_ready(obj):
    """Replace non-finite floats with ``None`` recursively."""
    if isinstance(obj, dict):
        return {k: json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj

