"""Largest Lyapunov exponent from a scalar series.

Rosenstein-style estimate: delay-embed the series, pair every state with
its nearest neighbour outside a Theiler window, follow both trajectories
for ``k_max`` steps and average ``ln(d_k / d_0)`` over pairs. The slope of
that curve over ``[fit_lo, fit_hi]`` is the exponent per step; dividing by
``dt`` gives nats per time unit.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import AllSeriesFailed, DataError, NoValidPairs, SeriesTooShort
from .series_io import Dataset, TimeSeries

logger = logging.getLogger(__name__)

MIN_PAIRS = 10
LOW_CONFIDENCE_R2 = 0.5


@dataclass(frozen=True)
class LleConfig:
    m: int = 4
    tau: int = 10
    k_max: int = 50
    fit_lo: int = 1
    fit_hi: int = 20
    theiler: int | None = None  # None -> m * tau

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("embedding dimension m must be >= 2")
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        if not 1 <= self.fit_lo < self.fit_hi <= self.k_max:
            raise ValueError("need 1 <= fit_lo < fit_hi <= k_max")
        if self.theiler is not None and self.theiler < 0:
            raise ValueError("theiler window must be non-negative")

    @property
    def theiler_window(self) -> int:
        return self.m * self.tau if self.theiler is None else self.theiler


@dataclass(frozen=True, eq=False)
class LleReport:
    series: str
    lambda_max: float
    divergence_curve: np.ndarray
    n_pairs: int
    fit_r2: float
    config: LleConfig
    dt: float = 1.0
    warnings: tuple[str, ...] = ()

    @property
    def low_confidence(self) -> bool:
        return bool(self.warnings)

    def to_dict(self) -> dict:
        c = self.config
        return {"series": self.series, "lambda_max": self.lambda_max,
                "n_pairs": self.n_pairs, "fit_r2": self.fit_r2,
                "m": c.m, "tau": c.tau, "k_max": c.k_max,
                "fit_lo": c.fit_lo, "fit_hi": c.fit_hi,
                "theiler": c.theiler_window, "dt": self.dt,
                "warnings": list(self.warnings)}


def delay_embed(s, m: int, tau: int) -> np.ndarray:
    """Return the ``(N, m)`` delay vectors, ``N = T - (m-1) tau``.

    Row ``i`` is ``(x_i, x_{i+tau}, ..., x_{i+(m-1)tau})``.
    """
    x = np.asarray(s.values if isinstance(s, TimeSeries) else s, dtype=float).ravel()
    if m < 1 or tau < 1:
        raise ValueError("m and tau must be positive")
    span = (m - 1) * tau
    if x.size < span + 2:
        raise SeriesTooShort(f"need at least {span + 2} samples for m={m}, tau={tau}; got {x.size}")
    N = x.size - span
    return np.stack([x[j * tau:j * tau + N] for j in range(m)], axis=1)


def nearest_neighbors(Y: np.ndarray, theiler: int,
                      chunk: int = 512) -> tuple[np.ndarray, np.ndarray]:
    """Exhaustive nearest neighbour of each row with ``|i - j| > theiler``.

    Ties go to the lowest index. Rows with no admissible candidate get index
    ``-1`` and squared distance ``inf``.
    """
    N = Y.shape[0]
    nn = np.full(N, -1, dtype=np.int64)
    d2 = np.full(N, np.inf)
    cols = np.arange(N)
    for start in range(0, N, chunk):
        rows = np.arange(start, min(N, start + chunk))
        D = _sqdist_rows(Y, rows)
        D[np.abs(rows[:, None] - cols[None, :]) <= theiler] = np.inf
        j = np.argmin(D, axis=1)
        best = D[np.arange(rows.size), j]
        ok = np.isfinite(best)
        nn[rows[ok]] = j[ok]
        d2[rows[ok]] = best[ok]
    return nn, d2


def _sqdist_rows(Y, rows):
    # accumulate coordinate by coordinate so a scalar loop reproduces it bit for bit
    out = np.zeros((rows.size, Y.shape[0]))
    for j in range(Y.shape[1]):
        diff = Y[rows, j][:, None] - Y[None, :, j]
        out += diff * diff
    return out


def divergence_curve(Y: np.ndarray, nn: np.ndarray, k_max: int) -> tuple[np.ndarray, int]:
    """Mean ``ln(d_k / d_0)`` for ``k = 1..k_max`` and the number of pairs used.

    A pair contributes at step ``k`` only if both trajectories have ``k``
    more states and both ``d_0`` and ``d_k`` are non-zero.
    """
    N = Y.shape[0]
    i = np.flatnonzero(nn >= 0)
    j = nn[i]
    d0 = np.sqrt(((Y[i] - Y[j]) ** 2).sum(axis=1))
    keep = d0 > 0
    i, j, d0 = i[keep], j[keep], d0[keep]
    curve = np.full(k_max, np.nan)
    used = np.zeros(i.size, dtype=bool)
    for k in range(1, k_max + 1):
        ok = (i + k < N) & (j + k < N)
        if not ok.any():
            continue
        dk = np.sqrt(((Y[i[ok] + k] - Y[j[ok] + k]) ** 2).sum(axis=1))
        pos = dk > 0
        if pos.any():
            curve[k - 1] = np.mean(np.log(dk[pos] / d0[ok][pos]))
            used[np.flatnonzero(ok)[pos]] = True
    return curve, int(used.sum())


def _fit_line(k: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    A = np.column_stack([k, np.ones_like(k)])
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * k + icpt)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid ** 2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r2


def lle_rosenstein(s, c: LleConfig = LleConfig(), dt: float | None = None) -> LleReport:
    """Estimate the largest Lyapunov exponent of one series.

    Raises
    ------
    SeriesTooShort
        Fewer than ``MIN_PAIRS`` states can be followed for ``k_max`` steps.
    NoValidPairs
        The Theiler window excludes every candidate neighbour.
    """
    if isinstance(s, TimeSeries):
        name, x, dt = s.name, s.values, s.dt if dt is None else dt
    else:
        name, x = "series", np.asarray(s, dtype=float).ravel()
        dt = 1.0 if dt is None else dt
    if not np.isfinite(x).all():
        raise DataError(f"series {name!r} contains non-finite values")
    Y = delay_embed(x, c.m, c.tau)
    N = Y.shape[0]
    if N - c.k_max < MIN_PAIRS:
        raise SeriesTooShort(
            f"series {name!r}: {N} embedded states leave fewer than {MIN_PAIRS} "
            f"with a {c.k_max}-step horizon")
    nn, _ = nearest_neighbors(Y, c.theiler_window)
    if (nn < 0).all():
        raise NoValidPairs(f"series {name!r}: Theiler window {c.theiler_window} excludes all neighbours")
    curve, n_pairs = divergence_curve(Y, nn, c.k_max)
    ks = np.arange(c.fit_lo, c.fit_hi + 1, dtype=float)
    seg = curve[c.fit_lo - 1:c.fit_hi]
    good = np.isfinite(seg)
    if n_pairs < MIN_PAIRS or good.sum() < 2:
        raise NoValidPairs(f"series {name!r}: only {n_pairs} usable neighbour pairs")
    slope, r2 = _fit_line(ks[good], seg[good])
    warnings = []
    if r2 < LOW_CONFIDENCE_R2:
        warnings.append(f"low_confidence: divergence curve is not linear over "
                        f"[{c.fit_lo}, {c.fit_hi}] (r2={r2:.3f})")
    return LleReport(series=name, lambda_max=slope / dt, divergence_curve=curve,
                     n_pairs=n_pairs, fit_r2=r2, config=c, dt=dt, warnings=tuple(warnings))


@dataclass
class DatasetLle:
    dataset: str
    reports: list[LleReport]
    lambda_max: float
    skipped: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        rows = [r.to_dict() for r in self.reports]
        rows += [{"series": k, "error": v} for k, v in self.skipped.items()]
        return {"dataset": self.dataset, "lambda_max": self.lambda_max,
                "n_series": len(self.reports), "n_skipped": len(self.skipped), "series": rows}


def lle_dataset(d: Dataset, c: LleConfig = LleConfig()) -> DatasetLle:
    """Per-covariate exponents and their arithmetic mean."""
    reports, skipped = [], {}
    for s in d.series:
        try:
            reports.append(lle_rosenstein(s, c))
        except (SeriesTooShort, NoValidPairs, DataError) as exc:
            logger.warning("skipping %s: %s", s.name, exc)
            skipped[s.name] = f"{type(exc).__name__}: {exc}"
    if not reports:
        raise AllSeriesFailed(f"LLE failed for every series in {d.name!r}: "
                              + "; ".join(skipped.values()))
    return DatasetLle(d.name, reports, float(np.mean([r.lambda_max for r in reports])), skipped)
