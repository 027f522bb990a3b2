"""Correlation, robust slope, binning and LOWESS trend statistics.

All percentiles and quantiles use linear interpolation between closest
ranks (numpy's default ``"linear"`` method).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import AllXEqual, DegenerateVariance, TooFewPoints

Z_95 = 1.959963984540054


def _xy(x, y, min_n: int = 2) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ValueError(f"x and y differ in length ({x.size} vs {y.size})")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValueError("x and y must be finite")
    if x.size < min_n:
        raise TooFewPoints(f"need at least {min_n} points, got {x.size}")
    return x, y


@dataclass(frozen=True)
class CorrelationSummary:
    n: int
    pearson_r: float
    ci_low: float
    ci_high: float
    spearman_rho: float | None = None
    spearman_p: float | None = None
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {"n": self.n, "pearson_r": self.pearson_r, "ci_low": self.ci_low,
                "ci_high": self.ci_high, "spearman_rho": self.spearman_rho,
                "spearman_p": self.spearman_p, "degenerate": self.degenerate}


def pearson(x, y) -> float:
    x, y = _xy(x, y)
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise DegenerateVariance("x or y has zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def fisher_ci(r: float, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """``tanh(atanh(r) -/+ z / sqrt(n - 3))``."""
    if n < 4:
        raise TooFewPoints(f"Fisher interval needs n > 3, got {n}")
    if abs(r) >= 1.0:
        return r, r
    z_crit = Z_95 if confidence == 0.95 else float(stats.norm.ppf(0.5 + confidence / 2))
    z = math.atanh(r)
    half = z_crit / math.sqrt(n - 3)
    return math.tanh(z - half), math.tanh(z + half)


def pearson_with_fisher_ci(x, y, confidence: float = 0.95) -> CorrelationSummary:
    """Pearson r with its Fisher-z confidence interval.

    A perfect correlation (``|r| == 1``) has an unbounded z; it is returned
    with ``ci_low == ci_high == r`` and ``degenerate=True``.
    """
    x, y = _xy(x, y, min_n=4)
    r = pearson(x, y)
    lo, hi = fisher_ci(r, x.size, confidence)
    return CorrelationSummary(x.size, r, lo, hi, degenerate=abs(r) >= 1.0)


def midranks(a) -> np.ndarray:
    return stats.rankdata(a, method="average")


def spearman(x, y) -> float:
    """Pearson correlation of mid-ranks."""
    x, y = _xy(x, y)
    try:
        return pearson(midranks(x), midranks(y))
    except DegenerateVariance:
        raise DegenerateVariance("all x or all y values are tied") from None


def spearman_pvalue(rho: float, n: int) -> float:
    """Two-sided p-value from ``t = rho sqrt((n-2)/(1-rho^2))`` on ``n-2`` dof."""
    if n < 3:
        return math.nan
    if abs(rho) >= 1.0:
        return 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return float(2.0 * stats.t.sf(abs(t), n - 2))


def correlation_summary(x, y, confidence: float = 0.95) -> CorrelationSummary:
    base = pearson_with_fisher_ci(x, y, confidence)
    rho = spearman(x, y)
    return CorrelationSummary(base.n, base.pearson_r, base.ci_low, base.ci_high,
                              rho, spearman_pvalue(rho, base.n), base.degenerate)


def pairwise_slopes(x, y) -> np.ndarray:
    """``(y_j - y_i) / (x_j - x_i)`` for all ``i < j`` with ``x_i != x_j``."""
    x, y = _xy(x, y)
    i, j = np.triu_indices(x.size, k=1)
    dx = x[j] - x[i]
    keep = dx != 0
    return (y[j] - y[i])[keep] / dx[keep]


def theil_sen_slope(x, y) -> float:
    """Median of all pairwise slopes; pairs with equal ``x`` are skipped."""
    s = np.sort(pairwise_slopes(x, y))
    if s.size == 0:
        raise AllXEqual("all x values are equal")
    mid = s.size // 2
    return float(s[mid]) if s.size % 2 else 0.5 * (float(s[mid - 1]) + float(s[mid]))


@dataclass
class BinSummary:
    bin_edges: np.ndarray
    mean_x: np.ndarray
    mean_y: np.ndarray
    se_y: np.ndarray
    count: np.ndarray
    singleton: np.ndarray
    unequal_counts: bool

    def to_dict(self) -> dict:
        def clean(a):
            return [None if not np.isfinite(v) else float(v) for v in a]
        return {"bin_edges": clean(self.bin_edges), "mean_x": clean(self.mean_x),
                "mean_y": clean(self.mean_y), "se_y": clean(self.se_y),
                "count": [int(c) for c in self.count],
                "singleton": [bool(b) for b in self.singleton],
                "unequal_counts": self.unequal_counts}


def assign_bins(x, edges: np.ndarray) -> np.ndarray:
    """Index of the highest bin whose lower edge ``x`` meets."""
    lower = np.asarray(edges)[:-1]
    return np.searchsorted(lower, np.asarray(x, dtype=float), side="right") - 1


def quantile_bins(x, y, k: int = 6) -> BinSummary:
    """Group points into ``k`` bins with edges at the ``i/k`` quantiles of ``x``.

    Tied ``x`` values always share a bin, so counts may become unequal
    (``unequal_counts``) and some bins may be empty.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    x, y = _xy(x, y, min_n=1)
    if x.size < k:
        raise TooFewPoints(f"{x.size} points cannot fill {k} bins")
    edges = np.quantile(x, np.linspace(0.0, 1.0, k + 1))
    idx = assign_bins(x, edges)
    mean_x = np.full(k, np.nan)
    mean_y = np.full(k, np.nan)
    se = np.full(k, np.nan)
    count = np.zeros(k, dtype=int)
    for b in range(k):
        sel = idx == b
        count[b] = int(sel.sum())
        if count[b]:
            mean_x[b] = x[sel].mean()
            mean_y[b] = y[sel].mean()
            se[b] = y[sel].std(ddof=1) / math.sqrt(count[b]) if count[b] > 1 else 0.0
    unequal = int(count.max() - count.min()) > 1
    return BinSummary(edges, mean_x, mean_y, se, count, count == 1, unequal)


def _local_linear(x: np.ndarray, y: np.ndarray, x0: float, r: int) -> float:
    d = np.abs(x - x0)
    order = np.argsort(d, kind="stable")[:r]
    xs, ys, ds = x[order], y[order], d[order]
    dmax = ds.max()
    if dmax > 0:
        u = ds / dmax
        w = (1.0 - u ** 3) ** 3
    else:
        w = np.ones_like(ds)
    sw = w.sum()
    if sw <= 0:
        return math.nan
    xm = (w @ xs) / sw
    ym = (w @ ys) / sw
    sxx = w @ ((xs - xm) ** 2)
    if sxx <= 1e-14 * max(1.0, xm * xm) * sw:
        # every weighted point sits at one x: the level is known only at x0 itself
        return float(ym) if np.all(xs[w > 0] == x0) else math.nan
    slope = (w @ ((xs - xm) * (ys - ym))) / sxx
    return float(ym + slope * (x0 - xm))


def lowess_grid(x, n_grid: int = 100) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.linspace(x.min(), x.max(), n_grid)


def lowess_fit(x, y, frac: float = 0.4, grid=None) -> np.ndarray:
    """Local linear fit with tricube weights evaluated on ``grid``.

    Each grid point uses its ``ceil(frac * n)`` nearest samples (ties by
    index), never fewer than 3. No robustness iterations. ``grid`` defaults
    to 100 evenly spaced points over the range of ``x``. A grid point whose
    weighted neighbours do not pin down a line gets NaN.
    """
    x, y = _xy(x, y, min_n=5)
    if not 0 < frac <= 1:
        raise ValueError("frac must lie in (0, 1]")
    grid = lowess_grid(x) if grid is None else np.asarray(grid, dtype=float)
    r = max(3, int(math.ceil(frac * x.size)))
    r = min(r, x.size)
    return np.array([_local_linear(x, y, g, r) for g in grid])


@dataclass
class TrendBand:
    grid: np.ndarray
    fit: np.ndarray
    band_low: np.ndarray
    band_high: np.ndarray
    frac: float
    n_boot: int
    seed: int
    n_valid: np.ndarray = field(default=None)

    def rows(self):
        for g, f, lo, hi in zip(self.grid, self.fit, self.band_low, self.band_high):
            yield float(g), float(f), float(lo), float(hi)

    def to_dict(self) -> dict:
        def clean(a):
            return [None if not np.isfinite(v) else float(v) for v in a]
        return {"grid": clean(self.grid), "fit": clean(self.fit),
                "band_low": clean(self.band_low), "band_high": clean(self.band_high),
                "frac": self.frac, "n_boot": self.n_boot, "seed": self.seed,
                "n_valid": [int(v) for v in self.n_valid]}


def bootstrap_fits(x, y, frac: float = 0.4, n_boot: int = 300, seed: int = 0,
                   grid=None) -> np.ndarray:
    """``(n_boot, len(grid))`` LOWESS curves on resamples drawn with replacement.

    Replicate ``b`` draws from its own generator seeded with ``[seed, b]``.
    """
    x, y = _xy(x, y, min_n=5)
    grid = lowess_grid(x) if grid is None else np.asarray(grid, dtype=float)
    n = x.size
    out = np.empty((n_boot, grid.size))
    for b in range(n_boot):
        idx = np.random.default_rng([seed, b]).integers(0, n, size=n)
        out[b] = lowess_fit(x[idx], y[idx], frac, grid)
    return out


def bootstrap_band(x, y, frac: float = 0.4, n_boot: int = 300, seed: int = 0,
                   level: float = 0.95, grid=None) -> TrendBand:
    """LOWESS fit plus a pointwise percentile band over bootstrap refits.

    Replicates that are undefined at a grid point are ignored there; the
    number of usable replicates per point is kept in ``n_valid``.
    """
    x, y = _xy(x, y, min_n=5)
    grid = lowess_grid(x) if grid is None else np.asarray(grid, dtype=float)
    fit = lowess_fit(x, y, frac, grid)
    fits = bootstrap_fits(x, y, frac, n_boot, seed, grid)
    tail = 50.0 * (1.0 - level)
    valid = np.isfinite(fits).sum(axis=0)
    low = np.full(grid.size, np.nan)
    high = np.full(grid.size, np.nan)
    has = valid > 0
    if has.any():
        low[has] = np.nanpercentile(fits[:, has], tail, axis=0)
        high[has] = np.nanpercentile(fits[:, has], 100.0 - tail, axis=0)
    return TrendBand(grid, fit, low, high, frac, n_boot, seed, valid)
