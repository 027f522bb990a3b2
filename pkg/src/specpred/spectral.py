"""Spectral predictability of a series.

Pipeline for one series ``x`` of length ``T``:

1. subtract the sample mean,
2. multiply by a symmetric Hann window ``w_t = 0.5 (1 - cos(2 pi t / (T-1)))``,
3. take the real FFT and keep ``P_k = |X_k|^2`` for ``k = 1 .. floor(T/2)``
   (DC dropped, Nyquist kept for even ``T``),
4. normalise ``P`` to a probability vector ``p``,
5. ``H = -sum p log p`` (nats), ``H_max = log K`` and ``omega = 1 - H / H_max``.

``omega`` is 1 for a spectrum concentrated in one bin and 0 for a flat one.
A single full-length transform is used; there is no segment averaging.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import AllSeriesDegenerate, DataError, DegenerateSpectrum, SeriesTooShort
from .series_io import Dataset, TimeSeries

logger = logging.getLogger(__name__)

MIN_LENGTH = 4


@dataclass(frozen=True)
class SpectralConfig:
    taper: str = "hann"
    power_floor: float = 1e-12

    def __post_init__(self):
        if self.taper not in ("hann", "none"):
            raise ValueError("taper must be 'hann' or 'none'")
        if not self.power_floor > 0:
            raise ValueError("power_floor must be positive")


@dataclass(frozen=True, eq=False)
class SpectralReport:
    series: str
    T: int
    K: int
    psd: np.ndarray
    peak_bins: tuple[int, ...]
    p: np.ndarray | None = None
    H: float | None = None
    H_max: float | None = None
    omega: float | None = None

    def to_dict(self) -> dict:
        return {
            "series": self.series,
            "T_used": self.T,
            "K": self.K,
            "H_nats": self.H,
            "H_max_nats": self.H_max,
            "omega": self.omega,
            "peak_bins": list(self.peak_bins),
            "degenerate": False,
        }

    @property
    def dominant_period(self) -> float:
        """Samples per cycle of the strongest bin (``T / k_peak``)."""
        return self.T / self.peak_bins[0]


def hann_window(T: int) -> np.ndarray:
    """Symmetric Hann window of length ``T``."""
    if T == 1:
        return np.ones(1)
    t = np.arange(T)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * t / (T - 1)))


def _as_array(s) -> tuple[str, np.ndarray]:
    if isinstance(s, TimeSeries):
        return s.name, np.asarray(s.values, dtype=float)
    return "series", np.asarray(s, dtype=float).ravel()


def compute_psd(s, c: SpectralConfig = SpectralConfig()) -> SpectralReport:
    """One-sided power spectrum with the DC bin excluded.

    ``s`` may be a :class:`TimeSeries` or any 1-d array-like.

    Raises
    ------
    SeriesTooShort
        ``T < 4``.
    DegenerateSpectrum
        The input is constant, or the retained power is at most
        ``power_floor * T * sum((x - mean)**2)``.
    """
    name, x = _as_array(s)
    T = x.size
    if T < MIN_LENGTH:
        raise SeriesTooShort(f"series {name!r}: need at least {MIN_LENGTH} samples, got {T}")
    if not np.isfinite(x).all():
        raise DataError(f"series {name!r} contains non-finite values")
    y = x - x.mean()
    # measured on the de-meaned signal so the test is affine invariant
    reference = T * float(np.dot(y, y))
    if c.taper == "hann":
        y = y * hann_window(T)
    K = T // 2
    psd = np.abs(np.fft.rfft(y)[1:K + 1]) ** 2
    total = psd.sum()
    if np.ptp(x) == 0 or not total > c.power_floor * reference:
        raise DegenerateSpectrum(f"series {name!r} has no residual power after mean removal")
    order = np.argsort(-psd, kind="stable")[:3]
    peaks = tuple(int(k) + 1 for k in order)
    return SpectralReport(series=name, T=T, K=K, psd=psd, peak_bins=peaks)


def entropy_nats(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum())


def spectral_entropy(r: SpectralReport) -> SpectralReport:
    """Fill ``p``, ``H``, ``H_max`` and ``omega`` from ``r.psd``."""
    p = r.psd / r.psd.sum()
    H = entropy_nats(p)
    H_max = float(np.log(r.K)) if r.K > 1 else 0.0
    # K == 1 leaves a single bin: entropy is zero and the spectrum is maximally concentrated
    omega = 1.0 - H / H_max if H_max > 0 else 1.0
    omega = min(1.0, max(0.0, omega))
    return replace(r, p=p, H=H, H_max=H_max, omega=omega)


def omega(s, c: SpectralConfig = SpectralConfig()) -> SpectralReport:
    """Full spectral report for one series."""
    return spectral_entropy(compute_psd(s, c))


def omega_value(x, c: SpectralConfig = SpectralConfig()) -> float:
    return omega(x, c).omega


@dataclass
class DatasetSpectral:
    dataset: str
    reports: list[SpectralReport]
    omega: float
    skipped: dict[str, str] = field(default_factory=dict)

    @property
    def n_skipped(self) -> int:
        return len(self.skipped)

    def to_dict(self) -> dict:
        rows = [r.to_dict() for r in self.reports]
        rows += [{"series": k, "degenerate": True, "error": v} for k, v in self.skipped.items()]
        return {"dataset": self.dataset, "omega": self.omega,
                "n_series": len(self.reports), "n_skipped": self.n_skipped, "series": rows}


def omega_dataset(d: Dataset, c: SpectralConfig = SpectralConfig()) -> DatasetSpectral:
    """Per-covariate reports and their arithmetic-mean omega.

    Series that are too short or degenerate are skipped and listed in
    ``skipped``.
    """
    reports, skipped = [], {}
    for s in d.series:
        try:
            reports.append(omega(s, c))
        except (DegenerateSpectrum, SeriesTooShort) as exc:
            logger.warning("skipping %s: %s", s.name, exc)
            skipped[s.name] = f"{type(exc).__name__}: {exc}"
    if not reports:
        raise AllSeriesDegenerate(
            f"no usable series in dataset {d.name!r}: " + "; ".join(skipped.values()))
    mean = float(np.mean([r.omega for r in reports]))
    return DatasetSpectral(d.name, reports, mean, skipped)
