"""Omega regimes, reliability checks and model-family suggestions."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegenerateSpectrum, SeriesTooShort
from .series_io import Dataset
from .spectral import SpectralConfig, omega, omega_dataset

REGIMES = ("low", "mid", "high")
WARNINGS = ("short_series", "nonstationary", "exogenous_flagged", "degenerate_series_present")


@dataclass(frozen=True)
class SelectorPolicy:
    high_threshold: float = 0.5
    low_threshold: float = 0.4
    min_length: int = 1000
    stationarity_drift: float = 0.10
    exogenous_dominated: bool = False

    def __post_init__(self):
        if not 0 < self.low_threshold <= self.high_threshold < 1:
            raise ValueError("need 0 < low_threshold <= high_threshold < 1")
        if self.min_length < 1:
            raise ValueError("min_length must be positive")
        if not self.stationarity_drift > 0:
            raise ValueError("stationarity_drift must be positive")


_FAMILY_NOTES = {
    "zero_shot": "Zero-shot foundation models (e.g. Moirai, Chronos, TimesFM-2.5) gain the "
                 "most where spectral energy is concentrated.",
    "pretrained": "Pretrained foundation models are the next candidates when zero-shot "
                  "weights are unavailable.",
    "statistical": "Statistical baselines (e.g. ARIMA, ETS, Seasonal Naive) are cheap and "
                   "competitive when the spectrum is diffuse.",
    "deep_learning": "Lightweight deep models (e.g. DLinear, PatchTST) match larger models "
                     "at a fraction of the training and inference cost.",
}

_FAMILIES = {
    "high": ("zero_shot", "pretrained"),
    "low": ("statistical", "deep_learning"),
    "mid": ("statistical", "deep_learning", "zero_shot"),
}

_MID_NOTE = ("No family dominates in this range; weigh compute budget, inference latency, "
             "missingness and regime shifts before choosing.")

_WARNING_NOTES = {
    "short_series": "series too short for a stable spectral estimate",
    "nonstationary": "omega drifts between the two halves of a series",
    "exogenous_flagged": "dynamics flagged as dominated by external shocks",
    "degenerate_series_present": "some series had no usable spectrum and were skipped",
}


@dataclass(frozen=True)
class Recommendation:
    dataset: str
    regime: str
    omega: float
    warnings: tuple[str, ...]
    families: tuple[tuple[str, str], ...]
    lle: float | None = None
    details: dict = field(default_factory=dict, compare=False)

    @property
    def confident(self) -> bool:
        return not self.warnings

    def verdict(self) -> str:
        names = ", ".join(f for f, _ in self.families)
        line = f"{self.dataset}: omega={self.omega:.3f} ({self.regime} regime) -> try {names}"
        if self.warnings:
            line += "; low confidence: " + ", ".join(self.warnings)
        return line

    def to_dict(self) -> dict:
        return {"dataset": self.dataset, "omega": self.omega, "lle": self.lle,
                "regime": self.regime, "warnings": list(self.warnings),
                "families": [{"family": f, "rationale": r} for f, r in self.families],
                "confident": self.confident}


def classify_regime(omega_value: float, p: SelectorPolicy = SelectorPolicy()) -> str:
    """``high`` above ``high_threshold``, ``low`` below ``low_threshold``, else ``mid``.

    Both thresholds themselves belong to ``mid``.
    """
    if not 0.0 <= omega_value <= 1.0:
        raise ValueError(f"omega {omega_value} outside [0, 1]")
    if omega_value > p.high_threshold:
        return "high"
    if omega_value < p.low_threshold:
        return "low"
    return "mid"


def split_half_drift(values, spectral_cfg: SpectralConfig = SpectralConfig()) -> float | None:
    """``|omega(first half) - omega(second half)|`` with halves of ``floor(T/2)``.

    Returns ``inf`` when exactly one half is degenerate and ``None`` when the
    drift cannot be measured (both halves degenerate or too short).
    """
    h = len(values) // 2
    halves = (values[:h], values[h:2 * h])
    oms = []
    for part in halves:
        try:
            oms.append(omega(part, spectral_cfg).omega)
        except (DegenerateSpectrum, SeriesTooShort):
            oms.append(None)
    if oms[0] is None and oms[1] is None:
        return None
    if oms[0] is None or oms[1] is None:
        return float("inf")
    return abs(oms[0] - oms[1])


def reliability_check(d: Dataset, p: SelectorPolicy = SelectorPolicy(),
                      spectral_cfg: SpectralConfig = SpectralConfig(),
                      skipped: int | None = None) -> list[str]:
    """Warnings that make an omega-based choice less trustworthy.

    ``skipped`` is the number of series :func:`omega_dataset` dropped; it is
    recomputed when not given.
    """
    warnings = []
    if any(len(s) <= p.min_length for s in d.series):
        warnings.append("short_series")
    for s in d.series:
        drift = split_half_drift(s.values, spectral_cfg)
        if drift is not None and drift > p.stationarity_drift:
            warnings.append("nonstationary")
            break
    if p.exogenous_dominated:
        warnings.append("exogenous_flagged")
    if skipped is None:
        try:
            skipped = omega_dataset(d, spectral_cfg).n_skipped
        except Exception:  # noqa: BLE001 - every series degenerate counts as skipped
            skipped = len(d)
    if skipped:
        warnings.append("degenerate_series_present")
    return warnings


def recommend(d: Dataset, p: SelectorPolicy = SelectorPolicy(),
              spectral_cfg: SpectralConfig = SpectralConfig(),
              lle: float | None = None) -> Recommendation:
    """Regime, warnings and ordered family list for a dataset.

    Raises
    ------
    AllSeriesDegenerate
        No series has a usable spectrum.
    """
    spec = omega_dataset(d, spectral_cfg)
    regime = classify_regime(spec.omega, p)
    warnings = tuple(reliability_check(d, p, spectral_cfg, skipped=spec.n_skipped))
    caveat = ""
    if warnings:
        caveat = " Not confident: " + "; ".join(_WARNING_NOTES[w] for w in warnings) + \
                 ". Validate candidates directly and lean on domain knowledge."
    families = []
    for fam in _FAMILIES[regime]:
        note = _FAMILY_NOTES[fam]
        if regime == "mid":
            note = f"{note} {_MID_NOTE}"
        families.append((fam, note + caveat))
    return Recommendation(d.name, regime, spec.omega, warnings, tuple(families), lle,
                          details={"per_series": {r.series: r.omega for r in spec.reports},
                                   "skipped": dict(spec.skipped)})
