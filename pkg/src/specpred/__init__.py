"""Spectral predictability (omega), chaos descriptors and model-family selection
for time series."""

__version__ = "0.1.0"

from .chaos import LleConfig, LleReport, delay_embed, lle_dataset, lle_rosenstein
from .forecast_metrics import MetricRow, DeltaRecord, mse, relative_error_delta, smape
from .selector import Recommendation, SelectorPolicy, classify_regime, recommend, reliability_check
from .series_io import Dataset, PreprocessPolicy, TimeSeries, load_dataset, preprocess, split_covariates
from .spectral import SpectralConfig, SpectralReport, compute_psd, omega, omega_dataset, spectral_entropy
from .synthgen import SynthResult, SynthSpec, generate_sweep, generate_with_target_omega, synth_from_spectrum

__all__ = [
    "Dataset", "DeltaRecord", "LleConfig", "LleReport", "MetricRow", "PreprocessPolicy",
    "Recommendation", "SelectorPolicy", "SpectralConfig", "SpectralReport", "SynthResult",
    "SynthSpec", "TimeSeries", "classify_regime", "compute_psd", "delay_embed",
    "generate_sweep", "generate_with_target_omega", "lle_dataset", "lle_rosenstein",
    "load_dataset", "mse", "omega", "omega_dataset", "preprocess", "recommend",
    "relative_error_delta", "reliability_check", "smape", "spectral_entropy",
    "split_covariates", "synth_from_spectrum",
]
