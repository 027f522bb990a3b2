"""Synthetic signals with a prescribed measured omega.

A signal is built from a one-sided amplitude spectrum ``sqrt(shape_k)`` and
uniform random phases, then standardised. The shape family is

    shape(alpha) = alpha * peaks + (1 - alpha) * uniform

where ``peaks`` puts equal mass on ``n_harmonics`` bins at multiples of
``K // 8``. For fixed phases the measured omega rises with ``alpha``, so
``alpha`` is found by bisection against :func:`specpred.spectral.omega`.

With the Hann taper a bin-centred tone leaks into three bins, which caps the
reachable omega: about 0.886 for one harmonic at length 4096, 0.795 for two
and 0.742 for three.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import CalibrationFailed
from .series_io import TimeSeries
from .spectral import SpectralConfig, omega

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SynthSpec:
    target_omega: float
    length: int = 4096
    seed: int = 0
    tolerance: float = 0.02
    n_harmonics: int = 1
    max_iters: int = 60

    def __post_init__(self):
        if not 0 < self.target_omega < 1:
            raise ValueError("target_omega must lie in (0, 1)")
        if self.length < 256:
            raise ValueError("length must be >= 256")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not 1 <= self.n_harmonics <= 8:
            raise ValueError("n_harmonics must be in 1..8")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True, eq=False)
class SynthResult:
    series: TimeSeries
    target_omega: float
    achieved_omega: float
    mixing_weight: float
    iterations_used: int
    seed: int

    def to_dict(self) -> dict:
        return {"name": self.series.name, "target_omega": self.target_omega,
                "achieved_omega": self.achieved_omega, "mixing_weight": self.mixing_weight,
                "iterations_used": self.iterations_used, "seed": self.seed, "status": "ok"}


@dataclass(frozen=True)
class SweepFailure:
    name: str
    target_omega: float
    seed: int
    error: CalibrationFailed

    def to_dict(self) -> dict:
        return {"name": self.name, "target_omega": self.target_omega, "seed": self.seed,
                "status": "CalibrationFailed", "error": str(self.error),
                "best_alpha": self.error.best_alpha, "best_omega": self.error.best_omega}


def derive_seed(seed: int, index: int) -> int:
    """Independent per-item seed from ``(seed, index)``."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0] >> 1)


def random_phases(K: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi, size=K)


def _synthesize(shape: np.ndarray, phases: np.ndarray, length: int) -> np.ndarray:
    spec = np.zeros(length // 2 + 1, dtype=complex)
    spec[1:] = np.sqrt(shape) * np.exp(1j * phases)
    x = np.fft.irfft(spec, n=length)
    x = x - x.mean()
    sd = x.std()
    if sd == 0:
        raise ValueError("shape produces a zero signal")
    x = x / sd
    return x - x.mean()


def _check_shape(shape, length: int) -> np.ndarray:
    shape = np.asarray(shape, dtype=float).ravel()
    K = length // 2
    if shape.size != K:
        raise ValueError(f"shape must have {K} entries for length {length}, got {shape.size}")
    if (shape < 0).any() or not np.isfinite(shape).all() or abs(shape.sum() - 1.0) > 1e-9:
        raise ValueError("shape must be a non-negative probability vector")
    return shape


def synth_from_spectrum(shape, length: int, seed: int, name: str = "synth") -> TimeSeries:
    """Inverse real FFT of ``sqrt(shape)`` with seeded uniform phases.

    ``shape[k-1]`` is the power share of bin ``k`` (``k = 1 .. length // 2``).
    The result has zero mean and unit variance.
    """
    shape = _check_shape(shape, length)
    return TimeSeries(name, _synthesize(shape, random_phases(shape.size, seed), length))


def peak_bins(K: int, n_harmonics: int) -> np.ndarray:
    base = max(1, K // 8)
    bins = base * np.arange(1, n_harmonics + 1)
    if bins[-1] > K:
        raise ValueError(f"{n_harmonics} harmonics do not fit in {K} bins")
    return bins


def mixture_shape(alpha: float, K: int, n_harmonics: int = 1) -> np.ndarray:
    shape = np.full(K, (1.0 - alpha) / K)
    shape[peak_bins(K, n_harmonics) - 1] += alpha / n_harmonics
    return shape


def generate_with_target_omega(spec: SynthSpec, name: str | None = None,
                               spectral_cfg: SpectralConfig = SpectralConfig()) -> SynthResult:
    """Bisect the mixing weight until the measured omega is within tolerance.

    Raises
    ------
    CalibrationFailed
        ``max_iters`` evaluations without reaching the tolerance; carries the
        closest ``alpha`` and omega seen.
    """
    name = name or f"omega_{spec.target_omega:.2f}"
    K = spec.length // 2
    phases = random_phases(K, spec.seed)
    lo, hi = 0.0, 1.0
    best = (np.inf, None, None)
    for it in range(1, spec.max_iters + 1):
        alpha = 0.5 * (lo + hi)
        x = _synthesize(mixture_shape(alpha, K, spec.n_harmonics), phases, spec.length)
        measured = omega(x, spectral_cfg).omega
        err = abs(measured - spec.target_omega)
        if err < best[0]:
            best = (err, alpha, measured)
        if err <= spec.tolerance:
            return SynthResult(TimeSeries(name, x), spec.target_omega, measured,
                               alpha, it, spec.seed)
        if measured < spec.target_omega:
            lo = alpha
        else:
            hi = alpha
    raise CalibrationFailed(
        f"target omega {spec.target_omega} not reached within {spec.tolerance} after "
        f"{spec.max_iters} iterations (best {best[2]:.4f} at alpha={best[1]:.6f})",
        best_alpha=best[1], best_omega=best[2])


def sweep_name(target: float, replicate: int) -> str:
    return f"omega_{target:.2f}_{replicate:02d}"


def generate_sweep(targets, per_level: int, length: int = 4096, seed: int = 0,
                   tolerance: float = 0.02, n_harmonics: int = 1,
                   max_iters: int = 60) -> list[SynthResult | SweepFailure]:
    """``per_level`` calibrated series per target, in target order.

    Item ``i`` (counting across all targets) uses ``derive_seed(seed, i)``.
    Calibration failures are returned as :class:`SweepFailure` entries.
    """
    if per_level < 1:
        raise ValueError("per_level must be >= 1")
    out = []
    index = 0
    for target in targets:
        for rep in range(per_level):
            item_seed = derive_seed(seed, index)
            index += 1
            spec = SynthSpec(float(target), length, item_seed, tolerance, n_harmonics, max_iters)
            name = sweep_name(float(target), rep)
            try:
                out.append(generate_with_target_omega(spec, name))
            except CalibrationFailed as exc:
                logger.warning("%s: %s", name, exc)
                out.append(SweepFailure(name, float(target), item_seed, exc))
    return out


def parse_targets(text: str) -> list[float]:
    """``"0.2:0.8:0.1"`` (inclusive range) or ``"0.2,0.5,0.8"``."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError("range targets must be start:stop:step with step > 0")
        start, stop, step = parts
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(max(n, 0))]
    return [float(p) for p in text.split(",") if p.strip()]
