"""Trainless reference forecasters."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class ForecastTask:
    context: np.ndarray
    horizon: int
    season_length: int = 1

    def __post_init__(self):
        ctx = np.asarray(self.context, dtype=float).ravel()
        if ctx.size < 1:
            raise DataError("forecast context is empty")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.season_length < 1:
            raise ValueError("season_length must be >= 1")
        object.__setattr__(self, "context", ctx)


def naive_forecast(t: ForecastTask) -> np.ndarray:
    """Repeat the last observed value."""
    return np.full(t.horizon, t.context[-1])


def seasonal_naive_forecast(t: ForecastTask) -> np.ndarray:
    """Repeat the last full season of the context."""
    T, s = t.context.size, t.season_length
    if T < s:
        raise DataError(f"context of length {T} is shorter than season_length {s}")
    h = np.arange(t.horizon)
    return t.context[T - s + h % s]


def season_from_peak(T: int, peak_bin: int) -> int:
    """Samples per cycle of a spectral peak, rounded and clipped to ``[1, T]``."""
    return int(min(T, max(1, round(T / peak_bin))))
