"""Coefficient of determination and residual diagnostics.

The R2 used throughout this package centers the residuals before summing:

    R2 = 1 - sum((E_i - Ebar)^2) / sum((Y_i - Ybar)^2),   E_i = Y_i - F_i

Centering makes the score invariant under a constant offset of the
prediction and unbounded below (a prediction can score far worse than the
mean). This differs from the textbook uncentered definition; reports emitted
by :mod:`boomkit.dataio` carry a note saying so, and a plain RMSE rides
along as a familiar companion number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["ObservedSeries", "PredictedSeries", "r_squared", "residuals", "rmse"]


@dataclass(frozen=True)
class ObservedSeries:
    """Timestamped intensity counts (strictly increasing times, >= 3 points)."""

    times: np.ndarray
    values: np.ndarray
    label: str = ""
    scale: float = 1.0  # divisor applied when the series was peak-normalized

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if times.ndim != 1 or values.ndim != 1 or len(times) != len(values):
            raise ValidationError("times and values must be 1-d and aligned")
        if len(times) < 3:
            raise ValidationError("observed series needs at least 3 points")
        if not np.all(np.isfinite(times)) or not np.all(np.isfinite(values)):
            raise ValidationError("observed series must be finite")
        if not np.all(np.diff(times) > 0):
            raise ValidationError("observed times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class PredictedSeries:
    """Model values aligned index-by-index with an observed series."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1:
            raise ValidationError("predicted values must be 1-d")

    def __len__(self) -> int:
        return len(self.values)


def _aligned(observed: ObservedSeries, predicted: PredictedSeries) -> np.ndarray:
    if len(predicted) != len(observed):
        raise ValidationError(
            f"predicted length {len(predicted)} != observed length {len(observed)}"
        )
    return observed.values - predicted.values


def residuals(
    observed: ObservedSeries, predicted: PredictedSeries
) -> tuple[np.ndarray, float]:
    """Elementwise errors E_i = Y_i - F_i and their mean."""
    errs = _aligned(observed, predicted)
    return errs, float(errs.mean())


def r_squared(observed: ObservedSeries, predicted: PredictedSeries) -> float:
    """Centered-residual coefficient of determination (see module docstring).

    Not clamped: perfect or constant-offset predictions give exactly 1.0,
    poor ones go arbitrarily negative. A constant observed series has no
    variance to explain and raises.
    """
    errs = _aligned(observed, predicted)
    y = observed.values
    denom = float(((y - y.mean()) ** 2).sum())
    if denom == 0.0:
        raise ValidationError("observed series is constant: R2 denominator is zero")
    num = float(((errs - errs.mean()) ** 2).sum())
    return 1.0 - num / denom


def rmse(observed: ObservedSeries, predicted: PredictedSeries) -> float:
    """Plain root-mean-square error (uncentered)."""
    errs = _aligned(observed, predicted)
    return float(math.sqrt(float((errs**2).mean())))
