"""Integral performance indices over uniformly sampled signals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["TimeSeries", "MetricsReport", "GridMismatch", "iae", "itae", "itse", "isu", "iau", "mse", "compute_metrics"]


class GridMismatch(ValueError):
    """Two series do not share (t0, dt, length)."""


class TimeSeries:
    """Uniformly sampled signal; ``values`` has shape (n,) or (n, channels)."""

    def __init__(self, t0: float, dt: float, values):
        values = np.asarray(values, dtype=float)
        if not dt > 0:
            raise ValueError("dt: must be > 0")
        if values.shape[0] < 2:
            raise ValueError("values: need at least two samples")
        self.t0 = float(t0)
        self.dt = float(dt)
        self.values = values

    def __len__(self):
        return self.values.shape[0]

    def __repr__(self):
        return f"TimeSeries(t0={self.t0}, dt={self.dt}, n={len(self)}, shape={self.values.shape})"

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    @property
    def horizon(self) -> float:
        return self.dt * (len(self) - 1)

    def channel(self, i: int) -> "TimeSeries":
        return TimeSeries(self.t0, self.dt, self.values[:, i])

    def same_grid(self, other: "TimeSeries") -> bool:
        return self.t0 == other.t0 and self.dt == other.dt and len(self) == len(other)


@dataclass(frozen=True)
class MetricsReport:
    iae: float
    itae: float
    itse: float
    isu: float
    iau: float
    mse: float
    horizon: float

    NAMES = ("iae", "itae", "itse", "isu", "iau")

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in (*self.NAMES, "mse")}


def _error(r: TimeSeries, y: TimeSeries) -> np.ndarray:
    if not r.same_grid(y):
        raise GridMismatch(f"grids differ: {r!r} vs {y!r}")
    return r.values - y.values


def _integral(values: np.ndarray, dt: float) -> float:
    return float(np.trapezoid(values, dx=dt))


def _elapsed(s: TimeSeries) -> np.ndarray:
    # time weights run from the start of the series
    return s.dt * np.arange(len(s))


def iae(r: TimeSeries, y: TimeSeries) -> float:
    return _integral(np.abs(_error(r, y)), r.dt)


def itae(r: TimeSeries, y: TimeSeries) -> float:
    return _integral(_elapsed(r) * np.abs(_error(r, y)), r.dt)


def itse(r: TimeSeries, y: TimeSeries) -> float:
    return _integral(_elapsed(r) * _error(r, y) ** 2, r.dt)


def isu(u: TimeSeries) -> float:
    return _integral(u.values ** 2, u.dt)


def iau(u: TimeSeries) -> float:
    return _integral(np.abs(u.values), u.dt)


def mse(r: TimeSeries, y: TimeSeries) -> float:
    """Time-averaged integral squared error."""
    return _integral(_error(r, y) ** 2, r.dt) / r.horizon


def compute_metrics(r: TimeSeries, y: TimeSeries, u: TimeSeries) -> MetricsReport:
    if not r.same_grid(u):
        raise GridMismatch(f"grids differ: {r!r} vs {u!r}")
    return MetricsReport(
        iae=iae(r, y), itae=itae(r, y), itse=itse(r, y),
        isu=isu(u), iau=iau(u), mse=mse(r, y), horizon=r.horizon,
    )
