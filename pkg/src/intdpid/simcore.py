"""Explicit Runge-Kutta integration: classical RK4 and adaptive Dormand-Prince 5(4)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .metrics import TimeSeries

__all__ = [
    "SimulationError",
    "StepUnderflow",
    "NonFiniteState",
    "OdeSystem",
    "IntegratorConfig",
    "advance",
    "integrate",
]

Derivative = Callable[[float, np.ndarray], np.ndarray]


class SimulationError(RuntimeError):
    pass


class StepUnderflow(SimulationError):
    """Adaptive step size dropped below ``min_dt``."""


class NonFiniteState(SimulationError):
    """A state component became NaN or infinite."""


@dataclass(frozen=True)
class OdeSystem:
    dimension: int
    derivative: Derivative

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension: must be a positive integer")


@dataclass(frozen=True)
class IntegratorConfig:
    """Solver settings.

    ``dt`` is the step for ``rk4_fixed`` and the first trial step for
    ``rk45_adaptive``.
    """

    method: str = "rk45_adaptive"
    dt: float = 1e-3
    rel_tol: float = 1e-6
    abs_tol: float = 1e-9
    max_dt: float = 1e-2
    min_dt: float = 1e-12

    def __post_init__(self):
        if self.method not in ("rk4_fixed", "rk45_adaptive"):
            raise ValueError(f"method: expected rk4_fixed or rk45_adaptive, got {self.method!r}")
        if not self.dt > 0:
            raise ValueError("dt: must be > 0")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol/abs_tol: must be > 0")
        if not 0 < self.min_dt <= self.max_dt:
            raise ValueError("min_dt/max_dt: need 0 < min_dt <= max_dt")


# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# 5th-order weights minus embedded 4th-order weights
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


def _check_finite(x: np.ndarray, t: float) -> None:
    if not np.all(np.isfinite(x)):
        raise NonFiniteState(f"non-finite state at t={t:.6g}: {x}")


def _rk4_step(f: Derivative, t: float, x: np.ndarray, h: float) -> np.ndarray:
    k1 = f(t, x)
    k2 = f(t + 0.5 * h, x + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, x + 0.5 * h * k2)
    k4 = f(t + h, x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _dopri_step(f: Derivative, t: float, x: np.ndarray, h: float, k1: np.ndarray):
    """One trial step. Returns (x_new, f(t+h, x_new), error vector)."""
    k = [k1]
    for i in range(1, 7):
        acc = x.copy()
        for a, kj in zip(_A[i], k):
            if a:
                acc += (h * a) * kj
        k.append(f(t + _C[i] * h, acc))
    # stage 7 is evaluated at the propagated solution (FSAL)
    x_new = acc
    err = h * sum(e * kj for e, kj in zip(_E, k) if e)
    return x_new, k[6], err


def _error_norm(err, x, x_new, rtol, atol) -> float:
    scale = atol + rtol * np.maximum(np.abs(x), np.abs(x_new))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def _initial_step(cfg: IntegratorConfig, span: float) -> float:
    return min(cfg.dt, cfg.max_dt, span)


def _dopri_steps(f, t0, x0, t1, cfg, h=None):
    """Yield accepted steps (t, x, fx, t_new, x_new, fx_new, h_next) over [t0, t1]."""
    t, x = t0, np.asarray(x0, dtype=float).copy()
    fx = f(t, x)
    h = _initial_step(cfg, t1 - t0) if h is None else min(h, cfg.max_dt)
    while t1 - t > 1e-14 * max(1.0, abs(t1)):
        h = min(h, t1 - t)
        if t + h >= t1 - 1e-14 * max(1.0, abs(t1)):
            h_try, t_new = t1 - t, t1
        else:
            h_try, t_new = h, t + h
        x_new, fx_new, err = _dopri_step(f, t, x, h_try, fx)
        en = _error_norm(err, x, x_new, cfg.rel_tol, cfg.abs_tol)
        if en <= 1.0 and np.all(np.isfinite(x_new)):
            factor = _MAX_FACTOR if en == 0 else min(_MAX_FACTOR, _SAFETY * en ** -0.2)
            # a step clipped to land on t1 says nothing about the usable step size
            h_next = min(cfg.max_dt, max(h_try * factor, h))
            yield t, x, fx, t_new, x_new, fx_new, h_next
            t, x, fx, h = t_new, x_new, fx_new, h_next
        else:
            if not np.isfinite(en):
                factor = _MIN_FACTOR
            else:
                factor = max(_MIN_FACTOR, _SAFETY * en ** -0.2)
            h = h_try * factor
            if h < cfg.min_dt:
                if not np.all(np.isfinite(x_new)):
                    raise NonFiniteState(f"non-finite trial state near t={t:.6g}")
                raise StepUnderflow(f"step size {h:.3e} below min_dt={cfg.min_dt:.3e} at t={t:.6g}")


def advance(f: Derivative, t0: float, x0, t1: float, cfg: IntegratorConfig, h: float | None = None):
    """Integrate from ``t0`` to ``t1`` and return ``(x(t1), suggested next step)``.

    The suggested step lets callers that restart every sampling period keep
    the adaptive step history (for ``rk4_fixed`` it is just ``cfg.dt``).
    """
    x = np.asarray(x0, dtype=float)
    if t1 <= t0:
        return x.copy(), h if h is not None else cfg.dt
    if cfg.method == "rk4_fixed":
        n = max(1, math.ceil((t1 - t0) / cfg.dt - 1e-9))
        hh = (t1 - t0) / n
        for i in range(n):
            x = _rk4_step(f, t0 + i * hh, x, hh)
        _check_finite(x, t1)
        return x, cfg.dt
    h_next = h
    for *_, x_new, _fx, h_next in _dopri_steps(f, t0, x, t1, cfg, h):
        x = x_new
    _check_finite(x, t1)
    return x, h_next


def _hermite(t0, x0, f0, t1, x1, f1, t):
    h = t1 - t0
    s = (t - t0) / h
    s2, s3 = s * s, s * s * s
    return ((2 * s3 - 3 * s2 + 1) * x0 + (s3 - 2 * s2 + s) * h * f0
            + (-2 * s3 + 3 * s2) * x1 + (s3 - s2) * h * f1)


def integrate(system: OdeSystem, x0, t_span, config: IntegratorConfig, output_dt: float) -> TimeSeries:
    """Integrate ``system`` and sample the state on a uniform grid.

    The grid is ``t0 + i*output_dt`` for every point that does not pass
    ``t_end``. The fixed-step method shrinks its step so each output point
    is hit exactly; the adaptive method interpolates between accepted steps
    with cubic Hermite polynomials.
    """
    t0, t_end = map(float, t_span)
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if not t_end > t0:
        raise ValueError("t_span: must be increasing")
    if not output_dt > 0:
        raise ValueError("output_dt: must be > 0")
    if x0.size != system.dimension:
        raise ValueError(f"x0: expected length {system.dimension}, got {x0.size}")
    _check_finite(x0, t0)

    n = int(math.floor((t_end - t0) / output_dt + 1e-9)) + 1
    grid = t0 + output_dt * np.arange(n)
    out = np.empty((n, system.dimension))
    out[0] = x0
    f = system.derivative

    if config.method == "rk4_fixed":
        m = max(1, math.ceil(output_dt / config.dt - 1e-9))
        h = output_dt / m
        x = x0.copy()
        for i in range(1, n):
            t = grid[i - 1]
            for j in range(m):
                x = _rk4_step(f, t + j * h, x, h)
            _check_finite(x, grid[i])
            out[i] = x
        return TimeSeries(t0, output_dt, out)

    i = 1
    t_stop = grid[-1]
    for ta, xa, fa, tb, xb, fb, _ in _dopri_steps(f, t0, x0, t_stop, config):
        _check_finite(xb, tb)
        while i < n and grid[i] <= tb + 1e-12 * max(1.0, abs(tb)):
            out[i] = xb if grid[i] >= tb else _hermite(ta, xa, fa, tb, xb, fb, grid[i])
            i += 1
    return TimeSeries(t0, output_dt, out)
