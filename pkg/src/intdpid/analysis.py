"""Closed forms and linearized characteristics of the INTD."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .differentiators import IntdParams, TdState

__all__ = [
    "SecondOrderChar",
    "Phase",
    "PoleHit",
    "saturation_argument",
    "arrival_solution",
    "second_order_char",
    "tracking_error_tf_gain",
    "bode_magnitude_db",
    "bode_slope",
    "classify_phase",
    "lyapunov_value",
    "lyapunov_gradient",
    "overshoot",
    "ARRIVAL_THRESHOLD",
    "TRACKING_THRESHOLD",
]

# tanh(3) ~ 0.995: saturated; below 0.1 tanh is linear to better than 0.04 %
ARRIVAL_THRESHOLD = 3.0
TRACKING_THRESHOLD = 0.1


class PoleHit(ZeroDivisionError):
    pass


class Phase(str, Enum):
    ARRIVAL_HIGH = "arrival_high"
    ARRIVAL_LOW = "arrival_low"
    TRANSITION = "transition"
    TRACKING = "tracking"


@dataclass(frozen=True)
class SecondOrderChar:
    omega_n: float
    xi: float
    dc_gain: float


def saturation_argument(state, v: float, p: IntdParams) -> float:
    """The quantity inside tanh, (beta*z1 - (1-alpha)*v) / gamma."""
    return (p.beta * state[0] - (1.0 - p.alpha) * v) / p.gamma


def arrival_solution(t: float, z0, R: float) -> TdState:
    """Closed-form trajectory while tanh is saturated at +1."""
    z10, z20 = z0
    decay = math.exp(-R * t)
    z1 = -R * t - (1.0 + z20 / R) * decay + z10 + z20 / R + 1.0
    z2 = -R + (R + z20) * decay
    return TdState(z1, z2)


def second_order_char(p: IntdParams) -> SecondOrderChar:
    return SecondOrderChar(
        omega_n=p.R * math.sqrt(p.beta / p.gamma),
        xi=0.5 * math.sqrt(p.gamma / p.beta),
        dc_gain=(1.0 - p.alpha) / p.beta,
    )


def tracking_error_tf_gain(s: complex, p: IntdParams) -> complex:
    """s(s+R) / (s^2 + R s + R^2 beta/gamma); the same function serves the
    differentiation error relative to s*V(s)."""
    s = complex(s)
    if cmath.isinf(s):
        return 1.0 + 0j
    k = p.R * p.R * p.beta / p.gamma
    den = s * s + p.R * s + k
    scale = abs(s) ** 2 + p.R * abs(s) + k
    if abs(den) < 1e-12 * scale:
        raise PoleHit(f"s={s} is a pole of the tracking-error transfer function")
    return s * (s + p.R) / den


def bode_magnitude_db(omega, p: IntdParams):
    """20 log10 |Z2(jw)/V(jw)| of the linearized INTD (vectorized over omega)."""
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("omega: must be > 0")
    ch = second_order_char(p)
    r = w / ch.omega_n
    mag = (20.0 * np.log10(ch.dc_gain) + 20.0 * np.log10(w)
           - 20.0 * np.log10(np.sqrt((1.0 - r * r) ** 2 + (2.0 * ch.xi * r) ** 2)))
    return float(mag) if mag.ndim == 0 else mag


def bode_slope(omega, mag_db) -> float:
    """Least-squares slope in dB per decade."""
    x = np.log10(np.asarray(omega, dtype=float))
    slope, _ = np.polyfit(x, np.asarray(mag_db, dtype=float), 1)
    return float(slope)


def classify_phase(state, v: float, p: IntdParams) -> Phase:
    q = saturation_argument(state, v, p)
    if q > ARRIVAL_THRESHOLD:
        return Phase.ARRIVAL_HIGH
    if q < -ARRIVAL_THRESHOLD:
        return Phase.ARRIVAL_LOW
    if abs(q) < TRACKING_THRESHOLD:
        return Phase.TRACKING
    return Phase.TRANSITION


def _log_cosh(x):
    # overflow-free log(cosh(x))
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0)


def lyapunov_value(state, p: IntdParams):
    """R^2 (gamma/beta) log cosh(beta z1/gamma) + z2^2/2 for zero input.

    The R^2 weight is what makes the derivative along trajectories equal
    -R z2^2; vectorized over a (2, n) array of states.
    """
    z1, z2 = np.asarray(state[0], dtype=float), np.asarray(state[1], dtype=float)
    k = p.beta / p.gamma
    v = p.R * p.R / k * _log_cosh(k * z1) + 0.5 * z2 * z2
    return float(v) if np.ndim(v) == 0 else v


def lyapunov_gradient(state, p: IntdParams) -> tuple[float, float]:
    z1, z2 = state
    return p.R * p.R * math.tanh(p.beta * z1 / p.gamma), float(z2)


def overshoot(values, settled: float) -> float:
    """Peak excursion past ``settled``, relative to |settled|."""
    values = np.asarray(values, dtype=float)
    if settled == 0:
        raise ValueError("settled: overshoot is undefined for a zero final value")
    if settled > 0:
        return float((values.max() - settled) / settled)
    return float((settled - values.min()) / -settled)
