"""Tracking differentiators: the tanh-based INTD and the saturated Han TD.

Both produce a tracking state and a derivative state from a scalar input.
``TdState`` is shared so the controller can treat either kind the same way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .simcore import IntegratorConfig, advance

__all__ = [
    "IntdParams",
    "HanTdParams",
    "TdState",
    "intd_deriv",
    "intd_estimates",
    "sat",
    "han_td_deriv",
    "td_deriv",
    "td_estimates",
    "td_step",
    "DEFAULT_INTD",
    "DEFAULT_HAN",
]


@dataclass(frozen=True)
class IntdParams:
    alpha: float
    beta: float
    gamma: float
    R: float

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha: must lie in (0, 1)")
        for name in ("beta", "gamma", "R"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name}: must be > 0")

    @property
    def gain(self) -> float:
        """Factor mapping the raw states back to unity DC gain."""
        return self.beta / (1.0 - self.alpha)


@dataclass(frozen=True)
class HanTdParams:
    R: float
    delta: float

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("R: must be > 0")
        if not self.delta > 0:
            raise ValueError("delta: must be > 0")


TdParams = Union[IntdParams, HanTdParams]

DEFAULT_INTD = IntdParams(alpha=0.9790, beta=5.5872, gamma=8.3864, R=26.5005)
DEFAULT_HAN = HanTdParams(R=11.6, delta=0.0005)


class TdState(NamedTuple):
    z1: float = 0.0
    z2: float = 0.0


def intd_deriv(state, v: float, p: IntdParams) -> TdState:
    z1, z2 = state
    q = (p.beta * z1 - (1.0 - p.alpha) * v) / p.gamma
    return TdState(z2, -p.R * p.R * math.tanh(q) - p.R * z2)


def intd_estimates(state, p: IntdParams) -> tuple[float, float]:
    """Rescaled (v_hat, vdot_hat) so a settled INTD reports the input itself."""
    g = p.gain
    return g * state[0], g * state[1]


def sat(A: float, delta: float) -> float:
    if abs(A) > delta:
        return math.copysign(1.0, A)
    return A / delta


def han_td_deriv(state, v: float, p: HanTdParams) -> TdState:
    x1, x2 = state
    return TdState(x2, -p.R * sat(x1 - v + x2 * abs(x2) / (2.0 * p.R), p.delta))


def td_deriv(kind: str, state, v: float, params: TdParams) -> TdState:
    if kind == "intd":
        return intd_deriv(state, v, params)
    if kind == "han":
        return han_td_deriv(state, v, params)
    raise ValueError(f"kind: expected 'intd' or 'han', got {kind!r}")


def td_estimates(kind: str, state, params: TdParams) -> tuple[float, float]:
    """(tracking, derivative) estimates; the Han TD needs no rescaling."""
    if kind == "intd":
        return intd_estimates(state, params)
    return float(state[0]), float(state[1])


def _rhs(kind: str, v: float, params: TdParams):
    if kind == "intd":
        a, b, c, R = params.alpha, params.beta, params.gamma, params.R
        shift = (1.0 - a) * v
        R2 = R * R

        def f(t, z):
            return np.array((z[1], -R2 * math.tanh((b * z[0] - shift) / c) - R * z[1]))
    elif kind == "han":
        R, d = params.R, params.delta
        twoR = 2.0 * R

        def f(t, z):
            x2 = z[1]
            return np.array((x2, -R * sat(z[0] - v + x2 * abs(x2) / twoR, d)))
    else:
        raise ValueError(f"kind: expected 'intd' or 'han', got {kind!r}")
    return f


def td_step(kind: str, state, v_held: float, params: TdParams, integrator: IntegratorConfig,
            dt: float, h: float | None = None, return_step: bool = False):
    """Advance a TD by ``dt`` with the input held at ``v_held``.

    Pass ``h``/``return_step`` to carry the adaptive step size between calls.
    """
    if not dt > 0:
        raise ValueError("dt: must be > 0")
    x, h_next = advance(_rhs(kind, v_held, params), 0.0, np.asarray(state, dtype=float), dt, integrator, h)
    new = TdState(float(x[0]), float(x[1]))
    return (new, h_next) if return_step else new
