"""Nonlinear mass-spring-damper with cubic spring and cubic damping."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = ["NmsdParams", "PlantState", "ValidityEnvelopeWarning", "nmsd_deriv_general", "nmsd_deriv",
           "outside_envelope", "DEFAULT_PLANT"]


class ValidityEnvelopeWarning(UserWarning):
    """Plant state left the |x| <= a, |xdot| <= b modelling envelope."""


@dataclass(frozen=True)
class NmsdParams:
    """M x'' + D(c1 x + c2 x'^3) + c3 x + c4 x^3 = (1 + c5 x'^3) u."""

    M: float = 1.0
    D: float = 1.0
    c1: float = 0.01
    c2: float = 0.1
    c3: float = 0.01
    c4: float = 0.67
    c5: float = 0.0
    a: float = 1.5
    b: float = 1.5

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError("M: must be > 0")
        if not (self.a > 0 and self.b > 0):
            raise ValueError("a/b: envelope bounds must be > 0")


DEFAULT_PLANT = NmsdParams()


class PlantState(NamedTuple):
    x1: float = 0.0
    x2: float = 0.0

    @property
    def y(self) -> float:
        return self.x1


def nmsd_deriv_general(s, u: float, p: NmsdParams) -> PlantState:
    x1, x2 = s
    # grouped by power of x so the published coefficients give the specialized form bit for bit
    cubic_damping = p.D * p.c2
    linear = p.D * p.c1 + p.c3
    gain = 1.0 + p.c5 * x2 ** 3
    return PlantState(x2, (-cubic_damping * x2 ** 3 - linear * x1 - p.c4 * x1 ** 3 + gain * u) / p.M)


def nmsd_deriv(s, u: float) -> PlantState:
    """The plant with the published coefficients substituted."""
    x1, x2 = s
    return PlantState(x2, -0.1 * x2 ** 3 - 0.02 * x1 - 0.67 * x1 ** 3 + u)


def outside_envelope(s, p: NmsdParams) -> bool:
    return abs(s[0]) > p.a or abs(s[1]) > p.b


def plant_rhs(u: float, p: NmsdParams | None = None):
    """Right-hand side ``f(t, x)`` for the integrator with ``u`` held."""
    if p is None or p == DEFAULT_PLANT:
        def f(t, x):
            x2 = x[1]
            return np.array((x2, -0.1 * x2 ** 3 - 0.02 * x[0] - 0.67 * x[0] ** 3 + u))
    else:
        def f(t, x):
            return np.array(nmsd_deriv_general(x, u, p))
    return f
