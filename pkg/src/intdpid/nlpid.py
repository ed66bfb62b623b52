"""fal-based nonlinear PID and the two-TD controller around it.

TD(I) turns the reference into a smooth transient profile; TD(II) filters
the measured output. Error, error rate and integral are formed from the
difference of their (tracking, derivative) estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .differentiators import TdParams, TdState, td_estimates, td_step
from .simcore import IntegratorConfig

__all__ = ["FalTerm", "NlpidParams", "ControllerConfig", "ControllerState", "fal", "nlpid_control",
           "controller_step", "DEFAULT_NLPID"]


def fal(e: float, alpha: float, delta: float) -> float:
    """Linear of slope delta**(alpha-1) inside |e| <= delta, |e|**alpha * sign(e) outside."""
    if abs(e) <= delta:
        return e / delta ** (1.0 - alpha)
    return math.copysign(abs(e) ** alpha, e)


@dataclass(frozen=True)
class FalTerm:
    gain: float
    alpha: float
    delta: float

    def __post_init__(self):
        if not 0.5 <= self.alpha <= 1.0:
            raise ValueError("alpha: must lie in [0.5, 1]")
        if not self.delta > 0:
            raise ValueError("delta: must be > 0")

    def __call__(self, e: float) -> float:
        return self.gain * fal(e, self.alpha, self.delta)


@dataclass(frozen=True)
class NlpidParams:
    p_term: FalTerm
    d_term: FalTerm
    i_term: FalTerm


DEFAULT_NLPID = NlpidParams(
    p_term=FalTerm(gain=1.9151, alpha=0.7128, delta=0.1038),
    d_term=FalTerm(gain=2.0130, alpha=0.8680, delta=0.0354),
    i_term=FalTerm(gain=0.0800, alpha=0.9888, delta=1.1916),
)


def nlpid_control(e: float, e_dot: float, e_int: float, p: NlpidParams) -> float:
    return p.p_term(e) + p.d_term(e_dot) + p.i_term(e_int)


@dataclass(frozen=True)
class ControllerConfig:
    td_kind: str
    td_params: TdParams
    nlpid: NlpidParams = DEFAULT_NLPID
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __post_init__(self):
        if self.td_kind not in ("intd", "han"):
            raise ValueError(f"td_kind: expected 'intd' or 'han', got {self.td_kind!r}")


@dataclass(frozen=True)
class ControllerState:
    """TD(I)/TD(II) states, the running error integral and the last error
    (kept for the trapezoidal update)."""

    td1: TdState = TdState()
    td2: TdState = TdState()
    integral_error: float = 0.0
    error: float = 0.0


def controller_step(cs: ControllerState, r_sample: float, y_sample: float, cfg: ControllerConfig,
                    dt: float) -> tuple[ControllerState, float]:
    """Advance both TDs by ``dt`` on the held samples and evaluate the control law."""
    kind, params, integ = cfg.td_kind, cfg.td_params, cfg.integrator
    td1 = td_step(kind, cs.td1, r_sample, params, integ, dt)
    td2 = td_step(kind, cs.td2, y_sample, params, integ, dt)
    v1, v1_dot = td_estimates(kind, td1, params)
    v2, v2_dot = td_estimates(kind, td2, params)
    e = v1 - v2
    e_dot = v1_dot - v2_dot
    e_int = cs.integral_error + 0.5 * dt * (cs.error + e)
    u = nlpid_control(e, e_dot, e_int, cfg.nlpid)
    return ControllerState(td1, td2, e_int, e), u
