"""Tracking differentiators, a fal-based nonlinear PID and the nonlinear
mass-spring-damper loop they are tested on."""

__version__ = "0.1.0"

from .differentiators import (DEFAULT_HAN, DEFAULT_INTD, HanTdParams, IntdParams, TdState, han_td_deriv,
                              intd_deriv, intd_estimates, sat, td_step)
from .metrics import MetricsReport, TimeSeries, compute_metrics
from .nlpid import DEFAULT_NLPID, ControllerConfig, ControllerState, FalTerm, NlpidParams, fal, nlpid_control
from .plant import DEFAULT_PLANT, NmsdParams, PlantState, nmsd_deriv, nmsd_deriv_general
from .signals import NoiseSpec, ReferenceSpec, noise_sample, reference_value
from .simcore import IntegratorConfig, OdeSystem, integrate
from .scenario import PRESETS, RunResult, ScenarioConfig, preset, run, run_closed_loop, run_open_loop_td
