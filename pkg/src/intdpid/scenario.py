"""Closed-loop NLPID + plant experiments and open-loop TD runs."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .analysis import classify_phase
from .differentiators import (DEFAULT_HAN, DEFAULT_INTD, HanTdParams, IntdParams, TdState, _rhs,
                              td_estimates)
from .metrics import MetricsReport, TimeSeries, compute_metrics
from .nlpid import DEFAULT_NLPID, ControllerConfig, ControllerState, NlpidParams, controller_step
from .plant import DEFAULT_PLANT, NmsdParams, PlantState, ValidityEnvelopeWarning, outside_envelope, plant_rhs
from .signals import NOISE_ALGORITHM, NoiseSpec, ReferenceSpec, noise_sample, reference_rate, reference_value
from .simcore import IntegratorConfig, OdeSystem, advance, integrate

__all__ = ["ScenarioConfig", "RunResult", "CHANNELS", "PRESETS", "run", "run_closed_loop",
           "run_open_loop_td", "config_hash", "preset"]

# column order of the trajectory CSV
CHANNELS = ("r", "y_clean", "y_measured", "u", "z1", "z2", "x1", "x2")


@dataclass(frozen=True)
class ScenarioConfig:
    td_kind: str = "intd"
    mode: str = "closed_loop"
    intd_params: IntdParams | None = None
    han_td_params: HanTdParams | None = None
    nlpid_params: NlpidParams = DEFAULT_NLPID
    plant_params: NmsdParams = DEFAULT_PLANT
    reference: ReferenceSpec = field(default_factory=ReferenceSpec)
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    horizon: float = 10.0
    controller_dt: float = 1e-3
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    initial_plant: PlantState = PlantState()
    initial_td1: TdState = TdState()
    initial_td2: TdState = TdState()

    def __post_init__(self):
        if self.td_kind not in ("intd", "han"):
            raise ValueError(f"td_kind: expected 'intd' or 'han', got {self.td_kind!r}")
        if self.mode not in ("closed_loop", "open_loop"):
            raise ValueError(f"mode: expected 'closed_loop' or 'open_loop', got {self.mode!r}")
        if not self.horizon > 0:
            raise ValueError("horizon: must be > 0")
        if not self.controller_dt > 0:
            raise ValueError("controller_dt: must be > 0")
        wanted, other = ("intd_params", "han_td_params") if self.td_kind == "intd" else ("han_td_params", "intd_params")
        if getattr(self, wanted) is None:
            raise ValueError(f"{wanted}: required when td_kind = {self.td_kind}")
        if getattr(self, other) is not None:
            raise ValueError(f"{other}: must be absent when td_kind = {self.td_kind}")

    @property
    def td_params(self):
        return self.intd_params if self.td_kind == "intd" else self.han_td_params


@dataclass
class RunResult:
    series: dict[str, TimeSeries]
    metrics: MetricsReport
    provenance: dict
    extras: dict[str, np.ndarray] = field(default_factory=dict)
    envelope_violated: bool = False

    def __getitem__(self, name: str) -> TimeSeries:
        return self.series[name]

    @property
    def t(self) -> np.ndarray:
        return self.series["r"].t

    def table(self) -> np.ndarray:
        """(n, 1 + len(CHANNELS)) array in CSV column order."""
        return np.column_stack([self.t] + [self.series[c].values for c in CHANNELS])


def config_hash(cfg: ScenarioConfig) -> str:
    blob = json.dumps(dataclasses.asdict(cfg), sort_keys=True, default=float)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _provenance(cfg: ScenarioConfig) -> dict:
    return {
        "artifact_version": __version__,
        "config_hash": config_hash(cfg),
        "seed": cfg.noise.seed,
        "noise_algorithm": NOISE_ALGORITHM,
        "integrator": dataclasses.asdict(cfg.integrator),
        "config": dataclasses.asdict(cfg),
    }


def run_closed_loop(cfg: ScenarioConfig) -> RunResult:
    """Sampled NLPID driving the continuous plant.

    At every controller tick the reference and the (noisy) plant output are
    sampled, both TDs advance one period, and the resulting ``u`` is held
    while the plant is integrated to the next tick.
    """
    dt = cfg.controller_dt
    n = int(round(cfg.horizon / dt))
    ccfg = ControllerConfig(cfg.td_kind, cfg.td_params, cfg.nlpid_params, cfg.integrator)
    cs = ControllerState(cfg.initial_td1, cfg.initial_td2)
    x = np.array(cfg.initial_plant, dtype=float)
    out = np.zeros((n + 1, len(CHANNELS)))
    h_plant = None
    violated = False
    for k in range(n + 1):
        t = k * dt
        r = reference_value(cfg.reference, t)
        y = x[0]
        y_meas = y + noise_sample(cfg.noise, t)
        cs, u = controller_step(cs, r, y_meas, ccfg, dt)
        out[k] = (r, y, y_meas, u, cs.td2.z1, cs.td2.z2, x[0], x[1])
        if k < n:
            x, h_plant = advance(plant_rhs(u, cfg.plant_params), t, x, t + dt, cfg.integrator, h_plant)
            if not violated and outside_envelope(x, cfg.plant_params):
                violated = True
                warnings.warn(f"plant state {tuple(x)} left the validity envelope at t={t + dt:.3f}",
                              ValidityEnvelopeWarning, stacklevel=2)
    series = {name: TimeSeries(0.0, dt, out[:, i]) for i, name in enumerate(CHANNELS)}
    metrics = compute_metrics(series["r"], series["y_measured"], series["u"])
    return RunResult(series, metrics, _provenance(cfg), envelope_violated=violated)


def run_open_loop_td(kind: str, params, reference: ReferenceSpec, noise: NoiseSpec | None = None,
                     horizon: float = 10.0, integrator: IntegratorConfig | None = None,
                     initial: TdState = TdState(), output_dt: float = 1e-3) -> RunResult:
    """Feed the reference (plus optional held noise) straight into one TD.

    Besides the CSV channels, ``extras`` carries the rescaled estimates, the
    tracking and differentiation errors and, for the INTD, the phase label
    of every sample.
    """
    noise = noise or NoiseSpec()
    integrator = integrator or IntegratorConfig()

    def v_in(t):
        return reference_value(reference, t) + noise_sample(noise, t)

    if kind == "intd":
        a, b, c, R = params.alpha, params.beta, params.gamma, params.R
        R2 = R * R

        def f(t, z):
            return np.array((z[1], -R2 * np.tanh((b * z[0] - (1.0 - a) * v_in(t)) / c) - R * z[1]))
    else:
        def f(t, z):
            return _rhs(kind, v_in(t), params)(t, z)

    traj = integrate(OdeSystem(2, f), np.array(initial, dtype=float), (0.0, horizon), integrator, output_dt)
    t = traj.t
    z = traj.values
    r = np.array([reference_value(reference, ti) for ti in t])
    rdot = np.array([reference_rate(reference, ti) for ti in t])
    v = r + np.array([noise_sample(noise, ti) for ti in t])
    est = np.array([td_estimates(kind, zi, params) for zi in z])
    extras = {
        "v_hat": est[:, 0],
        "vdot_hat": est[:, 1],
        "tracking_error": r - est[:, 0],
        "differentiation_error": rdot - est[:, 1],
    }
    if kind == "intd":
        extras["phase"] = np.array([classify_phase(zi, vi, params).value for zi, vi in zip(z, v)])
    cols = {
        "r": r, "y_clean": r, "y_measured": v, "u": np.zeros_like(t),
        "z1": z[:, 0], "z2": z[:, 1], "x1": est[:, 0], "x2": est[:, 1],
    }
    series = {name: TimeSeries(0.0, output_dt, cols[name]) for name in CHANNELS}
    metrics = compute_metrics(series["r"], series["x1"], series["u"])
    cfg = ScenarioConfig(
        td_kind=kind, mode="open_loop",
        intd_params=params if kind == "intd" else None,
        han_td_params=params if kind == "han" else None,
        reference=reference, noise=noise, horizon=horizon, controller_dt=output_dt,
        integrator=integrator, initial_td1=TdState(*initial),
    )
    return RunResult(series, metrics, _provenance(cfg), extras=extras)


def run(cfg: ScenarioConfig) -> RunResult:
    if cfg.mode == "open_loop":
        return run_open_loop_td(cfg.td_kind, cfg.td_params, cfg.reference, cfg.noise, cfg.horizon,
                                cfg.integrator, cfg.initial_td1, cfg.controller_dt)
    return run_closed_loop(cfg)


_STEP = ReferenceSpec(kind="step", amplitude=0.1, start_time=0.0)
_NOISE = NoiseSpec(distribution="uniform", half_range=0.001, sample_period=0.001, seed=0)

PRESETS: dict[str, ScenarioConfig] = {
    "case1_han": ScenarioConfig(td_kind="han", han_td_params=DEFAULT_HAN, reference=_STEP),
    "case1_intd": ScenarioConfig(td_kind="intd", intd_params=DEFAULT_INTD, reference=_STEP),
    "case2_han": ScenarioConfig(td_kind="han", han_td_params=DEFAULT_HAN, reference=_STEP, noise=_NOISE),
    "case2_intd": ScenarioConfig(td_kind="intd", intd_params=DEFAULT_INTD, reference=_STEP, noise=_NOISE),
    "open_step_intd": ScenarioConfig(td_kind="intd", mode="open_loop", intd_params=DEFAULT_INTD, reference=_STEP),
    "open_step_han": ScenarioConfig(td_kind="han", mode="open_loop", han_td_params=DEFAULT_HAN, reference=_STEP),
}


def preset(name: str, **changes) -> ScenarioConfig:
    """A shipped preset, optionally with fields replaced."""
    try:
        cfg = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; valid presets: {', '.join(PRESETS)}") from None
    return dataclasses.replace(cfg, **changes) if changes else cfg
