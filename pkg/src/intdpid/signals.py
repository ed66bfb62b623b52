"""Reference inputs and sample-and-hold measurement noise."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ReferenceSpec", "NoiseSpec", "reference_value", "reference_rate", "noise_sample", "NOISE_ALGORITHM"]

REFERENCE_KINDS = ("step", "sine", "ramp")
NOISE_DISTRIBUTIONS = ("uniform", "none")

# recorded verbatim in scenario provenance so a run can be replayed elsewhere
NOISE_ALGORITHM = "numpy Philox4x64-10, key=seed, counter=slot index, first double of the block"


@dataclass(frozen=True)
class ReferenceSpec:
    """Reference signal v(t).

    ``kind`` is one of ``step``, ``sine`` or ``ramp``. For a ramp the
    amplitude is the slope (units per second) after ``start_time``.
    """

    kind: str = "step"
    amplitude: float = 0.1
    frequency: float = 1.0
    start_time: float = 0.0

    def __post_init__(self):
        if self.kind not in REFERENCE_KINDS:
            raise ValueError(f"kind: expected one of {REFERENCE_KINDS}, got {self.kind!r}")
        if not math.isfinite(self.amplitude):
            raise ValueError("amplitude: must be finite")
        if self.kind == "sine" and not self.frequency > 0:
            raise ValueError("frequency: must be > 0 for a sine reference")
        if not self.start_time >= 0:
            raise ValueError("start_time: must be >= 0")


@dataclass(frozen=True)
class NoiseSpec:
    """Zero-order-held noise, one independent draw per ``sample_period`` slot."""

    distribution: str = "none"
    half_range: float = 0.0
    sample_period: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.distribution not in NOISE_DISTRIBUTIONS:
            raise ValueError(f"distribution: expected one of {NOISE_DISTRIBUTIONS}, got {self.distribution!r}")
        if not self.half_range >= 0:
            raise ValueError("half_range: must be >= 0")
        if not self.sample_period > 0:
            raise ValueError("sample_period: must be > 0")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError("seed: must be an unsigned integer")

    @property
    def active(self) -> bool:
        return self.distribution != "none" and self.half_range > 0


def reference_value(spec: ReferenceSpec, t: float) -> float:
    """Value of the reference at time ``t`` (the step is active at ``start_time``)."""
    if spec.kind == "sine":
        if t < spec.start_time:
            return 0.0
        return spec.amplitude * math.sin(spec.frequency * (t - spec.start_time))
    if t < spec.start_time:
        return 0.0
    if spec.kind == "step":
        return spec.amplitude
    return spec.amplitude * (t - spec.start_time)


def reference_rate(spec: ReferenceSpec, t: float) -> float:
    """Time derivative of the reference, ignoring the impulse at a step edge."""
    if t < spec.start_time:
        return 0.0
    if spec.kind == "sine":
        return spec.amplitude * spec.frequency * math.cos(spec.frequency * (t - spec.start_time))
    if spec.kind == "ramp":
        return spec.amplitude
    return 0.0


def _slot(spec: NoiseSpec, t: float) -> int:
    # guard against t = k*T landing a hair below the slot edge
    return int(math.floor(t / spec.sample_period + 1e-9))


def noise_sample(spec: NoiseSpec, t: float) -> float:
    """Held noise value for the slot containing ``t``.

    The value depends only on ``(seed, slot)``, so any solver step sequence
    sees the same waveform.
    """
    if not spec.active:
        return 0.0
    bitgen = np.random.Philox(key=int(spec.seed), counter=_slot(spec, t))
    u = np.random.Generator(bitgen).random()
    return spec.half_range * (2.0 * u - 1.0)
