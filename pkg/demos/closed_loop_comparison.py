"""Closed-loop step tracking on the nonlinear mass-spring-damper.

Both differentiators drive the same fal-based PID. The first pair of runs is
noise-free; the second adds uniform measurement noise of +-1 mm on the plant
output, which is where the tanh-saturated differentiator should pull ahead.
"""

from dataclasses import replace

from intdpid import preset, run


def show(title, han, intd):
    print(title)
    print(f"  {'index':6s}{'Han':>12s}{'INTD':>12s}")
    for name in han.metrics.NAMES:
        print(f"  {name.upper():6s}{getattr(han.metrics, name):12.6f}{getattr(intd.metrics, name):12.6f}")


show("noise-free step, 0.1 m", run(preset("case1_han")), run(preset("case1_intd")))

# the noise stream is keyed on the seed, so both loops see identical samples
noise = replace(preset("case2_intd").noise, seed=7)
show("noisy step, seed 7", run(preset("case2_han", noise=noise)), run(preset("case2_intd", noise=noise)))
