"""Frequency response of the linearized tracking differentiator.

Near equilibrium the derivative channel behaves like a band-limited
differentiator: +20 dB/dec below omega_n and -20 dB/dec above it. The time
domain check drives the full nonlinear system with a slow sinusoid and reads
off the steady amplitude of z2.
"""

import math

import numpy as np

from intdpid import DEFAULT_INTD, ReferenceSpec, run_open_loop_td
from intdpid.analysis import bode_magnitude_db, bode_slope, second_order_char

p = DEFAULT_INTD
char = second_order_char(p)
print(f"omega_n = {char.omega_n:.4f} rad/s, xi = {char.xi:.4f}")

wn = char.omega_n
for lo, hi, label in ((wn / 1000, wn / 100, "low band"), (10 * wn, 1000 * wn, "high band")):
    w = np.logspace(math.log10(lo), math.log10(hi), 50)
    print(f"{label}: {bode_slope(w, bode_magnitude_db(w, p)):+.3f} dB/dec")

w = wn / 100
period = 2 * math.pi / w
res = run_open_loop_td("intd", p, ReferenceSpec("sine", 1.0, frequency=w), horizon=4 * period, output_dt=0.01)
z2 = res["z2"].values[res.t > 3 * period]
print(f"|Z2/V| at omega_n/100: simulated {0.5 * (z2.max() - z2.min()):.6g}, "
      f"analytic {10 ** (bode_magnitude_db(w, p) / 20):.6g}")
