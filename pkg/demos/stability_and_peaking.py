"""Arrival, Lyapunov decay and peaking.

Far from the target the tanh term saturates and the state follows a closed
form trajectory. Closer in, the energy-like function V decreases along every
solution. A small damping ratio makes the derivative estimate overshoot.
"""

import numpy as np

from intdpid import DEFAULT_INTD, IntdParams, ReferenceSpec, run_open_loop_td
from intdpid.analysis import arrival_solution, lyapunov_value, overshoot, second_order_char
from intdpid.differentiators import intd_deriv
from intdpid.simcore import IntegratorConfig, OdeSystem, integrate

tight = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-12, max_dt=1e-3)

R = 26.5005
sat_field = OdeSystem(2, lambda t, z: np.array((z[1], -R * z[1] - R * R)))
ts = integrate(sat_field, [5.0, 0.0], (0.0, 5 / R), tight, 1e-3 / R)
exact = np.array([arrival_solution(t, (5.0, 0.0), R) for t in ts.t])
print(f"arrival phase: max deviation from closed form {np.abs(ts.values - exact).max():.2e}")

p = DEFAULT_INTD
field = OdeSystem(2, lambda t, z: np.array(intd_deriv(z, 0.0, p)))
for horizon in (20 / p.R, 40 / p.R):
    ts = integrate(field, [-10.0, 10.0], (0.0, horizon), tight, horizon / 2000)
    V = lyapunov_value(ts.values.T, p)
    print(f"V from (-10, 10): largest step increase {np.diff(V).max():.1e}, V({horizon:.3f}s) = {V[-1]:.2e}")

lightly_damped = IntdParams(alpha=p.alpha, beta=100.0, gamma=0.5, R=10.0)
res = run_open_loop_td("intd", lightly_damped, ReferenceSpec("ramp", 0.1), horizon=5.0)
print(f"xi = {second_order_char(lightly_damped).xi:.3f}: derivative overshoot "
      f"{overshoot(res.extras['vdot_hat'], 0.1):.0%} on a 0.1 m/s ramp")
