#!/usr/bin/env python3
"""The closed forms against a brute-force density-matrix simulation.

Evolves the cat with the time-local master equation, restarting the
reservoir clock after every interval. With a nonselective energy
measurement at each restart (measured) the result is diagonal; without it
(shuttered) coherences survive, yet the populations agree. The closed-form
P_n and the characteristic function are then compared with the simulation.
"""

import numpy as np

from zenocat import CatState, EvolutionKernels, HighTemperature, ReservoirSpec, measured_rates
from zenocat.dynamics import ShutterSchedule, pn_distribution, recursive_qcf
from zenocat.oracle import (PropagationConfig, StepMonitor, fock_qcf, propagate_measured,
                            propagate_shuttered)
from zenocat.states import cat_density_matrix

cat = CatState(2.0)
n_max = 40
spec = ReservoirSpec.from_ratio(10.0, 1e-2, HighTemperature(100.0))
tau = 0.1 / spec.r
m = 5

rho0 = cat_density_matrix(cat, n_max)
cfg = PropagationConfig(n_max=n_max)
mon = StepMonitor()
meas = propagate_measured(rho0, m, tau, spec, cfg, mon)
shut = propagate_shuttered(rho0, m, tau, spec, cfg, mon)

off = lambda rho: np.max(np.abs(rho.entries - np.diag(np.diag(rho.entries))))
print(f"{mon.steps} RK4 steps, trace drift {mon.trace_error:.1e}, "
      f"smallest eigenvalue {mon.min_eigenvalue:.1e}")
print(f"largest coherence: measured {off(meas):.1e}, shuttered {off(shut):.3f}")
print(f"populations differ by {np.max(np.abs(meas.diagonal().probs - shut.diagonal().probs)):.1e}")

rs = measured_rates(tau, spec, shutter=True)
closed = pn_distribution(m * tau, EvolutionKernels.from_rates(rs), cat, n_max)
print(f"closed-form P_n vs simulation: {np.max(np.abs(closed.probs - meas.diagonal().probs)):.1e}")

sched = ShutterSchedule(tau, m)
for xi in (0.5 + 0.2j, 1.0 - 0.7j, 4.0 + 0.1j):
    a = recursive_qcf(xi, sched, cat, integrals=(rs.big_gamma_tau, rs.delta_gamma_tau))
    b = fock_qcf(shut, xi)
    print(f"chi({xi}) closed {complex(a):.6f}  simulated {complex(b):.6f}")
