#!/usr/bin/env python3
"""Photon-number snapshots of the decaying cat.

The even cat only populates even Fock states. Reservoir noise fills in the
odd ones; the parity contrast sum_even P_n - sum_odd P_n tracks how much of
the superposition survives. Compare no shutter with frequent interruptions
(omega_c tau = 0.01) in the two reservoir regimes.
"""

import numpy as np

from zenocat import CatState, EvolutionKernels, HighTemperature, ReservoirSpec, measured_rates
from zenocat.dynamics import pn_distribution

cat = CatState(2.0)
snapshots = (0.0, 0.0005, 0.002, 0.01)  # Gamma t
n_max = 60

rows = []
ref = ReservoirSpec.from_ratio(10.0, 0.1, HighTemperature(100.0))
rows.append(("no shutter", ref, EvolutionKernels.markov(ref)))
for r in (10.0, 0.1):
    spec = ReservoirSpec.from_ratio(r, 0.1, HighTemperature(100.0))
    rows.append((f"r={r:g}, wct=0.01", spec, EvolutionKernels.from_rates(measured_rates(0.01 / r, spec))))

for label, spec, k in rows:
    print(label)
    for g in snapshots:
        p = pn_distribution(g / spec.big_gamma, k, cat, n_max)
        head = " ".join(f"{v:.3f}" for v in p.probs[:9])
        print(f"  Gamma t={g:<7g} C={p.parity_contrast():.4f} <n>={p.mean():6.3f}  P_0..8: {head}")
    print()
