#!/usr/bin/env python3
"""Decay of the interference fringe of an even cat (alpha = 2).

Prints the normalized Wigner peak for the Markovian reference and three
shutter intervals, for both reservoir regimes, on a Gamma t axis. Passing
``--svg DIR`` writes one chart per regime.
"""

import argparse
import os

import numpy as np

from zenocat import CatState, EvolutionKernels, HighTemperature, ReservoirSpec, measured_rates
from zenocat.dynamics import log_wigner_peak
from zenocat.svg import line_chart

ap = argparse.ArgumentParser()
ap.add_argument("--svg", metavar="DIR")
args = ap.parse_args()

cat = CatState(2.0)
gt = np.linspace(0.0, 0.005, 11)

for r in (10.0, 0.1):
    spec = ReservoirSpec.from_ratio(r, 0.1, HighTemperature(100.0))
    t = gt / spec.big_gamma
    curves = [("Markov", EvolutionKernels.markov(spec))]
    for x in (1.0, 0.1, 0.01):
        curves.append((f"wct={x:g}", EvolutionKernels.from_rates(measured_rates(x / r, spec))))

    print(f"r = {r:g}")
    print("  Gamma t  " + "".join(f"{name:>12}" for name, _ in curves))
    table = []
    for name, k in curves:
        lp = log_wigner_peak(t, k, cat)
        table.append(np.exp(lp - lp[0]))
    for i, g in enumerate(gt):
        print(f"  {g:7.4f}  " + "".join(f"{col[i]:12.4f}" for col in table))
    print()

    if args.svg:
        os.makedirs(args.svg, exist_ok=True)
        series = [(name, list(gt), list(col)) for (name, _), col in zip(curves, table)]
        with open(os.path.join(args.svg, f"peak_r{r:g}.svg"), "w") as fh:
            fh.write(line_chart(series, f"Wigner peak, r={r:g}", "Gamma t", "normalized peak",
                                ylim=(0.0, 1.0)))
