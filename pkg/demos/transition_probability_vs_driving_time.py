#!/usr/bin/env python3
"""How likely is the drive to flip the qubit between energy levels?

The expansion stroke rotates the in-plane field from x to y while the
level spacing ramps up.  Driving fast (small tau) leaves no time to
follow the levels, so transitions are common; driving slowly the
evolution is adiabatic and the transition probability dies out.

The constant z-axis field (strength ratio g) changes this picture in
a useful way: over a window of moderate driving times a finite g
*raises* the transition probability above the zero-field curve, which
is where the efficiency gain of the engine comes from.  This script
tabulates xi(tau) for a few g values and locates that window.

Run:  python demos/transition_probability_vs_driving_time.py
Writes transition_probability.csv (and .png if matplotlib is around).
"""

import numpy as np

from qotto import EngineParams, propagator_lab, transition_probability
from qotto.sweep import SweepSpec, emit_csv, run_sweep

TAUS_US = np.linspace(50.0, 400.0, 71)
G_VALUES = (0.0, 0.01, 0.2, 0.5)
N_STEPS = 8000

curves = {}
for g in G_VALUES:
    base = EngineParams.from_lab(2.0, 3.6, 100.0, g, 0.261, 0.99)
    spec = SweepSpec(base=base, axis="tau", grid=tuple(TAUS_US),
                     outputs=("xi",), resolution=N_STEPS)
    records = run_sweep(spec)
    curves[g] = np.array([r.values["xi"] for r in records])
    emit_csv(records, f"transition_probability_g{g}.csv")

print(f"{'tau_us':>8} " + " ".join(f"xi(g={g:g})".rjust(12)
                                   for g in G_VALUES))
for i in range(0, len(TAUS_US), 7):
    row = " ".join(f"{curves[g][i]:12.5f}" for g in G_VALUES)
    print(f"{TAUS_US[i]:8.0f} {row}")

# where does the z field beat the bare drive?
for g in G_VALUES[1:]:
    better = TAUS_US[curves[g] > curves[0.0]]
    if better.size:
        print(f"g={g:g} beats g=0 for tau in "
              f"[{better.min():.0f}, {better.max():.0f}] us "
              f"({better.size} of {TAUS_US.size} grid points)")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for g in G_VALUES:
        style = "-" if g == 0.0 else "--"
        ax.plot(TAUS_US, curves[g], style, label=f"g = {g:g}")
    ax.set_xlabel(r"driving time $\tau$ ($\mu$s)")
    ax.set_ylabel(r"transition probability $\xi$")
    ax.legend()
    fig.tight_layout()
    fig.savefig("transition_probability.png", dpi=150)
    print("wrote transition_probability.png")
except ImportError:
    pass
