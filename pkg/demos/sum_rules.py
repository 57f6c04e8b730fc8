"""Szego sum rule, singular trace and the classical trace bound.

    python3 demos/sum_rules.py
"""

import numpy as np

from layerscatter.forward import spectrum
from layerscatter.media import ImpedanceProfile, Interval, StepMedium
from layerscatter.moebius import step_reflection
from layerscatter.opuc import szego_sum
from layerscatter.specfun import classical_trace_check, singular_trace

rng = np.random.default_rng(5)
for n in (5, 20, 50):
    r = rng.uniform(-0.9, 0.9, n)
    lhs, rhs = szego_sum(r, 0.5)
    print(f"Szego, {n:>2} reflectivities: {lhs:.12f} vs {rhs:.12f}")

r = np.array([0.3, -0.4])
m = StepMedium.from_reflectivities(Interval(0, 3), (1.0, 2.3), r)
target = -np.sum(np.log(1 - r * r))
for band in (10.0, 100.0, 1000.0):
    om = np.linspace(-band, band, int(400 * band) + 1)
    val, _ = singular_trace(om, step_reflection(m, om))
    print(f"singular trace over (-{band:g}, {band:g}): {val:.6f}  (limit {target:.6f})")

chirp = ImpedanceProfile.chirp()
om = np.linspace(-60, 60, 6001)
x = np.linspace(0, 30, 300001)
lhs, rhs = classical_trace_check(om, spectrum(chirp, om, n=8000), x, chirp.alpha(x))
print(f"classical trace on the chirp: {lhs:.6f} <= {rhs:.6f}")
