"""Almost-periodic structure of a three-interface medium, and layer stripping.

The reflection coefficient of a step medium is a sum of exponentials whose
frequencies are twice the path lengths of multiply reflected waves. The
lowest one belongs to the first interface, which is what layer stripping
peels off, once from the closed-form series and once from band-limited
samples of R.
"""

import numpy as np

from layerscatter.inverse import layer_strip
from layerscatter.media import Interval, StepMedium
from layerscatter.moebius import step_reflection
from layerscatter.specfun import ap_series

medium = StepMedium.from_reflectivities(Interval(0, 3), (0.7, 1.2, 2.1), [0.3, -0.4, 0.25])
om = np.linspace(-30, 30, 1201)
R = step_reflection(medium, om)

print("lowest almost-periodic terms (lambda, coefficient):")
for lam, c in ap_series(medium, lambda_max=4.0).terms[:6]:
    print(f"  {lam:7.3f}  {c.real:+.6f}")

for lmax in (5, 10, 20, 30):
    gap = np.linalg.norm(ap_series(medium, lambda_max=lmax)(om) - R) / np.linalg.norm(R)
    print(f"lambda_max {lmax:>2}: relative l2 gap to R {gap:.2e}")

exact = layer_strip(medium)
numeric = layer_strip(lambda w, xi: step_reflection(medium, w), x0=0.0, band=200.0,
                      lambda_max=5.0)
print("true jumps     ", medium.jumps, medium.reflectivities)
print("exact strip    ", exact.jumps, exact.reflectivities)
print("numeric strip  ", tuple(np.round(numeric.jumps, 8)), np.round(numeric.reflectivities, 8))
