"""From reference measurements to a membership function and error models.

A calibration run pairs measured ranges with ranges from a reference
system. Everything downstream is fitted from the errors r - r_ref.
"""

import numpy as np

from lateration import calibrate
from lateration.traces import BUILDING_GAMMA, synthesize_calibration

samples = synthesize_calibration(20_000, seed=3, model=BUILDING_GAMMA)
cal = calibrate(samples)

mf = cal.mf
print(f"membership function: low {mf.low:.2f}  median {mf.median:.2f}  up {mf.up:.2f}")
print(f"normal fit: mu {cal.normal.mu:.2f}  sigma {cal.normal.sigma:.2f}")
print(f"gamma fit: alpha {cal.gamma.alpha:.2f}  beta {cal.gamma.beta:.2f}  "
      f"location {cal.gamma.location:.2f}")
print(f"(generator: alpha {BUILDING_GAMMA.alpha}  beta {BUILDING_GAMMA.beta}  "
      f"location {BUILDING_GAMMA.location})")

s = cal.stats
print(f"MAE {s.mean_abs_error:.2f}  RMSE {s.rmse:.2f}  skewness {s.skewness:.2f}")
print(f"correlation of |error| with distance: {s.correlation_error_vs_distance:+.3f}")

# A quick look at the shape the triangle is meant to approximate.
errors = np.array([x.error for x in samples])
counts, edges = np.histogram(errors, bins=16)
for c, lo in zip(counts, edges):
    print(f"{lo:6.1f} | {'#' * int(60 * c / counts.max())}")
