"""The bounding-box family on a single hand-made fix.

Four anchors sit on the corners of a 10 m square and the target is at
(3, 4). We give the ranges a bit of positive bias, the way time-of-flight
ranging behaves indoors, and compare Min-Max with its weighted variants.
"""

import math

import numpy as np

from lateration import (ObservationSet, TriangularMF, e_min_max, intersection_region,
                        md_min_max, min_max)

anchors = np.array([[0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [0.0, 10.0]])
truth = np.array([3.0, 4.0])
bias = np.array([0.4, 0.9, 0.2, 1.6])  # one reflected path on the last anchor
ranges = np.hypot(*(anchors - truth).T) + bias
obs = ObservationSet.from_arrays(anchors, ranges)

# Every anchor defines a square of half-width r around itself; the
# intersection of the squares is the box the whole family works from.
ir = intersection_region(obs)
print(f"intersection region x [{ir.l:.2f}, {ir.r:.2f}]  y [{ir.b:.2f}, {ir.t:.2f}]")
for v in ir.vertices():
    print(f"  vertex ({v.x:.2f}, {v.y:.2f})")

# Min-Max takes the centre. E-Min-Max weights each vertex by how well it
# explains the ranges. MD-Min-Max feeds the residual of every
# (anchor, vertex) pair through a triangular membership function built
# from the expected error distribution: mostly positive, up to a few meters.
mf = TriangularMF(-0.5, 0.6, 2.5)
estimates = {
    "Min-Max": min_max(obs),
    "E-Min-Max (W2)": e_min_max(obs, "W2"),
    "E-Min-Max (W4)": e_min_max(obs, "W4"),
    "MD-Min-Max": md_min_max(obs, mf),
}
for name, est in estimates.items():
    err = math.hypot(est.x - truth[0], est.y - truth[1])
    print(f"{name:<15} ({est.x:5.2f}, {est.y:5.2f})  error {err:.2f} m  [{est.status.value}]")

# If no vertex is within the MF support of any anchor, MD-Min-Max has
# nothing to go on and says so instead of inventing weights.
far = md_min_max(obs, TriangularMF(20, 21, 22))
print(f"MD-Min-Max with an unrelated MF: ({far.x:.2f}, {far.y:.2f}) [{far.status.value}]")
