"""
What an experiment would see
============================

Real data are finite. Sampling the ideal table and propagating binomial
errors shows how many detections are needed before a violation is beyond
doubt.
"""

import numpy as np

from complab import MeasurementModel, estimate, joint_statistics, sample

s = [0.0, 0.3, 0.0]
m = MeasurementModel(0.3, 0.3, np.sqrt(0.82))
d = joint_statistics(s, m)

print("     N    margin_upper     error     z   confident")
for N in [10, 100, 1_000, 10_000, 100_000]:
    r = estimate(sample(d, N, seed=2024), m.gammas)
    print(f"{N:6d} {r.margin_upper:+14.4f} {r.margin_errors[0]:9.4f} {r.z_scores[0]:6.1f}   {r.verdict_confident}")
