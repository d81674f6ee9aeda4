"""
A detector-centric view
=======================

Any qubit state is described without negative numbers by its overlaps with
four coherent states along tetrahedron directions. The measurement becomes
a 16-entry kernel acting on that table. Its positivity, factorization and
invertibility are all checked by brute force here.
"""

import numpy as np

from complab import detector_kernel, kernel_factorization, kernel_positivity, q_like_distribution
from complab.detector import SQRT3, inverted_kernel, povm_factorized_region, region_boundary
from complab import MeasurementModel, joint_statistics

s = [0.2, 0.5, 0.3]
g = (0.4, 0.3, 0.5)
q = q_like_distribution(s)
print("Q-like table (sums to 1):\n", q.table)
print("kernel reproduces the observed table:",
      np.allclose(detector_kernel(g).apply(q), joint_statistics(s, MeasurementModel(*g)).table))

for g in [(1 / 3, 1 / 3, 1 / 3), (1, 0.1, 0.1), (1 / SQRT3, 1 / SQRT3, 0.0)]:
    r = kernel_positivity(g)
    print(f"kernel {np.round(g, 4)}: positive={r.positive}, min entry {r.min_entry:+.4f}")

c = 1 / SQRT3
print("corner factorizes:", kernel_factorization((c, c, c)).factorizes)

# The factorized square gx, gz <= 1/sqrt(3) sits inside the POVM region and
# touches its boundary at the corner.
scan = povm_factorized_region(101)
print("square inside region:", not np.any(scan.in_positive_square & ~scan.in_povm_region))
print("boundary at gx = 1/sqrt(3):", region_boundary(c))

# Undoing the noise never yields a valid kernel.
k = inverted_kernel((0.5, 0.5, 0.1))
print(f"inverted kernel: need 1 >= {k.scaled_ratio:.3f} >= {k.lower_bound:.3f}; min entry {k.min_entry:+.4f}")
