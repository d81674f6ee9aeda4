"""
Noisy joint measurement of two incompatible observables
=======================================================

sigma_X and sigma_Z cannot be measured sharply at once, but a noisy joint
measurement can. Its POVM is fixed by three noise factors; positivity of
the POVM decides which triples are physically allowed.
"""

import numpy as np

from complab import MeasurementModel, joint_statistics, moments, povm_positivity

# A state with some coherence in every direction.
s = np.array([0.4, 0.6, 0.3])

# Equal unsharpness on both observables, plus a correlation term along sigma_Y.
m = MeasurementModel(0.5, 0.5, 0.5)
d = joint_statistics(s, m)
print("observed table p(x, z), rows x = +1, -1:")
print(d.table)
print("moments:", moments(d).as_tuple())

# Positivity of the POVM elements. The worst eigenvalue is (1 - |v|) / 4
# where v collects the three weighted directions.
for g in [(0.5, 0.5, 0.5), (0.6, 0.6, 0.6), (1 / np.sqrt(2), 1 / np.sqrt(2), 0.0)]:
    r = povm_positivity(MeasurementModel(*g))
    print(f"gammas {np.round(g, 4)}: admissible={r.admissible}, worst eigenvalue {r.worst_eigenvalue:+.4f}")

# Sharp sigma_X alone is fine; it simply leaves nothing for sigma_Z.
print(povm_positivity(MeasurementModel(1.0, 0.0, 0.0)))
