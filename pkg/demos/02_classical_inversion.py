"""
Looking for a classical explanation
===================================

Suppose the noisy outcomes came from sharp hidden values ``(x', z')`` read
through independent noisy channels. The hidden distribution is then fixed
by the data. Inverting the channels gives the same table, and the data are
classical exactly when that table is nonnegative.
"""

import numpy as np

from complab import (
    MeasurementModel,
    compact_inequality,
    equivalence_check,
    inequality_family,
    joint_statistics,
    moments,
    reconstruct_p_lambda,
)

gx = gz = 0.3
m = MeasurementModel(gx, gz, np.sqrt(1 - 2 * 0.3**2))

for label, s in [("mixed", [0.0, 0.0, 0.0]), ("coherent", [0.0, 0.9, 0.0])]:
    d = joint_statistics(s, m)
    t = moments(d)
    p = reconstruct_p_lambda(t, gx, gz)
    eq = equivalence_check(d, gx, gz)
    print(f"--- {label} state {s}")
    print("hidden table from moments:\n", p.table)
    print("same via inverse channels, max difference:", eq.max_abs_difference)
    print("four conditions 4 p(x', z'):", np.round(inequality_family(t, gx, gz), 6))
    r = compact_inequality(t, gx, gz)
    print(f"margins upper={r.margin_upper:+.4f} lower={r.margin_lower:+.4f} -> {r.verdict}")
