"""
Every state except the identity can be caught
=============================================

For any Bloch vector ``s != 0`` there is an admissible joint measurement
whose statistics admit no classical model. Pick the measured axes
orthogonal to ``s`` and the correlation axis along it; violation needs
``gx gz / gxz < |s|``, and a POVM on the unit sphere reaches ``|s| / 2``.
"""

import numpy as np

from complab import nonclassicality_factor, povm_positivity, state_form_inequality, violation_search

for norm in [1.0, 0.5, 0.1, 0.01]:
    s = norm * np.array([1.0, -2.0, 2.0]) / 3
    m = violation_search(s)
    r = state_form_inequality(s, m)
    print(
        f"|s| = {norm:<5} gammas = {np.round(m.gammas, 5)}  factor = {nonclassicality_factor(m):.5f}"
        f"  worst POVM eigenvalue = {povm_positivity(m).worst_eigenvalue:+.1e}  -> {r.verdict}"
    )

try:
    violation_search([0, 0, 0])
except ValueError as exc:
    print("s = 0:", exc)
