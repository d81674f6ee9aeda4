"""
Which-way marking in a Young interferometer
===========================================

A photon's path is marked by rotating its polarization in opposite
directions behind the two apertures. The screen measures interference
(sigma_X) and a linear polarizer reads the path (sigma_Z) through the
marking. Simulating the full 4-dimensional path times polarization space
reproduces the closed-form noise factors
``gx = cos theta``, ``gz = cos phi sin theta``, ``gxz = sin phi sin theta``.
"""

import numpy as np

from complab import YoungSetting, full_quantum_joint, gammas_from_angles, joint_statistics, young_inequality
from complab.young import nonclassicality_factor

s = [0.0, 0.9, 0.0]
print(" theta    phi      gx      gz     gxz   factor  max dev   verdict")
for theta in np.linspace(0, np.pi / 2, 4)[1:]:
    for phi in np.linspace(0, np.pi / 2, 4)[1:]:
        y = YoungSetting(theta, phi)
        m = gammas_from_angles(y)
        dev = np.abs(full_quantum_joint(s, y).table - joint_statistics(s, m).table).max()
        print(
            f"{theta:6.3f} {phi:6.3f} {m.gamma_x:7.4f} {m.gamma_z:7.4f} {m.gamma_xz:7.4f}"
            f" {nonclassicality_factor(y):8.4f} {dev:8.1e}   {young_inequality(s, y).verdict}"
        )

# Strong marking and a polarizer turned toward the circular basis expose the
# coherence: the factor cos(theta)/tan(phi) falls below |s_Y| = 0.9.
