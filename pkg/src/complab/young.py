"""
Young interferometer with polarization path marking.

The path qubit (``|+>``, ``|->`` = sigma_Z eigenvectors) is coupled to the
photon polarization by a phase plate on each aperture. Right-circular input
``|R>`` leaves aperture ``+-`` as ``|+-theta> = cos(theta/2)|R> +- sin(theta/2)|L>``.
The screen measures sigma_X on the path qubit and a linear polarizer at
angle ``phi`` measures ``Sigma_phi = cos(phi) Sigma_X - sin(phi) Sigma_Y``.

Polarization basis ordering is ``(|R>, |L>)`` with Sigma_Z diagonal, and the
composite space is ``path (x) polarization``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classical import InequalityReport, inequality_report
from .measurement import MeasurementModel
from .qubit import E_Y, SIGMA_X, SIGMA_Y, as_state, bloch_to_density
from .tables import OUTCOMES, JointDistribution

ANGLE_TOL = 1e-12

CIRCULAR_R = np.array([1.0, 0.0], dtype=complex)


@dataclass(frozen=True)
class YoungSetting:
    """Phase-plate strength ``theta`` and polarizer angle ``phi`` (radians).

    Both angles are restricted to ``[0, pi/2]`` unless ``extended`` is set.
    """

    theta: float
    phi: float
    extended: bool = False

    def __post_init__(self):
        for name in ("theta", "phi"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite")
            if not self.extended and not -ANGLE_TOL <= v <= np.pi / 2 + ANGLE_TOL:
                raise ValueError(f"{name} = {v!r} outside [0, pi/2]; pass extended=True")
            object.__setattr__(self, name, v)


def gammas_from_angles(y: YoungSetting) -> MeasurementModel:
    """``gx = cos theta``, ``gz = cos phi sin theta``, ``gxz = sin phi sin theta``, ``n = e_Y``."""
    st = np.sin(y.theta)
    return MeasurementModel(
        np.cos(y.theta), np.cos(y.phi) * st, np.sin(y.phi) * st, n=E_Y
    )


def nonclassicality_factor(y: YoungSetting) -> float:
    """``gx gz / gxz = cos(theta) / tan(phi)``.

    Raises
    ------
    ValueError
        At ``phi = 0`` the correlation channel is closed and no state violates.
    """
    if y.phi == 0:
        raise ValueError("correlation channel closed (phi = 0): factor infinite, no violation possible")
    return float(np.cos(y.theta) / np.tan(y.phi))


def marking_rotation(theta: float, path: int) -> np.ndarray:
    """Polarization rotation applied on aperture ``path`` (+1 or -1).

    First column is ``|path*theta>``; the second completes it to a real rotation.
    """
    c, s = np.cos(theta / 2), path * np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def marking_unitary(theta: float) -> np.ndarray:
    """Path-controlled ``V_+ (+) V_-`` on ``path (x) polarization``."""
    u = np.zeros((4, 4), dtype=complex)
    u[:2, :2] = marking_rotation(theta, +1)
    u[2:, 2:] = marking_rotation(theta, -1)
    return u


def sigma_phi(phi: float) -> np.ndarray:
    return np.cos(phi) * SIGMA_X - np.sin(phi) * SIGMA_Y


def polarizer_states(phi: float) -> dict[int, np.ndarray]:
    """Eigenvectors ``|z>_phi`` of ``Sigma_phi``, first component real positive."""
    # Sigma_phi = [[0, e^{i phi}], [e^{-i phi}, 0]]
    return {z: np.array([1.0, z * np.exp(-1j * phi)]) / np.sqrt(2) for z in OUTCOMES}


def screen_states() -> dict[int, np.ndarray]:
    """Eigenvectors ``|x>`` of sigma_X on the path qubit."""
    return {x: np.array([1.0, x], dtype=complex) / np.sqrt(2) for x in OUTCOMES}


def measurement_projectors(phi: float) -> np.ndarray:
    """Rank-1 projectors on ``|x> (x) |z>_phi`` as ``P[i, j]`` (4x4 each)."""
    screen, pol = screen_states(), polarizer_states(phi)
    v = np.array([[np.kron(screen[x], pol[z]) for z in OUTCOMES] for x in OUTCOMES])
    return np.einsum("ija,ijb->ijab", v, v.conj())


def full_quantum_joint(s, y: YoungSetting) -> JointDistribution:
    """Joint screen/polarizer statistics from the 4-dimensional simulation."""
    rho = np.kron(bloch_to_density(s), np.outer(CIRCULAR_R, CIRCULAR_R.conj()))
    u = marking_unitary(y.theta)
    out = u @ rho @ u.conj().T
    probs = np.einsum("ijab,ba->ij", measurement_projectors(y.phi), out).real
    return JointDistribution(probs)


def correlation_ratio(y: YoungSetting) -> float:
    """``gxz / (gx gz) = tan(phi) / cos(theta)`` with the common ``sin(theta)`` cancelled."""
    return float(np.tan(y.phi) / np.cos(y.theta))


def young_inequality(s, y: YoungSetting) -> InequalityReport:
    """State-form inequality for the interferometer.

    Uses the cancelled ratio, so rows with ``theta = 0`` (where ``gz`` and
    ``gxz`` both vanish) get the ``theta -> 0+`` value instead of ``0/0``.
    """
    v = as_state(s).s
    return inequality_report(float(v[0]), float(v[2]), correlation_ratio(y) * float(v[1]))
