"""
Two-level state algebra: Bloch vectors, density matrices and Pauli expectations.

Pauli convention used throughout the package::

    sigma_X = [[0, 1], [1, 0]]
    sigma_Y = [[0, -1j], [1j, 0]]
    sigma_Z = [[1, 0], [0, -1]]

Bloch vectors are ordered ``(s_X, s_Y, s_Z)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

E_X = np.array([1.0, 0.0, 0.0])
E_Y = np.array([0.0, 1.0, 0.0])
E_Z = np.array([0.0, 0.0, 1.0])

STATE_TOL = 1e-9
UNIT_TOL = 1e-12
HERMITIAN_TOL = 1e-10


class UnphysicalStateError(ValueError):
    pass


@dataclass(frozen=True)
class BlochState:
    """Qubit state ``rho = (1 + s.sigma) / 2`` given by its Bloch vector."""

    s: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float).reshape(-1)
        if s.shape != (3,) or not np.all(np.isfinite(s)):
            raise ValueError(f"Bloch vector must be 3 finite reals, got {self.s!r}")
        if np.linalg.norm(s) > 1 + STATE_TOL:
            raise UnphysicalStateError(
                f"unphysical state: |s| = {np.linalg.norm(s):.12g} > 1"
            )
        s.flags.writeable = False
        object.__setattr__(self, "s", s)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.s))

    @property
    def is_pure(self) -> bool:
        return abs(self.norm - 1.0) <= STATE_TOL

    def component(self, axis) -> float:
        """Projection ``s . axis``."""
        return float(self.s @ np.asarray(axis, dtype=float))

    def to_list(self) -> list[float]:
        return [float(v) for v in self.s]


def as_state(s) -> BlochState:
    return s if isinstance(s, BlochState) else BlochState(s)


def unit_vector(n, tol: float = UNIT_TOL) -> np.ndarray:
    """Validate a real unit 3-vector (a measurement direction)."""
    v = np.asarray(n, dtype=float).reshape(-1)
    if v.shape != (3,):
        raise ValueError(f"direction must be a real 3-vector, got {n!r}")
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise ValueError(f"direction must have unit length, |n| = {np.linalg.norm(v)!r}")
    return v


def pauli_along(n) -> np.ndarray:
    """``sigma_n = n . sigma`` for a real 3-vector ``n``."""
    return np.tensordot(np.asarray(n, dtype=float), PAULIS, axes=1)


def bloch_to_density(s) -> np.ndarray:
    """Density matrix ``(sigma_0 + s.sigma) / 2``.

    Raises
    ------
    UnphysicalStateError
        If ``|s|`` exceeds 1 beyond the state tolerance.
    """
    state = as_state(s)
    return 0.5 * (SIGMA_0 + pauli_along(state.s))


def density_to_bloch(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return np.real(np.einsum("kij,ji->k", PAULIS, rho))


def expectation(s, n) -> float:
    """Mean value ``tr(rho sigma_n) = s . n``."""
    return float(as_state(s).s @ unit_vector(n))


def min_eigenvalue(m) -> float:
    """Smallest eigenvalue of a 2x2 Hermitian matrix in closed form.

    For ``M = [[a, b], [conj(b), d]]`` the eigenvalues are
    ``(a + d)/2 -+ sqrt(((a - d)/2)**2 + |b|**2)``.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian")
    a, d = m[0, 0].real, m[1, 1].real
    b = 0.5 * (m[0, 1] + np.conj(m[1, 0]))
    return float(0.5 * (a + d) - np.hypot(0.5 * (a - d), abs(b)))
