"""
Detector-centric description of the joint measurement.

Here the state is represented by its projections on the four SU(2) coherent
states along the tetrahedron directions ``n(x', z') = (x', x'z', z') / sqrt(3)``
(components ordered X, Y, Z), and the whole measurement by a conditional
table ``q(x, z | x', z')``. Everything is small enough to check by brute
force over all 16 entries; the closed-form conditions are verified against
those tables.

Normalization of the Q-like table: the coherent-state projections
``(1 + s.n) / 2`` sum to 2 (the four projectors resolve twice the identity),
so the probability table is half of them, ``(1 + s.n) / 4``. Only this
normalized table reproduces the observed statistics through ``q``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classical import mu_matrix
from .qubit import as_state
from .tables import OUTCOMES, PROB_TOL, PairTable

SQRT3 = np.sqrt(3.0)
INVERTED_LOWER_BOUND = 2 * SQRT3 - 1
FACTOR_TOL = 1e-12
REGION_TOL = 1e-12


def coherent_direction(x_prime: int, z_prime: int) -> np.ndarray:
    return np.array([x_prime, x_prime * z_prime, z_prime], dtype=float) / SQRT3


def coherent_projections(s) -> np.ndarray:
    """``<n|rho|n> = (1 + s.n(x', z')) / 2`` for the four coherent states."""
    v = as_state(s).s
    return np.array(
        [[0.5 * (1 + v @ coherent_direction(xp, zp)) for zp in OUTCOMES] for xp in OUTCOMES]
    )


class QLikeDistribution(PairTable):
    """Always-nonnegative table ``p_Q(x', z') = (1 + s.n(x', z')) / 4``."""


def q_like_distribution(s) -> QLikeDistribution:
    return QLikeDistribution(0.5 * coherent_projections(s))


def _gammas(gammas) -> tuple[float, float, float]:
    gx, gz, gxz = (float(g) for g in gammas)
    for g in (gx, gz, gxz):
        if not 0 <= g <= 1 + 1e-12:
            raise ValueError(f"noise factors must lie in [0, 1], got {gammas!r}")
    return gx, gz, gxz


def _kernel_table(a: float, b: float, c: float) -> np.ndarray:
    """``T[x, z, x', z'] = (1 + sqrt3 (a x x' + b z z' + c x z x' z')) / 4``."""
    w = np.array(OUTCOMES, dtype=float)
    xx = np.multiply.outer(w, w)  # x * x'
    t = (
        a * xx[:, None, :, None]
        + b * xx[None, :, None, :]
        + c * xx[:, None, :, None] * xx[None, :, None, :]
    )
    return 0.25 * (1 + SQRT3 * t)


@dataclass(frozen=True)
class DetectorKernel:
    """Conditional table ``table[x, z, x', z']`` plus its noise factors."""

    table: np.ndarray
    gammas: tuple[float, float, float]

    def column_sums(self) -> np.ndarray:
        return self.table.sum(axis=(0, 1))

    def min_entry(self) -> float:
        return float(self.table.min())

    def apply(self, p) -> np.ndarray:
        """``sum_{x', z'} q(x, z | x', z') p(x', z')``."""
        t = p.table if isinstance(p, PairTable) else np.asarray(p, dtype=float)
        return np.einsum("ijkl,kl->ij", self.table, t)


def detector_kernel(gammas) -> DetectorKernel:
    g = _gammas(gammas)
    return DetectorKernel(_kernel_table(*g), g)


@dataclass(frozen=True)
class KernelPositivity:
    positive: bool
    upper_slack: float
    lower_slack: float
    min_entry: float


def kernel_positivity(gammas) -> KernelPositivity:
    """Check ``1 - sqrt3|gx - gz| >= sqrt3 gxz >= sqrt3|gx + gz| - 1``.

    The slacks are the two sides' differences; each one is four times the
    corresponding smallest table entry. ``min_entry`` is taken from the table.
    """
    gx, gz, gxz = _gammas(gammas)
    upper = 1 - SQRT3 * abs(gx - gz) - SQRT3 * gxz
    lower = SQRT3 * gxz - (SQRT3 * abs(gx + gz) - 1)
    positive = min(upper, lower) / 4 >= -PROB_TOL
    return KernelPositivity(positive, upper, lower, detector_kernel(gammas).min_entry())


@dataclass(frozen=True)
class Factorization:
    factorizes: bool
    defect: float
    x_kernel: np.ndarray
    z_kernel: np.ndarray

    def product(self) -> np.ndarray:
        """``q(x|x') q(z|z')`` laid out as ``[x, z, x', z']``."""
        return np.einsum("ik,jl->ijkl", self.x_kernel, self.z_kernel)


def single_kernel(gamma: float) -> np.ndarray:
    """``q(w|w') = (1 + sqrt3 gamma w w') / 2`` as ``[w, w']``."""
    w = np.array(OUTCOMES, dtype=float)
    return 0.5 * (1 + SQRT3 * gamma * np.multiply.outer(w, w))


def kernel_factorization(gammas) -> Factorization:
    """The kernel splits into single-variable factors iff ``gxz = sqrt3 gx gz``."""
    gx, gz, gxz = _gammas(gammas)
    defect = abs(gxz - SQRT3 * gx * gz)
    return Factorization(defect <= FACTOR_TOL, defect, single_kernel(gx), single_kernel(gz))


def factorized_positivity(gammas) -> bool:
    """Nonnegativity of a factorized kernel: ``gx <= 1/sqrt3`` and ``gz <= 1/sqrt3``.

    Raises
    ------
    ValueError
        If the kernel does not factorize.
    """
    f = kernel_factorization(gammas)
    if not f.factorizes:
        raise ValueError(f"kernel does not factorize (defect {f.defect:.3e})")
    gx, gz, _ = _gammas(gammas)
    bound = 1 / SQRT3 + PROB_TOL
    return gx <= bound and gz <= bound


def povm_factorized_bound(gamma_x, gamma_z):
    """``gx**2 + gz**2 + 3 gx**2 gz**2``; at most 1 inside the POVM region."""
    gx2, gz2 = np.square(gamma_x), np.square(gamma_z)
    return gx2 + gz2 + 3 * gx2 * gz2


def region_boundary(gamma_x):
    """Boundary curve ``gz = sqrt((1 - gx**2) / (1 + 3 gx**2))``."""
    gx2 = np.square(gamma_x)
    return np.sqrt(np.clip(1 - gx2, 0, None) / (1 + 3 * gx2))


@dataclass(frozen=True)
class RegionScan:
    """Grid flags over ``[0, 1]**2``; arrays are indexed ``[i_x, i_z]``."""

    gamma_x: np.ndarray
    gamma_z: np.ndarray
    in_povm_region: np.ndarray
    in_positive_square: np.ndarray
    boundary_x: np.ndarray
    boundary_z: np.ndarray

    def rows(self):
        for i, gx in enumerate(self.gamma_x):
            for j, gz in enumerate(self.gamma_z):
                yield gx, gz, bool(self.in_povm_region[i, j]), bool(self.in_positive_square[i, j])


def povm_factorized_region(grid_resolution: int, boundary_samples: int | None = None) -> RegionScan:
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be at least 2")
    g = np.linspace(0.0, 1.0, grid_resolution)
    gx, gz = np.meshgrid(g, g, indexing="ij")
    in_povm = povm_factorized_bound(gx, gz) <= 1 + REGION_TOL
    bound = 1 / SQRT3 + REGION_TOL
    in_square = (gx <= bound) & (gz <= bound)
    bx = np.linspace(0.0, 1.0, boundary_samples or max(grid_resolution, 101))
    return RegionScan(g, g, in_povm, in_square, bx, region_boundary(bx))


@dataclass(frozen=True)
class InvertedKernel:
    """Noise-inverted kernel and why it can never be a conditional probability.

    Nonnegativity needs ``upper_bound >= scaled_ratio >= lower_bound`` with
    ``scaled_ratio = sqrt3 gxz / (gx gz)``; since ``lower_bound > upper_bound``
    the interval is empty and ``feasible`` is always False.
    """

    table: np.ndarray
    scaled_ratio: float
    upper_bound: float
    lower_bound: float
    feasible: bool
    min_entry: float


def inverted_kernel(gammas) -> InvertedKernel:
    gx, gz, gxz = _gammas(gammas)
    if gx == 0 or gz == 0:
        raise ValueError("gamma_x and gamma_z must be positive to invert the kernel")
    ratio = gxz / (gx * gz)
    table = _kernel_table(1.0, 1.0, ratio)
    scaled = SQRT3 * ratio
    feasible = 1.0 >= scaled >= INVERTED_LOWER_BOUND
    return InvertedKernel(table, scaled, 1.0, INVERTED_LOWER_BOUND, feasible, float(table.min()))


def invert_kernel(kernel: DetectorKernel) -> np.ndarray:
    """Apply the inverse readout kernels to ``q``: ``sum mu_X mu_Z q``."""
    gx, gz, _ = kernel.gammas
    return np.einsum("ai,bj,ijkl->abkl", mu_matrix(gx), mu_matrix(gz), kernel.table)
