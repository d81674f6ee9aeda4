"""
Separable classical model for the observed joint statistics.

The model assumes a genuine joint distribution ``p_L(x', z')`` of sharp
values for sigma_X and sigma_Z, read out through independent noisy channels
``p(x|x') = (1 + gx x x') / 2`` and ``p(z|z') = (1 + gz z z') / 2``. Given
observed moments the distribution ``p_L`` is unique; the observed data admit
a classical description exactly when it is nonnegative. Applying the inverse
channels ``mu`` to the observed table yields the same ``p_L``.

Inverting the channels amplifies rounding by ``1 / (gx gz)``, so the
table-valued maps and the inequality margins below are evaluated in exact
rational arithmetic on their float inputs and rounded once at the end.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .measurement import MeasurementModel, MomentTriple, moments
from .qubit import E_X, E_Y, E_Z, as_state
from .tables import OUTCOMES, PAIRS, JointDistribution, PairTable, index, table_from_function

VERDICT_TOL = 1e-9

SATISFIED = "satisfied"
BOUNDARY = "boundary"
VIOLATED = "violated"


class InversionError(ValueError):
    """Raised when a noise factor is zero and the channel cannot be inverted."""


class ReconstructedDistribution(PairTable):
    """Normalized table over ``(x', z')`` whose entries may be negative."""

    @property
    def is_probability(self) -> bool:
        return self.min_entry() >= -VERDICT_TOL


@dataclass(frozen=True)
class InequalityReport:
    four_values: tuple[float, float, float, float]
    margin_upper: float
    margin_lower: float
    verdict: str

    @property
    def min_margin(self) -> float:
        return min_pair(self.margin_upper, self.margin_lower)

    def to_dict(self) -> dict:
        return {
            "four_values": [float(v) for v in self.four_values],
            "margin_upper": float(self.margin_upper),
            "margin_lower": float(self.margin_lower),
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def require_invertible(*gammas) -> None:
    for g in gammas:
        if not g > 0:
            raise InversionError(
                "observable not measured (gamma = 0): insufficient information to invert, "
                "inversion impossible"
            )
        if g > 1 + 1e-12:
            raise ValueError(f"gamma must lie in (0, 1], got {g!r}")


def min_pair(a: float, b: float) -> float:
    """``min(a, b)`` written as ``(a + b - |a - b|) / 2``."""
    return 0.5 * (a + b - abs(a - b))


def verdict_from_margin(margin: float, tol: float = VERDICT_TOL) -> str:
    if margin < -tol:
        return VIOLATED
    if margin <= tol:
        return BOUNDARY
    return SATISFIED


def conditional(w: int, w_prime: int, gamma: float) -> float:
    """Noisy readout channel ``p(w|w') = (1 + gamma w w') / 2``."""
    if not 0 <= gamma <= 1 + 1e-12:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma!r}")
    return 0.5 * (1 + gamma * w * w_prime)


conditional_x = conditional
conditional_z = conditional


def _ratios(t: MomentTriple, gamma_x: float, gamma_z: float) -> tuple[Fraction, Fraction, Fraction]:
    """Noise-corrected moments ``(<x>/gx, <z>/gz, <xz>/(gx gz))``, exact."""
    require_invertible(gamma_x, gamma_z)
    mx, mz, c = (Fraction(v) for v in t.as_tuple())
    gx, gz = Fraction(gamma_x), Fraction(gamma_z)
    return mx / gx, mz / gz, c / (gx * gz)


def reconstruct_p_lambda(t: MomentTriple, gamma_x: float, gamma_z: float) -> ReconstructedDistribution:
    """Unique ``p_L(x', z')`` reproducing the observed moments ``t``."""
    a, b, c = _ratios(t, gamma_x, gamma_z)
    return ReconstructedDistribution(
        table_from_function(lambda x, z: float((1 + x * a + z * b + x * z * c) / 4))
    )


def channel_matrix(gamma: float) -> np.ndarray:
    return np.array([[conditional(w, wp, gamma) for wp in OUTCOMES] for w in OUTCOMES])


def forward_model(p_lambda, gamma_x: float, gamma_z: float) -> JointDistribution:
    """``p(x, z) = sum p(x|x') p(z|z') p_L(x', z')``."""
    t = p_lambda.table if isinstance(p_lambda, PairTable) else np.asarray(p_lambda, dtype=float)
    conditional(1, 1, gamma_x), conditional(1, 1, gamma_z)
    gx, gz = Fraction(gamma_x), Fraction(gamma_z)
    p = {(x, z): Fraction(float(t[index(x), index(z)])) for x, z in PAIRS}

    def cell(x, z):
        return float(
            sum((1 + gx * x * xp) * (1 + gz * z * zp) * p[xp, zp] for xp, zp in PAIRS) / 4
        )

    return JointDistribution(table_from_function(cell))


def inequality_family(t: MomentTriple, gamma_x: float, gamma_z: float) -> tuple[float, float, float, float]:
    """The four classicality conditions, each required to be nonnegative.

    Ordered as ``4 p_L`` at ``(+,+), (-,-), (-,+), (+,-)``.
    """
    return _family(*_ratios(t, gamma_x, gamma_z))


def _family(a, b, c) -> tuple[float, float, float, float]:
    return tuple(float(v) for v in (1 + a + b + c, 1 - a - b + c, 1 - a + b - c, 1 + a - b - c))


def inequality_report(a, b, c) -> InequalityReport:
    """Report for noise-corrected moments ``a, b, c`` (floats or fractions)."""
    a, b, c = (Fraction(v) for v in (a, b, c))
    upper = 1 - abs(a - b) - c
    lower = c - (abs(a + b) - 1)
    verdict = verdict_from_margin(float(min(upper, lower)))
    return InequalityReport(_family(a, b, c), float(upper), float(lower), verdict)


def compact_inequality(t: MomentTriple, gamma_x: float, gamma_z: float) -> InequalityReport:
    """``1 - |a - b| >= c >= |a + b| - 1`` for the noise-corrected moments.

    ``margin_upper`` and ``margin_lower`` are the slack of the two sides; the
    smaller of them equals the smallest of the four family values.
    """
    return inequality_report(*_ratios(t, gamma_x, gamma_z))


def state_form_inequality(s, m: MeasurementModel) -> InequalityReport:
    """Same test written with the Bloch components of the state."""
    require_invertible(m.gamma_x, m.gamma_z)
    v = as_state(s).s
    ratio = m.gamma_xz / (m.gamma_x * m.gamma_z)
    return inequality_report(float(v @ m.x_axis), float(v @ m.z_axis), ratio * float(v @ m.n))


def mu_kernel(w: int, w_prime: int, gamma_w: float) -> float:
    """Inverse readout kernel ``mu(w, w') = (1 + w w' / gamma) / 2``."""
    require_invertible(gamma_w)
    return 0.5 * (1 + w * w_prime / gamma_w)


def mu_matrix(gamma: float) -> np.ndarray:
    return np.array([[mu_kernel(w, wp, gamma) for wp in OUTCOMES] for w in OUTCOMES])


def invert_joint(d: JointDistribution, gamma_x: float, gamma_z: float) -> ReconstructedDistribution:
    """Noise-free joint table ``p(x, z) = sum mu_X mu_Z p~(x', z')``."""
    require_invertible(gamma_x, gamma_z)
    gx, gz = Fraction(gamma_x), Fraction(gamma_z)
    p = {(x, z): Fraction(d[x, z]) for x, z in PAIRS}

    def mu(w, wp, g):
        return (1 + w * wp / g) / 2

    def cell(x, z):
        return float(sum(mu(x, xp, gx) * mu(z, zp, gz) * p[xp, zp] for xp, zp in PAIRS))

    return ReconstructedDistribution(table_from_function(cell))


@dataclass(frozen=True)
class EquivalenceReport:
    inverted: ReconstructedDistribution
    reconstructed: ReconstructedDistribution
    max_abs_difference: float


def equivalence_check(d: JointDistribution, gamma_x: float, gamma_z: float) -> EquivalenceReport:
    """Compare kernel inversion of ``d`` with the moment reconstruction of ``p_L``.

    Both sides are exact up to their final rounding, so any difference is a
    disagreement between the two formulas and not float noise.
    """
    inverted = invert_joint(d, gamma_x, gamma_z)
    reconstructed = reconstruct_p_lambda(moments(d, exact=True), gamma_x, gamma_z)
    return EquivalenceReport(inverted, reconstructed, inverted.max_abs_difference(reconstructed))


def complete_triad(n) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors ``(a, b)`` with ``(a, n, b)`` a right-handed orthonormal frame.

    ``a`` is built from the canonical axis on which ``n`` has the smallest
    component, so the choice is deterministic.
    """
    n = np.asarray(n, dtype=float)
    n = n / np.linalg.norm(n)
    k = int(np.argmin(np.abs(n)))
    a = np.cross((E_X, E_Y, E_Z)[k], n)
    a /= np.linalg.norm(a)
    b = np.cross(a, n)
    return a, b


def violating_gamma(s_norm: float) -> float:
    """Common ``gamma_x = gamma_z`` giving ``gamma**2 / sqrt(1 - 2 gamma**2) = s_norm / 2``.

    With ``u = gamma**2`` and ``k = s_norm / 2`` this is the positive root of
    ``u**2 + 2 k**2 u - k**2 = 0``.
    """
    k2 = 0.25 * s_norm**2
    # k2 / (k2 + sqrt(k2**2 + k2)) is the stable form of -k2 + sqrt(k2**2 + k2)
    u = k2 / (k2 + np.sqrt(k2 * k2 + k2))
    return float(np.sqrt(u))


def violation_search(s) -> MeasurementModel:
    """Boundary-admissible measurement under which ``s`` violates the inequalities.

    The measured axes are chosen orthogonal to ``s`` and the correlation
    direction along it, so ``s_X = s_Z = 0`` and ``s_n = |s|``. The noise
    factors sit on the unit sphere ``2 g**2 + gxz**2 = 1`` with nonclassicality
    factor ``g**2 / gxz = |s| / 2``.

    Raises
    ------
    ValueError
        For the maximally mixed state, which satisfies every inequality.
    """
    state = as_state(s)
    if state.norm == 0:
        raise ValueError(
            "identity state: no violating measurement exists "
            "(only states different from the identity can violate)"
        )
    n = state.s / state.norm
    a, b = complete_triad(n)
    g = violating_gamma(state.norm)
    gxz = np.sqrt(max(0.0, 1 - 2 * g * g))
    return MeasurementModel(g, g, gxz, n=n, x_axis=a, z_axis=b)


def nonclassicality_factor(m: MeasurementModel) -> float:
    """``gx gz / gxz``: states with ``s_n`` above it violate when ``s_X = s_Z = 0``."""
    if m.gamma_xz == 0:
        return float("inf")
    return m.gamma_x * m.gamma_z / m.gamma_xz
