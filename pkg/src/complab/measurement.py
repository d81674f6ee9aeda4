"""
Noisy joint measurement of sigma_X and sigma_Z.

A measurement is described by the noise factors ``gamma_x``, ``gamma_z`` and
``gamma_xz`` plus the direction ``n`` of the observable whose mean fixes the
observed correlation. Observed statistics take the form::

    p(x, z) = (1 + x*gx*s_X + z*gz*s_Z + x*z*gxz*(s.n)) / 4

and the corresponding POVM elements are
``D(x, z) = (sigma_0 + gx*x*sigma_X + gz*z*sigma_Z + gxz*x*z*sigma_n) / 4``.

By default the measured axes are the fixed ``e_X`` and ``e_Z``; a model may
carry a rotated orthonormal pair instead, in which case ``s_X`` and ``s_Z``
mean the components of ``s`` along those axes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .qubit import (
    E_X,
    E_Y,
    E_Z,
    SIGMA_0,
    as_state,
    min_eigenvalue,
    pauli_along,
    unit_vector,
)
from .tables import (
    OUTCOMES,
    PROB_TOL,
    JointDistribution,
    NegativeProbabilityError,
    table_from_function,
)

GAMMA_TOL = 1e-12
POSITIVITY_TOL = 1e-12
MOMENT_TOL = 1e-9


class InadmissibleModelError(ValueError):
    """The measurement has a POVM element with a negative eigenvalue."""


def _gamma(name: str, value, lower: float) -> float:
    g = float(value)
    if not np.isfinite(g) or g < lower - GAMMA_TOL or g > 1 + GAMMA_TOL:
        raise ValueError(f"{name} must lie in [{lower:g}, 1], got {value!r}")
    return min(max(g, lower), 1.0)


@dataclass(frozen=True)
class MeasurementModel:
    """Noise triple and correlation direction of a joint measurement.

    A negative ``gamma_xz`` is folded into ``n`` so that ``gamma_xz >= 0``.
    ``gamma_x = 0`` (or ``gamma_z = 0``) describes a measurement that carries
    no information about that observable; such models are valid for forward
    simulation but cannot be inverted.
    """

    gamma_x: float
    gamma_z: float
    gamma_xz: float
    n: np.ndarray = field(default_factory=lambda: E_Y.copy())
    x_axis: np.ndarray = field(default_factory=lambda: E_X.copy())
    z_axis: np.ndarray = field(default_factory=lambda: E_Z.copy())

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "gamma_x", _gamma("gamma_x", self.gamma_x, 0.0))
        set_(self, "gamma_z", _gamma("gamma_z", self.gamma_z, 0.0))
        gxz = _gamma("gamma_xz", self.gamma_xz, -1.0)
        n = unit_vector(self.n)
        if gxz < 0:
            gxz, n = -gxz, -n
        set_(self, "gamma_xz", gxz)
        a = unit_vector(self.x_axis)
        b = unit_vector(self.z_axis)
        if abs(a @ b) > 1e-12:
            raise ValueError("x_axis and z_axis must be orthogonal")
        for name, v in (("n", n), ("x_axis", a), ("z_axis", b)):
            v = v.copy()
            v.flags.writeable = False
            set_(self, name, v)

    @property
    def gammas(self) -> tuple[float, float, float]:
        return self.gamma_x, self.gamma_z, self.gamma_xz

    @property
    def has_default_axes(self) -> bool:
        return bool(np.array_equal(self.x_axis, E_X) and np.array_equal(self.z_axis, E_Z))

    def to_dict(self) -> dict:
        d = {
            "gamma_x": self.gamma_x,
            "gamma_z": self.gamma_z,
            "gamma_xz": self.gamma_xz,
            "n": [float(v) for v in self.n],
        }
        if not self.has_default_axes:
            d["x_axis"] = [float(v) for v in self.x_axis]
            d["z_axis"] = [float(v) for v in self.z_axis]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MeasurementModel":
        kwargs = {k: d[k] for k in ("x_axis", "z_axis") if k in d}
        return cls(d["gamma_x"], d["gamma_z"], d["gamma_xz"], n=d.get("n", E_Y), **kwargs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "MeasurementModel":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class MomentTriple:
    """Observed means ``<x>``, ``<z>`` and correlation ``<xz>``.

    Fields are floats, or exact ``Fraction`` values when built by
    ``moments(d, exact=True)``.
    """

    mean_x: float
    mean_z: float
    corr_xz: float

    def __post_init__(self):
        for name in ("mean_x", "mean_z", "corr_xz"):
            v = getattr(self, name)
            f = float(v)
            if not np.isfinite(f) or abs(f) > 1 + MOMENT_TOL:
                raise ValueError(f"{name} must lie in [-1, 1], got {v!r}")
            object.__setattr__(self, name, v if isinstance(v, Fraction) else f)

    def as_tuple(self) -> tuple[float, float, float]:
        return self.mean_x, self.mean_z, self.corr_xz

    def to_distribution(self) -> JointDistribution:
        """Rebuild ``p(x, z) = (1 + x<x> + z<z> + xz<xz>) / 4``."""
        mx, mz, c = self.as_tuple()
        return JointDistribution(
            table_from_function(lambda x, z: 0.25 * (1 + x * mx + z * mz + x * z * c))
        )


@dataclass(frozen=True)
class PositivityReport:
    admissible: bool
    worst_eigenvalue: float


def ideal_moments(s, m: MeasurementModel) -> MomentTriple:
    """Moments ``(gx s_X, gz s_Z, gxz s_n)`` the model produces on state ``s``."""
    v = as_state(s).s
    return MomentTriple(
        m.gamma_x * float(v @ m.x_axis),
        m.gamma_z * float(v @ m.z_axis),
        m.gamma_xz * float(v @ m.n),
    )


def joint_statistics(s, m: MeasurementModel) -> JointDistribution:
    """Observed distribution of the joint measurement ``m`` on state ``s``.

    Raises
    ------
    NegativeProbabilityError
        If some outcome gets probability below ``-PROB_TOL``; the model is
        then not a valid measurement for this state.
    """
    mx, mz, c = ideal_moments(s, m).as_tuple()
    table = table_from_function(lambda x, z: 0.25 * (1 + x * mx + z * mz + x * z * c))
    if table.min() < -PROB_TOL:
        raise NegativeProbabilityError(
            f"model {m.gammas} gives p = {table.min():.3e} < 0 on state "
            f"{as_state(s).to_list()}; the measurement is not admissible"
        )
    return JointDistribution(table)


def moments(d: JointDistribution, exact: bool = False) -> MomentTriple:
    """Means and correlation of an observed table.

    Each sum is evaluated exactly; with ``exact=True`` the results are kept
    as ``Fraction`` instead of being rounded to floats.
    """
    pp, pm, mp, mm = (Fraction(float(v)) for v in d.table.reshape(-1))
    triple = (pp + pm - mp - mm, pp - pm + mp - mm, pp - pm - mp + mm)
    return MomentTriple(*(triple if exact else (float(v) for v in triple)))


def marginals(d: JointDistribution) -> tuple[np.ndarray, np.ndarray]:
    """Marginal tables ``(p_X, p_Z)``, each ordered as outcomes ``(+1, -1)``."""
    return d.table.sum(axis=1), d.table.sum(axis=0)


def povm_elements(m: MeasurementModel) -> np.ndarray:
    """POVM elements as an array ``E[i, j]`` of 2x2 matrices.

    ``i`` and ``j`` index the outcomes of ``x`` and ``z`` (0 for +1, 1 for -1).
    """
    sa, sb, sn = pauli_along(m.x_axis), pauli_along(m.z_axis), pauli_along(m.n)
    elements = np.empty((2, 2, 2, 2), dtype=complex)
    for i, x in enumerate(OUTCOMES):
        for j, z in enumerate(OUTCOMES):
            elements[i, j] = 0.25 * (
                SIGMA_0 + m.gamma_x * x * sa + m.gamma_z * z * sb + m.gamma_xz * x * z * sn
            )
    return elements


def povm_positivity(m: MeasurementModel) -> PositivityReport:
    """Worst eigenvalue over all POVM elements; admissible if ``>= -1e-12``."""
    elements = povm_elements(m)
    worst = min(min_eigenvalue(elements[i, j]) for i in range(2) for j in range(2))
    return PositivityReport(worst >= -POSITIVITY_TOL, worst)


def povm_bloch_lengths(m: MeasurementModel) -> np.ndarray:
    """``|v(x, z)|`` with ``D(x, z) = (sigma_0 + v.sigma) / 4``."""
    return np.array(
        [
            [
                np.linalg.norm(
                    m.gamma_x * x * m.x_axis + m.gamma_z * z * m.z_axis + m.gamma_xz * x * z * m.n
                )
                for z in OUTCOMES
            ]
            for x in OUTCOMES
        ]
    )


def require_admissible(m: MeasurementModel) -> PositivityReport:
    report = povm_positivity(m)
    if not report.admissible:
        raise InadmissibleModelError(
            f"POVM element has eigenvalue {report.worst_eigenvalue:.6g} < 0 "
            f"for gammas {m.gammas}, n = {m.to_dict()['n']}"
        )
    return report
