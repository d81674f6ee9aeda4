"""Tables over pairs of dichotomic outcomes ``(x, z) in {+1, -1}^2``.

Storage is a 2x2 array ``table[i, j]`` with index 0 for outcome ``+1`` and
index 1 for outcome ``-1``, so the flattened order is ``(++, +-, -+, --)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OUTCOMES = (1, -1)
PAIRS = tuple((x, z) for x in OUTCOMES for z in OUTCOMES)
SIGNS = np.array(OUTCOMES, dtype=float)

PROB_TOL = 1e-12
NORM_TOL = 1e-12


class NegativeProbabilityError(ValueError):
    pass


def index(v: int) -> int:
    if v == 1:
        return 0
    if v == -1:
        return 1
    raise ValueError(f"outcome must be +1 or -1, got {v!r}")


def table_from_function(f) -> np.ndarray:
    return np.array([[f(x, z) for z in OUTCOMES] for x in OUTCOMES], dtype=float)


@dataclass(frozen=True)
class PairTable:
    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=float).reshape(2, 2)
        if not np.all(np.isfinite(t)):
            raise ValueError("table entries must be finite")
        if abs(t.sum() - 1.0) > NORM_TOL * max(1.0, np.abs(t).sum()):
            raise ValueError(f"entries must sum to 1, got {t.sum()!r}")
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    def __getitem__(self, xz) -> float:
        x, z = xz
        return float(self.table[index(x), index(z)])

    def as_dict(self) -> dict[str, float]:
        return {_label(x, z): self[x, z] for x, z in PAIRS}

    def min_entry(self) -> float:
        return float(self.table.min())

    def max_abs_difference(self, other) -> float:
        return float(np.max(np.abs(self.table - _table(other))))


class JointDistribution(PairTable):
    """Probability table ``p(x, z)``; entries nonnegative to ``PROB_TOL``."""

    def __post_init__(self):
        super().__post_init__()
        if self.table.min() < -PROB_TOL:
            raise NegativeProbabilityError(
                f"negative probability {self.table.min():.3e} in joint table"
            )

    @classmethod
    def uniform(cls) -> "JointDistribution":
        return cls(np.full((2, 2), 0.25))


def _table(t) -> np.ndarray:
    return t.table if isinstance(t, PairTable) else np.asarray(t, dtype=float)


def _label(x: int, z: int) -> str:
    return ("p" if x > 0 else "m") + ("p" if z > 0 else "m")
