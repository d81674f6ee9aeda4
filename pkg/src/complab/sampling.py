"""
Finite-sample simulation of a joint-measurement experiment.

Draws use numpy's PCG64 bit generator seeded with a single integer, so a
given ``(distribution, N, seed)`` produces the same counts on every platform.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .classical import VERDICT_TOL, VIOLATED, require_invertible, min_pair, verdict_from_margin
from .measurement import MomentTriple
from .tables import OUTCOMES, JointDistribution, NegativeProbabilityError

DEFAULT_CONFIDENCE = 5.0
COUNT_KEYS = ("n_pp", "n_pm", "n_mp", "n_mm")


@dataclass(frozen=True)
class EmpiricalCounts:
    """Outcome counts in ``(++, +-, -+, --)`` order."""

    counts: tuple[int, int, int, int]
    N: int
    seed: int

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != 4 or min(counts) < 0:
            raise ValueError(f"need four nonnegative counts, got {self.counts!r}")
        if sum(counts) != self.N or self.N < 1:
            raise ValueError(f"counts sum to {sum(counts)}, expected N = {self.N} >= 1")
        object.__setattr__(self, "counts", counts)

    @property
    def table(self) -> np.ndarray:
        return np.array(self.counts, dtype=float).reshape(2, 2)

    def frequencies(self) -> np.ndarray:
        return self.table / self.N

    def to_dict(self) -> dict:
        d = dict(zip(COUNT_KEYS, self.counts))
        d.update(N=self.N, seed=self.seed)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "EmpiricalCounts":
        return cls(tuple(d[k] for k in COUNT_KEYS), d["N"], d["seed"])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample(d: JointDistribution, N: int, seed: int) -> EmpiricalCounts:
    """Draw ``N`` outcomes by inverse CDF over the four cells."""
    if N < 1:
        raise ValueError("N must be at least 1")
    p = d.table.reshape(-1)
    if p.min() < 0:
        raise NegativeProbabilityError("cannot sample from a table with negative entries")
    cdf = np.cumsum(p)
    cdf /= cdf[-1]
    u = make_rng(seed).random(N)
    cells = np.minimum(np.searchsorted(cdf, u, side="right"), 3)
    return EmpiricalCounts(tuple(np.bincount(cells, minlength=4)), N, seed)


@dataclass(frozen=True)
class EstimatedReport:
    moments: MomentTriple
    moment_errors: tuple[float, float, float]
    margin_upper: float
    margin_lower: float
    margin_errors: tuple[float, float]
    z_scores: tuple[float, float]
    verdict: str
    verdict_confident: bool
    confidence: float
    N: int

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "moments": {
                "mean_x": self.moments.mean_x,
                "mean_z": self.moments.mean_z,
                "corr_xz": self.moments.corr_xz,
            },
            "moment_errors": list(self.moment_errors),
            "margin_upper": self.margin_upper,
            "margin_lower": self.margin_lower,
            "margin_errors": list(self.margin_errors),
            "z_scores": list(self.z_scores),
            "verdict": self.verdict,
            "verdict_confident": self.verdict_confident,
            "confidence": self.confidence,
        }


def _moment_covariance(m: np.ndarray, N: int) -> np.ndarray:
    """Covariance of the plug-in means of ``(x, z, xz)`` under multinomial sampling.

    Uses ``x * xz = z`` and ``z * xz = x``. Diagonal variances are floored at
    ``1 / N**2`` so that an all-in-one-cell sample does not claim zero error.
    """
    mx, mz, c = m
    cov = np.array(
        [
            [1 - mx * mx, c - mx * mz, mz - mx * c],
            [c - mx * mz, 1 - mz * mz, mx - mz * c],
            [mz - mx * c, mx - mz * c, 1 - c * c],
        ]
    ) / N
    floor = np.maximum(np.diag(cov), 1.0 / N**2) - np.diag(cov)
    return cov + np.diag(floor)


def _propagated_error(grads: list[np.ndarray], cov: np.ndarray) -> float:
    return float(np.sqrt(max(max(g @ cov @ g for g in grads), 0.0)))


def _kink_signs(v: float, grad: np.ndarray, cov: np.ndarray) -> tuple[float, ...]:
    """Derivative signs of ``|v|``; both branches when ``v`` is within one error of 0."""
    if abs(v) <= max(np.sqrt(grad @ cov @ grad), VERDICT_TOL):
        return (1.0, -1.0)
    return (float(np.sign(v)),)


def estimate(
    c: EmpiricalCounts,
    gammas,
    confidence: float = DEFAULT_CONFIDENCE,
) -> EstimatedReport:
    """Plug-in moments, margins and first-order (delta method) errors.

    ``z_scores`` are margin / error. The verdict is confident when either
    margin is below ``-confidence`` sigma (violation) or both are above
    ``+confidence`` sigma (classical).
    """
    if c.N < 2:
        raise ValueError("need at least two samples to estimate errors")
    gx, gz = float(gammas[0]), float(gammas[1])
    require_invertible(gx, gz)
    f = c.frequencies()
    w = np.array(OUTCOMES, dtype=float)
    m = np.array([w @ f.sum(axis=1), w @ f.sum(axis=0), w @ f @ w])
    cov = _moment_covariance(m, c.N)
    moment_errors = tuple(float(e) for e in np.sqrt(np.diag(cov)))

    a, b, k = m[0] / gx, m[1] / gz, m[2] / (gx * gz)
    upper = 1 - abs(a - b) - k
    lower = k - (abs(a + b) - 1)
    d_diff = np.array([1 / gx, -1 / gz, 0.0])
    d_sum = np.array([1 / gx, 1 / gz, 0.0])
    d_corr = np.array([0.0, 0.0, 1 / (gx * gz)])
    up_grads = [-sg * d_diff - d_corr for sg in _kink_signs(a - b, d_diff, cov)]
    lo_grads = [d_corr - sg * d_sum for sg in _kink_signs(a + b, d_sum, cov)]
    errors = (_propagated_error(up_grads, cov), _propagated_error(lo_grads, cov))
    z = tuple(
        float(mg / e) if e > 0 else float(np.copysign(np.inf, mg))
        for mg, e in zip((upper, lower), errors)
    )
    verdict = verdict_from_margin(min_pair(upper, lower))
    confident = (min(z) < -confidence) if verdict == VIOLATED else (min(z) > confidence)
    return EstimatedReport(
        MomentTriple(*m),
        moment_errors,
        float(upper),
        float(lower),
        errors,
        z,
        verdict,
        bool(confident),
        float(confidence),
        c.N,
    )


def spawn_seeds(seed: int, n: int) -> list[int]:
    """Independent child seeds for sharding a simulation across workers."""
    return [int(s.generate_state(1, np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(n)]

