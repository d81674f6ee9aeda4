"""Finite-sample simulation: reproducibility, concentration and error bars."""
import json

import numpy as np
import pytest

from complab.classical import VIOLATED, state_form_inequality
from complab.measurement import MeasurementModel, joint_statistics
from complab.sampling import (
    EmpiricalCounts,
    estimate,
    make_rng,
    sample,
    spawn_seeds,
)
from complab.tables import JointDistribution, NegativeProbabilityError

from conftest import random_admissible_model, random_state

RATIO_STATE = [0.0, 0.9, 0.0]
RATIO_MODEL = MeasurementModel(0.3, 0.3, np.sqrt(0.82))


class TestSample:
    def test_concentrated(self):
        c = sample(JointDistribution([[1, 0], [0, 0]]), 1234, seed=5)
        assert c.counts == (1234, 0, 0, 0)

    def test_uniform_concentration(self):
        N = 4_000_000
        c = sample(JointDistribution.uniform(), N, seed=11)
        bound = 5 * np.sqrt(N * 0.25 * 0.75)
        assert all(abs(k - N / 4) <= bound for k in c.counts)

    def test_reproducible(self):
        d = JointDistribution([[0.1, 0.2], [0.3, 0.4]])
        a, b = sample(d, 10_000, 42), sample(d, 10_000, 42)
        assert a.to_json() == b.to_json()
        assert sample(d, 10_000, 43).counts != a.counts

    def test_frozen_stream(self):
        # pins the generator and the inverse-CDF mapping
        u = make_rng(7).random(3)
        assert u.tolist() == pytest.approx(np.random.Generator(np.random.PCG64(7)).random(3).tolist(), abs=0)
        d = JointDistribution([[0.1, 0.2], [0.3, 0.4]])
        cells = np.searchsorted(np.cumsum(d.table.reshape(-1)), make_rng(99).random(500), side="right")
        assert sample(d, 500, 99).counts == tuple(np.bincount(cells, minlength=4))

    def test_rejects_negative(self):
        d = JointDistribution.__new__(JointDistribution)
        object.__setattr__(d, "table", np.array([[0.6, 0.5], [-0.1, 0.0]]))
        with pytest.raises(NegativeProbabilityError):
            sample(d, 10, 1)

    def test_rejects_zero_n(self):
        with pytest.raises(ValueError):
            sample(JointDistribution.uniform(), 0, 1)


class TestCounts:
    def test_invariants(self):
        with pytest.raises(ValueError):
            EmpiricalCounts((1, 2, 3, 4), 11, 0)
        with pytest.raises(ValueError):
            EmpiricalCounts((-1, 2, 3, 6), 10, 0)

    def test_json_round_trip(self):
        c = EmpiricalCounts((1, 2, 3, 4), 10, 77)
        d = json.loads(c.to_json())
        assert d == {"n_pp": 1, "n_pm": 2, "n_mp": 3, "n_mm": 4, "N": 10, "seed": 77}
        assert EmpiricalCounts.from_dict(d) == c


class TestEstimate:
    def test_exact_uniform_counts(self):
        r = estimate(EmpiricalCounts((250, 250, 250, 250), 1000, 0), (0.5, 0.5))
        assert (r.margin_upper, r.margin_lower) == (1.0, 1.0)
        assert min(r.z_scores) > 5
        assert r.verdict_confident and r.verdict == "satisfied"

    def test_moment_errors_binomial(self):
        c = EmpiricalCounts((400, 100, 300, 200), 1000, 0)
        r = estimate(c, (1, 1))
        mx, mz, _ = r.moments.as_tuple()
        assert r.moment_errors[0] == pytest.approx(np.sqrt((1 - mx**2) / 1000))
        assert r.moment_errors[1] == pytest.approx(np.sqrt((1 - mz**2) / 1000))

    def test_ratio_case(self):
        c = sample(joint_statistics(RATIO_STATE, RATIO_MODEL), 100_000, seed=3)
        r = estimate(c, (0.3, 0.3))
        assert r.margin_upper == pytest.approx(-8.055385138137416, abs=5 * r.margin_errors[0])
        assert r.z_scores[0] < -5
        assert r.verdict == VIOLATED and r.verdict_confident

    def test_two_samples_not_confident(self):
        c = sample(JointDistribution.uniform(), 2, seed=0)
        r = estimate(c, (0.5, 0.5))
        assert min(r.margin_errors) > 1
        assert not r.verdict_confident

    def test_all_in_one_cell_has_error(self):
        r = estimate(EmpiricalCounts((10, 0, 0, 0), 10, 0), (1, 1))
        assert min(r.moment_errors) > 0
        assert min(r.margin_errors) > 0

    def test_rejects(self):
        with pytest.raises(ValueError):
            estimate(EmpiricalCounts((1, 0, 0, 0), 1, 0), (1, 1))
        with pytest.raises(ValueError):
            estimate(EmpiricalCounts((1, 1, 0, 0), 2, 0), (0, 1))

    def test_report_dict(self):
        r = estimate(EmpiricalCounts((3, 2, 1, 4), 10, 0), (0.5, 0.5)).to_dict()
        assert json.loads(json.dumps(r))["N"] == 10
        assert all(e >= 0 for e in r["moment_errors"] + r["margin_errors"])


class TestConsistency:
    def test_error_scaling(self):
        d = JointDistribution([[0.35, 0.15], [0.2, 0.3]])
        true = np.array([0.0, 0.1, 0.3])
        Ns = [1_000, 10_000, 100_000, 1_000_000]
        rms = []
        for i, N in enumerate(Ns):
            errs = []
            for s in spawn_seeds(1000 + i, 40):
                r = estimate(sample(d, N, s), (1, 1))
                errs.append(np.array(r.moments.as_tuple()) - true)
            rms.append(np.sqrt(np.mean(np.square(errs))))
        slope = np.polyfit(np.log(Ns), np.log(rms), 1)[0]
        assert abs(slope + 0.5) <= 0.15

    def test_margins_within_five_se(self, rng):
        inside = 0
        seeds = spawn_seeds(2026, 100)
        for seed in seeds:
            m = random_admissible_model(rng)
            s = random_state(rng)
            truth = state_form_inequality(s, m)
            r = estimate(sample(joint_statistics(s, m), 1_000_000, seed), m.gammas)
            ok = all(
                abs(est - tru) <= 5 * err
                for est, tru, err in zip(
                    (r.margin_upper, r.margin_lower), (truth.margin_upper, truth.margin_lower), r.margin_errors
                )
            )
            inside += ok
        assert inside >= 99

    def test_spawn_seeds_distinct(self):
        s = spawn_seeds(5, 10)
        assert len(set(s)) == 10 and s == spawn_seeds(5, 10)
