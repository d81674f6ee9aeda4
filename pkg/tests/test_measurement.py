import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complab.measurement import (
    InadmissibleModelError,
    MeasurementModel,
    MomentTriple,
    joint_statistics,
    marginals,
    moments,
    povm_bloch_lengths,
    povm_elements,
    povm_positivity,
    require_admissible,
)
from complab.qubit import SIGMA_X, bloch_to_density
from complab.tables import JointDistribution, NegativeProbabilityError
from complab.young import YoungSetting, gammas_from_angles

from conftest import bloch_vectors, random_admissible_model, random_state

SQRT082 = np.sqrt(0.82)


def y_model(gx, gz, gxz):
    return MeasurementModel(gx, gz, gxz, n=[0, 1, 0])


def born_table(s, m):
    """Independent path: tr[D(x, z) rho] for every outcome."""
    rho = bloch_to_density(s)
    return np.einsum("ijab,ba->ij", povm_elements(m), rho).real


class TestModel:
    def test_negative_correlation_folds_into_direction(self):
        m = MeasurementModel(0.5, 0.5, -0.3, n=[0, 1, 0])
        assert m.gamma_xz == 0.3
        assert np.array_equal(m.n, [0, -1, 0])

    @pytest.mark.parametrize("bad", [(1.2, 0.5, 0.1), (0.5, -0.1, 0.1), (0.5, 0.5, 1.5)])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            MeasurementModel(*bad)

    def test_rejects_non_orthogonal_axes(self):
        with pytest.raises(ValueError):
            MeasurementModel(0.5, 0.5, 0.1, x_axis=[1, 0, 0], z_axis=[np.sqrt(0.5), 0, np.sqrt(0.5)])

    def test_json_round_trip(self):
        m = MeasurementModel(0.3, 0.4, 0.5, n=[0, 0.6, 0.8])
        text = m.to_json()
        assert json.loads(text) == {"gamma_x": 0.3, "gamma_z": 0.4, "gamma_xz": 0.5, "n": [0, 0.6, 0.8]}
        assert MeasurementModel.from_json(text).to_dict() == m.to_dict()


class TestJointStatistics:
    def test_mixed_state_is_uniform(self, rng):
        for _ in range(10):
            d = joint_statistics([0, 0, 0], random_admissible_model(rng))
            assert np.array_equal(d.table, np.full((2, 2), 0.25))

    def test_y_state_example(self):
        d = joint_statistics([0, 0.9, 0], y_model(0.3, 0.3, SQRT082))
        assert d[1, 1] == pytest.approx(0.4537461656080919, abs=1e-15)
        assert d[-1, -1] == pytest.approx(0.4537461656080919, abs=1e-15)
        assert d[1, -1] == pytest.approx(0.04625383439190814, abs=1e-15)
        assert d[-1, 1] == pytest.approx(0.04625383439190814, abs=1e-15)

    def test_young_path_readout(self):
        d = joint_statistics([0, 0, 1], gammas_from_angles(YoungSetting(np.pi / 2, 0)))
        for x in (1, -1):
            assert d[x, 1] == pytest.approx(0.5, abs=1e-15)
            assert d[x, -1] == pytest.approx(0.0, abs=1e-15)

    def test_inadmissible_model_can_give_negative_probability(self):
        m = MeasurementModel(1.0, 1.0, 0.0)
        with pytest.raises(NegativeProbabilityError):
            joint_statistics([np.sqrt(0.5), 0, -np.sqrt(0.5)], m)

    def test_two_paths_agree(self, rng):
        for _ in range(200):
            s, m = random_state(rng), random_admissible_model(rng)
            assert np.max(np.abs(joint_statistics(s, m).table - born_table(s, m))) <= 1e-13


class TestMoments:
    def test_uniform(self):
        assert moments(JointDistribution.uniform()).as_tuple() == (0, 0, 0)

    def test_deterministic(self):
        d = JointDistribution([[1, 0], [0, 0]])
        assert moments(d).as_tuple() == (1, 1, 1)

    def test_y_state(self):
        t = moments(joint_statistics([0, 0.9, 0], y_model(0.3, 0.3, SQRT082)))
        assert t.mean_x == pytest.approx(0, abs=1e-15)
        assert t.mean_z == pytest.approx(0, abs=1e-15)
        assert t.corr_xz == pytest.approx(0.8149846624323674, abs=1e-15)

    def test_triple_rebuilds_table(self, rng):
        for _ in range(50):
            d = joint_statistics(random_state(rng), random_admissible_model(rng))
            assert np.max(np.abs(moments(d).to_distribution().table - d.table)) <= 1e-15

    def test_invalid_triple_gives_negative_table(self):
        with pytest.raises(NegativeProbabilityError):
            MomentTriple(0.9, 0.9, -0.9).to_distribution()


class TestMarginals:
    def test_uniform(self):
        px, pz = marginals(JointDistribution.uniform())
        assert np.array_equal(px, [0.5, 0.5]) and np.array_equal(pz, [0.5, 0.5])

    def test_individual_measurement_limit(self):
        px, _ = marginals(joint_statistics([1, 0, 0], MeasurementModel(1, 0, 0)))
        assert px[0] == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("gz", [0.0, 0.3, 0.6])
    def test_partial_state(self, gz):
        px, pz = marginals(joint_statistics([0.5, 0, 0], MeasurementModel(0.8, gz, 0.0)))
        assert px[0] == pytest.approx(0.7, abs=1e-15)
        assert pz.sum() == pytest.approx(1.0, abs=1e-15)


class TestPovm:
    def test_elements_sum_to_identity(self, rng):
        for _ in range(50):
            m = random_admissible_model(rng)
            assert np.max(np.abs(povm_elements(m).sum(axis=(0, 1)) - np.eye(2))) <= 1e-15

    def test_zero_gammas(self):
        e = povm_elements(MeasurementModel(0, 0, 0))
        for i in range(2):
            for j in range(2):
                assert np.allclose(e[i, j], np.eye(2) / 4, atol=0)

    def test_projective_x_limit(self):
        e = povm_elements(MeasurementModel(1, 0, 0))
        for i, x in enumerate((1, -1)):
            for j in range(2):
                assert np.allclose(e[i, j], 0.25 * (np.eye(2) + x * SIGMA_X))
                assert np.linalg.matrix_rank(e[i, j]) == 1

    def test_young_elements_are_on_boundary(self):
        m = gammas_from_angles(YoungSetting(np.pi / 3, np.pi / 4))
        report = povm_positivity(m)
        assert report.admissible
        assert report.worst_eigenvalue == pytest.approx(0.0, abs=1e-15)

    def test_sum_of_squares_over_one(self):
        report = povm_positivity(y_model(0.6, 0.6, 0.6))
        assert not report.admissible
        assert report.worst_eigenvalue == pytest.approx(0.25 * (1 - np.sqrt(1.08)), abs=1e-15)
        with pytest.raises(InadmissibleModelError):
            require_admissible(y_model(0.6, 0.6, 0.6))

    def test_sum_of_squares_exactly_one(self):
        report = povm_positivity(y_model(0.6, 0.6, np.sqrt(0.28)))
        assert report.admissible
        assert report.worst_eigenvalue == pytest.approx(0.0, abs=1e-15)

    def test_x_direction_constraint(self):
        m = MeasurementModel(0.6, 0.6, 0.3, n=[1, 0, 0])
        assert not povm_positivity(m).admissible
        assert (0.6 + 0.3) ** 2 + 0.6**2 == pytest.approx(1.17)

    @settings(max_examples=300)
    @given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
    def test_y_direction_rule(self, gx, gz, gxz):
        ok = povm_positivity(y_model(gx, gz, gxz)).admissible
        total = gx**2 + gz**2 + gxz**2
        if abs(total - 1) > 1e-9:
            assert ok == (total <= 1)

    @settings(max_examples=300)
    @given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
    def test_x_direction_rule(self, gx, gz, gxz):
        ok = povm_positivity(MeasurementModel(gx, gz, gxz, n=[1, 0, 0])).admissible
        total = (gx + gxz) ** 2 + gz**2
        if abs(total - 1) > 1e-9:
            assert ok == (total <= 1)

    def test_closed_form_matches_eigenvalues(self, rng):
        for _ in range(200):
            n = rng.normal(size=3)
            g = rng.random(3)
            m = MeasurementModel(*g, n=n / np.linalg.norm(n))
            closed = 0.25 * (1 - povm_bloch_lengths(m).max())
            brute = min(np.linalg.eigvalsh(e)[0] for e in povm_elements(m).reshape(4, 2, 2))
            assert povm_positivity(m).worst_eigenvalue == pytest.approx(closed, abs=1e-15)
            assert closed == pytest.approx(brute, abs=1e-14)


@given(bloch_vectors(), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_admissible_models_give_probabilities(s, gx, gz, gxz):
    m = y_model(gx, gz, gxz)
    if povm_positivity(m).admissible:
        assert joint_statistics(s, m).min_entry() >= -1e-12


@given(bloch_vectors(), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_moment_round_trip(s, gx, gz, gxz):
    m = y_model(gx, gz, gxz)
    if not povm_positivity(m).admissible:
        return
    t = moments(joint_statistics(s, m))
    expected = (gx * s[0], gz * s[2], gxz * s[1])
    assert np.max(np.abs(np.array(t.as_tuple()) - expected)) <= 1e-14
