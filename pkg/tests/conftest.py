import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from complab.measurement import MeasurementModel


def random_state(rng, max_norm=1.0):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v) * max_norm * rng.random() ** (1 / 3)


def random_sphere_gammas(rng, radius=None):
    """Positive gamma triple with ``gx**2 + gz**2 + gxz**2 <= 1``."""
    g = np.abs(rng.normal(size=3)) + 1e-9
    r = rng.random() if radius is None else radius
    return g / np.linalg.norm(g) * max(r, 1e-6)


def random_admissible_model(rng):
    gx, gz, gxz = random_sphere_gammas(rng)
    return MeasurementModel(gx, gz, gxz)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


unit_floats = st.floats(-1.0, 1.0, allow_nan=False)
gamma_floats = st.floats(0.01, 1.0, allow_nan=False)


@st.composite
def bloch_vectors(draw):
    v = np.array([draw(unit_floats) for _ in range(3)])
    n = np.linalg.norm(v)
    return v / n if n > 1 else v


def pytest_terminal_summary(terminalreporter):
    lines = getattr(sys.modules.get("test_acceptance"), "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
