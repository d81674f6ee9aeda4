"""Complementarity inequalities for noisy joint measurements of a qubit."""

from .classical import (
    InequalityReport,
    ReconstructedDistribution,
    compact_inequality,
    equivalence_check,
    forward_model,
    inequality_family,
    invert_joint,
    mu_kernel,
    nonclassicality_factor,
    reconstruct_p_lambda,
    state_form_inequality,
    violation_search,
)
from .measurement import (
    MeasurementModel,
    MomentTriple,
    joint_statistics,
    marginals,
    moments,
    povm_elements,
    povm_positivity,
)
from .detector import (
    detector_kernel,
    inverted_kernel,
    kernel_factorization,
    kernel_positivity,
    povm_factorized_region,
    q_like_distribution,
)
from .qubit import BlochState, bloch_to_density, expectation, min_eigenvalue
from .sampling import EmpiricalCounts, estimate, sample
from .tables import JointDistribution
from .young import YoungSetting, full_quantum_joint, gammas_from_angles, young_inequality

__version__ = "0.1.0"
