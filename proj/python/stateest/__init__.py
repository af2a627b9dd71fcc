"""Quantum state estimation from finite measurement records."""

from ._core import (
    ConvergenceError,
    DomainError,
    UnsupportedInput,
    average_mse_over_ball,
    ball_average_factor,
    bloch_to_matrix,
    compare_standard_vs_complementary,
    compare_traces,
    eigh,
    empirical_mse,
    estimate,
    estimate_qubit,
    fidelity,
    hs_distance,
    matrix_to_bloch,
    mse,
    outcome_probabilities,
    plan_outcomes,
    project,
    project_simplex,
    simulate,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
