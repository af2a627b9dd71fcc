import math

import numpy as np
import pytest

import stateest


def test_project_diagonal_example():
    matrix, steps, distance = stateest.project(np.diag([0.5, -0.5, 1.0]).astype(complex))
    assert steps == 1
    assert np.allclose(matrix, np.diag([0.25, 0.0, 0.75]), atol=1e-15)
    assert distance == pytest.approx(math.sqrt(0.375))


def test_project_rejects_wrong_trace():
    with pytest.raises(stateest.DomainError):
        stateest.project(np.eye(2, dtype=complex))
    with pytest.raises(ValueError):
        stateest.project(np.array([[1.0, 0.3], [0.2, 0.0]], dtype=complex))


def test_simplex():
    values, steps = stateest.project_simplex([0.5, -0.5, 1.0])
    assert values == pytest.approx([0.25, 0.0, 0.75])
    assert steps == 1


def test_eigh_matches_numpy():
    rng = np.random.default_rng(3)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = (g + g.conj().T) / 2
    values, vectors = stateest.eigh(h)
    assert np.allclose(values, np.sort(np.linalg.eigvalsh(h))[::-1], atol=1e-12)
    assert np.allclose(vectors @ np.diag(values) @ vectors.conj().T, h, atol=1e-12)


def test_single_shot_estimate():
    labels = stateest.plan_outcomes(2)
    assert sorted(labels) == ["X12", "Y12", "Z11"]
    result = stateest.estimate(2, {"Z11": [0, 1], "X12": [1, 0], "Y12": [1, 0]})
    expected = np.array([[0, 0.5 + 0.5j], [0.5 - 0.5j, 1]])
    assert np.allclose(result["unconstrained"], expected, atol=1e-15)
    assert not result["unconstrained_psd"]
    assert result["constrained_psd"]
    assert np.linalg.det(result["unconstrained"]).real == pytest.approx(-0.5)


def test_exact_frequencies_recover_state():
    rho = np.array([[0.2, 0.1 - 0.05j, 0], [0.1 + 0.05j, 0.3, 0.1j], [0, -0.1j, 0.5]])
    probs = stateest.outcome_probabilities(rho)
    r = 10**6
    counts = {label: [round(p * r) for p in ps] for label, ps in probs.items()}
    result = stateest.estimate(3, counts)
    assert np.allclose(result["unconstrained"], rho, atol=1e-6)


def test_qubit_schemes():
    result = stateest.estimate_qubit("standard", [[12, 6, 9, 4, 10, 7]])
    assert result["theta_hat"] == pytest.approx([0.5, -0.25, 0.125])
    result = stateest.estimate_qubit("three-direction", [[10, 0], [5, 5], [5, 5]])
    assert result["theta_hat"] == pytest.approx([1.0, 0.0, 0.0])
    with pytest.raises(stateest.UnsupportedInput):
        stateest.estimate_qubit("bogus", [[1]])


def test_mse_formulas():
    assert np.allclose(stateest.mse("comp", [0, 0, 0], 300), 0.01 * np.eye(3))
    assert np.allclose(stateest.mse("standard", [1, 0, 0], 100), np.diag([0.02, 0.03, 0.03]))
    assert np.allclose(stateest.mse("three-direction", [0, 0, 0], 300), 0.01 * np.eye(3))
    diff, min_eig, psd = stateest.compare_standard_vs_complementary([0.3, 0.1, -0.2], 30)
    assert psd and min_eig >= -1e-15
    t_comp, t_min, comp_better = stateest.compare_traces([0.2, 0.2, 0.2], 30)
    assert comp_better and t_comp <= t_min


def test_ball_average():
    matrix, det = stateest.average_mse_over_ball(np.eye(3))
    assert stateest.ball_average_factor() == pytest.approx(0.8)
    assert np.allclose(matrix, 0.8 * np.eye(3))
    assert det == pytest.approx(0.8**3)


def test_empirical_mse_close_to_formula():
    estimate, stderr = stateest.empirical_mse("standard", [0.2, 0.1, 0.3], 30, 20000, seed=7)
    exact = stateest.mse("standard", [0.2, 0.1, 0.3], 30)
    assert np.all(np.abs(estimate - exact) <= 5 * stderr + 1e-12)


def test_simulate_is_deterministic_across_workers():
    kwargs = dict(schedule=[1, 10, 100], metrics=["hs-constrained", "psd-fraction"], trials=200, seed=11)
    a = stateest.simulate([0.3, -0.2, 0.6], workers=1, **kwargs)
    b = stateest.simulate([0.3, -0.2, 0.6], workers=4, **kwargs)
    assert a == b
    assert [row["n"] for row in a[::2]] == [3, 30, 300]
    spectrum = stateest.simulate({"random_spectrum": [0.2, 0.3, 0.5]}, [5], ["det-mean"], trials=10)
    assert spectrum[0]["metric"] == "det-mean"


def test_bloch_round_trip():
    theta = [0.1, -0.4, 0.7]
    assert stateest.matrix_to_bloch(stateest.bloch_to_matrix(theta)) == pytest.approx(theta)
    rho = stateest.bloch_to_matrix([0, 0, 1])
    assert stateest.fidelity(rho, rho) == pytest.approx(1.0)
    assert stateest.hs_distance(rho, rho) == 0.0
