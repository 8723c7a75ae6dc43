import numpy as np
import pytest

from holofock.gates import cnot_gate, gate_distance, x_gate
from holofock.synthesis import LoopAnsatz, cnot_from_x, synthesize


def test_ansatz_loop_closed_and_bounded():
    ans = LoopAnsatz(harmonics=3, amplitude=1.0, segments=32)
    rng = np.random.default_rng(0)
    w = rng.uniform(-ans.coefficient_bound, ans.coefficient_bound, ans.n_params)
    loop = ans.loop(w)
    assert loop.waypoints[0] == loop.waypoints[-1]
    reals = np.array([p.as_real_vector() for p in loop.waypoints])
    assert np.abs(reals).max() <= ans.amplitude + 1e-12
    assert np.abs(reals[0]).max() == 0.0


def test_identity_target_trivial():
    res = synthesize(np.eye(4, dtype=complex), budget=150, seed=0)
    assert res.history[0] == pytest.approx(0.0, abs=1e-12)
    assert res.best_distance < 1e-10
    assert res.iterations <= 150


def test_history_non_increasing_and_deterministic():
    x = x_gate()
    res1 = synthesize(x, budget=220, seed=3)
    res2 = synthesize(x, budget=220, seed=3)
    assert res1.history == res2.history
    assert res1.best_distance == res2.best_distance
    assert all(a >= b - 1e-15 for a, b in zip(res1.history, res1.history[1:]))


def test_best_distance_reproducible_from_loop():
    from holofock.connection import ClosedFormSource
    from holofock.holonomy import transport

    x = x_gate()
    res = synthesize(x, budget=220, seed=1)
    redo = gate_distance(
        transport(res.best_loop, ClosedFormSource("full")).gamma, x)
    assert abs(redo - res.best_distance) < 1e-10


def test_budget_validation():
    with pytest.raises(ValueError):
        synthesize(x_gate(), budget=50)
    with pytest.raises(ValueError):
        synthesize(np.eye(3, dtype=complex))


def test_cnot_from_x_exact_case():
    # with the exact phase-flip holonomy the conjugation is exactly C-NOT
    from holofock.gates import hadamard_conjugation

    exact = hadamard_conjugation(x_gate())
    assert np.abs(exact - cnot_gate()).max() < 1e-14


def test_cnot_distance_matches_x_distance():
    res = synthesize(x_gate(), budget=220, seed=2)
    conj = cnot_from_x(res)
    assert abs(conj["distance_to_cnot"] - res.best_distance) < 1e-12


def test_cma_method_runs():
    res = synthesize(x_gate(), budget=150, seed=0, method="cma")
    assert res.iterations <= 150
    assert res.history[0] == pytest.approx(np.sqrt(0.5), abs=1e-12)
    with pytest.raises(ValueError):
        synthesize(x_gate(), budget=150, method="nope")
