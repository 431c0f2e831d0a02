import numpy as np
import pytest
import scipy.linalg

from qgrnn.ansatz import (
    AnsatzParams,
    apply_qgrnn,
    apply_trotter_layer,
    coupling_columns,
    layer_count,
)
from qgrnn.ising import build_hamiltonian, evolve_exact, random_complete_graph
from qgrnn.statevector import StateVector, apply_rx, random_state

from conftest import fidelity, split_diagonal_transverse


def random_params(n, seed, node_scale=5.0):
    rng = np.random.default_rng(seed)
    return AnsatzParams(
        n, rng.uniform(-1, 1, n * (n - 1) // 2), rng.uniform(0, node_scale, n)
    )


class TestAnsatzParams:
    def test_flat_order_edges_then_nodes(self):
        params = AnsatzParams(3, [1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
        assert np.array_equal(params.flatten(), [1, 2, 3, 4, 5, 6])

    def test_from_flat_round_trip(self):
        params = random_params(4, 0)
        again = AnsatzParams.from_flat(4, params.flatten())
        assert np.array_equal(again.edge_params, params.edge_params)
        assert np.array_equal(again.node_params, params.node_params)

    def test_wrong_lengths_rejected(self):
        with pytest.raises(ValueError):
            AnsatzParams(3, [1.0, 2.0], [0.0, 0.0, 0.0])
        with pytest.raises(ValueError):
            AnsatzParams.from_flat(3, np.zeros(5))

    def test_graph_round_trip(self):
        params = random_params(3, 1)
        graph = params.to_graph()
        assert graph.edge_weights[(0, 1)] == params.edge_params[0]
        assert graph.edge_weights[(1, 2)] == params.edge_params[2]
        again = AnsatzParams.from_graph(graph)
        assert np.allclose(again.flatten(), params.flatten())

    def test_missing_edges_become_zero(self):
        from qgrnn.ising import IsingGraph

        graph = IsingGraph(3, [1.0, 2.0, 3.0], {(0, 2): 0.5})
        params = AnsatzParams.from_graph(graph)
        assert np.array_equal(params.edge_params, [0.0, 0.5, 0.0])


class TestTrotterLayer:
    def test_zero_params_is_pure_transverse(self):
        state = random_state(3, 3)
        params = AnsatzParams(3, np.zeros(3), np.zeros(3))
        out = apply_trotter_layer(state, params, 0.13)
        expected = state
        for q in range(3):
            expected = apply_rx(expected, q, 2 * 0.13)
        assert np.allclose(out.amplitudes, expected.amplitudes, atol=1e-12)

    def test_unitary(self):
        out = apply_trotter_layer(random_state(3, 4), random_params(3, 5), 0.01)
        assert abs(np.linalg.norm(out.amplitudes) - 1.0) < 1e-12

    def test_matches_matrix_exponential_oracle(self):
        # layer applies the diagonal exponential first, then the transverse one
        params = random_params(3, 6)
        state = random_state(3, 7)
        delta = 0.05
        diagonal, transverse = split_diagonal_transverse(
            build_hamiltonian(params.to_graph())
        )
        expected = (
            scipy.linalg.expm(-1j * delta * transverse)
            @ scipy.linalg.expm(-1j * delta * diagonal)
            @ state.amplitudes
        )
        out = apply_trotter_layer(state, params, delta)
        assert np.max(np.abs(out.amplitudes - expected)) <= 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply_trotter_layer(random_state(2, 0), random_params(3, 0), 0.01)

    def test_nonpositive_delta(self):
        with pytest.raises(ValueError):
            apply_trotter_layer(random_state(3, 0), random_params(3, 0), 0.0)


class TestLayerCount:
    def test_exact_division(self):
        assert layer_count(0.5, 0.01) == 50

    def test_single_layer(self):
        assert layer_count(0.01, 0.01) == 1
        assert layer_count(0.004, 0.01) == 1

    def test_nonpositive_time(self):
        with pytest.raises(ValueError):
            layer_count(0.0, 0.01)


class TestApplyQgrnn:
    def test_single_layer_when_t_equals_delta(self):
        params = random_params(3, 8)
        state = random_state(3, 9)
        via_qgrnn = apply_qgrnn(state, params, 0.01, 0.01)
        via_layer = apply_trotter_layer(state, params, 0.01)
        assert np.allclose(via_qgrnn.amplitudes, via_layer.amplitudes, atol=1e-12)

    def test_equals_literal_layer_composition(self):
        params = random_params(3, 10)
        state = random_state(3, 11)
        t, delta = 0.37, 0.01
        depth = layer_count(t, delta)
        d_eff = t / depth
        literal = state
        for _ in range(depth):
            literal = apply_trotter_layer(literal, params, d_eff)
        fast = apply_qgrnn(state, params, t, delta)
        assert np.max(np.abs(fast.amplitudes - literal.amplitudes)) <= 1e-9

    def test_converges_to_exact_evolution(self):
        rng = np.random.default_rng(12)
        graph = random_complete_graph(rng.uniform(0, 5, 3), rng)
        params = AnsatzParams.from_graph(graph)
        state = random_state(3, 13)
        exact = evolve_exact(build_hamiltonian(graph), state, 0.5)
        approx = apply_qgrnn(state, params, 0.5, 1e-4)
        assert fidelity(approx.amplitudes, exact.amplitudes) >= 1 - 1e-6

    def test_nonpositive_time(self):
        with pytest.raises(ValueError):
            apply_qgrnn(random_state(2, 0), random_params(2, 0), -0.1, 0.01)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply_qgrnn(random_state(2, 0), random_params(3, 0), 0.1, 0.01)


class TestTrotterConvergence:
    def test_deficit_decreases_monotonically(self):
        rng = np.random.default_rng(14)
        graph = random_complete_graph(rng.uniform(0, 5, 4), rng)
        params = AnsatzParams.from_graph(graph)
        state = random_state(4, 15)
        exact = evolve_exact(build_hamiltonian(graph), state, 0.5)
        deficits = []
        for delta in (0.04, 0.02, 0.01, 0.005):
            approx = apply_qgrnn(state, params, 0.5, delta)
            deficits.append(1.0 - fidelity(approx.amplitudes, exact.amplitudes))
        assert all(a - b > -1e-12 for a, b in zip(deficits, deficits[1:]))

    def test_high_fidelity_at_default_step(self):
        for n in (3, 6):
            rng = np.random.default_rng(100 + n)
            graph = random_complete_graph(rng.uniform(0, 5, n), rng)
            params = AnsatzParams.from_graph(graph)
            state = random_state(n, 200 + n)
            exact = evolve_exact(build_hamiltonian(graph), state, 0.5)
            approx = apply_qgrnn(state, params, 0.5, 0.01)
            assert fidelity(approx.amplitudes, exact.amplitudes) >= 0.999

    def test_deterministic_and_norm_preserving(self):
        params = random_params(3, 16)
        state = random_state(3, 17)
        a = apply_qgrnn(state, params, 0.5, 0.01)  # 50 layers
        b = apply_qgrnn(state, params, 0.5, 0.01)
        assert np.array_equal(a.amplitudes, b.amplitudes)
        assert abs(np.linalg.norm(a.amplitudes) - 1.0) < 1e-9


class TestCouplingColumns:
    def test_diagonal_reconstruction(self):
        params = random_params(3, 18)
        diagonal, _ = split_diagonal_transverse(build_hamiltonian(params.to_graph()))
        assert np.allclose(
            coupling_columns(3) @ params.flatten(), np.real(np.diag(diagonal)), atol=1e-12
        )
