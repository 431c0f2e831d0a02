"""Trotterized recurrent circuit: alternating diagonal (ZZ + Z) and transverse (X) exponentials.

One layer with step d applies, in order, ZZ(d*w_ij) on every pair, RZ(2*d*w_i)
on every node, then RX(2*d) on every node; that is exp(-i d H_transverse)
composed after exp(-i d H_diagonal). Repeating the layer t/d times
approximates evolution under the full graph Hamiltonian.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .ising import IsingGraph, complete_pairs, _z_columns
from .statevector import StateVector, apply_rx, apply_rz, apply_zz, rx_matrix


@dataclass(frozen=True)
class AnsatzParams:
    """Learnable coefficients over a complete graph.

    Flattened parameter order is fixed for gradient indexing: all edge
    parameters in lexicographic pair order, then all node parameters in
    ascending node order.
    """

    node_count: int
    edge_params: np.ndarray
    node_params: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edge_params, dtype=np.float64)
        nodes = np.asarray(self.node_params, dtype=np.float64)
        n = self.node_count
        if nodes.shape != (n,):
            raise ValueError(f"expected {n} node params, got shape {nodes.shape}")
        if edges.shape != (n * (n - 1) // 2,):
            raise ValueError(
                f"expected {n * (n - 1) // 2} edge params for {n} nodes, got shape {edges.shape}"
            )
        object.__setattr__(self, "edge_params", edges)
        object.__setattr__(self, "node_params", nodes)

    def flatten(self) -> np.ndarray:
        return np.concatenate([self.edge_params, self.node_params])

    @classmethod
    def from_flat(cls, node_count: int, flat) -> "AnsatzParams":
        flat = np.asarray(flat, dtype=np.float64)
        n_edges = node_count * (node_count - 1) // 2
        if flat.shape != (n_edges + node_count,):
            raise ValueError(f"expected {n_edges + node_count} parameters, got shape {flat.shape}")
        return cls(node_count, flat[:n_edges], flat[n_edges:])

    def to_graph(self) -> IsingGraph:
        edges = {
            pair: float(w)
            for pair, w in zip(complete_pairs(self.node_count), self.edge_params)
        }
        return IsingGraph(self.node_count, self.node_params.copy(), edges)

    @classmethod
    def from_graph(cls, graph: IsingGraph) -> "AnsatzParams":
        edges = np.array(
            [graph.edge_weights.get(pair, 0.0) for pair in complete_pairs(graph.node_count)]
        )
        return cls(graph.node_count, edges, graph.node_weights.copy())


def apply_trotter_layer(state: StateVector, params: AnsatzParams, delta: float) -> StateVector:
    """One first-order splitting layer, gate by gate."""
    if state.qubit_count != params.node_count:
        raise ValueError(
            f"state has {state.qubit_count} qubits, params describe {params.node_count} nodes"
        )
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    for pair, w in zip(complete_pairs(params.node_count), params.edge_params):
        state = apply_zz(state, pair[0], pair[1], delta * w)
    for q, w in enumerate(params.node_params):
        state = apply_rz(state, q, 2.0 * delta * w)
    for q in range(params.node_count):
        state = apply_rx(state, q, 2.0 * delta)
    return state


def layer_count(t: float, delta: float) -> int:
    """Number of layers D = round(t / delta), at least 1."""
    if t <= 0:
        raise ValueError(f"t must be > 0, got {t}")
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    return max(1, int(round(t / delta)))


def coupling_columns(node_count: int) -> np.ndarray:
    """(2^n, P) diagonal patterns of each flattened parameter's Hamiltonian term.

    Column k holds the basis-diagonal of the k-th term (Z_i Z_j products for
    edge parameters, then Z_i for node parameters), so the diagonal part of
    the Hamiltonian for a flat parameter vector p is simply ``columns @ p``.
    """
    z = _z_columns(node_count)
    cols = [z[:, i] * z[:, j] for i, j in complete_pairs(node_count)]
    cols.extend(z[:, i] for i in range(node_count))
    return np.column_stack(cols)


def transverse_layer_matrix(node_count: int, delta: float) -> np.ndarray:
    """Dense matrix of exp(-i delta sum_i X_i) = RX(2*delta) on every qubit."""
    return reduce(np.kron, [rx_matrix(2.0 * delta)] * node_count)


def apply_qgrnn(state: StateVector, params: AnsatzParams, t: float, delta: float) -> StateVector:
    """Apply D = round(t/delta) layers with uniform effective step t/D.

    The layers tile [0, t] exactly; composition is mathematically identical
    to repeated apply_trotter_layer but precomputes the diagonal phase vector
    and the transverse-layer matrix once, which is what makes training loops
    affordable.
    """
    if state.qubit_count != params.node_count:
        raise ValueError(
            f"state has {state.qubit_count} qubits, params describe {params.node_count} nodes"
        )
    depth = layer_count(t, delta)
    d_eff = t / depth
    phases = np.exp(-1j * d_eff * (coupling_columns(params.node_count) @ params.flatten()))
    transverse = transverse_layer_matrix(params.node_count, d_eff)
    psi = state.amplitudes
    for _ in range(depth):
        psi = transverse @ (phases * psi)
    return StateVector(state.qubit_count, psi)
