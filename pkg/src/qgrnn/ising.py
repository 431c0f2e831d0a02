"""Ising graph parameters, dense Hamiltonian construction, and exact time evolution.

The graph Hamiltonian is
    H = sum_{(i,j)} w_ij Z_i Z_j + sum_i w_i Z_i + sum_i X_i
with edge weights w_ij, node weights w_i, and a fixed unit transverse field.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .statevector import StateVector

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class IsingGraph:
    """Node and edge weights of the graph Hamiltonian.

    ``edge_weights`` maps unordered pairs (i, j) with i < j to couplings;
    missing pairs carry zero coupling.
    """

    node_count: int
    node_weights: np.ndarray
    edge_weights: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError("node_count must be >= 1")
        weights = np.asarray(self.node_weights, dtype=np.float64)
        if weights.shape != (self.node_count,):
            raise ValueError(
                f"expected {self.node_count} node weights, got shape {weights.shape}"
            )
        object.__setattr__(self, "node_weights", weights)
        for pair in self.edge_weights:
            i, j = pair
            if not (0 <= i < j < self.node_count):
                raise ValueError(f"invalid edge {pair}: require 0 <= i < j < node_count")


def complete_pairs(node_count: int) -> list[tuple[int, int]]:
    """All node pairs (i, j), i < j, in lexicographic order."""
    return [(i, j) for i in range(node_count) for j in range(i + 1, node_count)]


def random_complete_graph(
    node_weights, rng: np.random.Generator, low: float = -1.0, high: float = 1.0
) -> IsingGraph:
    """Complete-topology graph with the given node weights and uniform random couplings."""
    weights = np.asarray(node_weights, dtype=np.float64)
    n = weights.size
    edges = {pair: float(rng.uniform(low, high)) for pair in complete_pairs(n)}
    return IsingGraph(n, weights, edges)


@dataclass(frozen=True)
class TimeEvolvedSample:
    """A (time, state) pair produced by evolving one initial state."""

    time: float
    state: StateVector

    def __post_init__(self):
        if self.time < 0:
            raise ValueError(f"time must be >= 0, got {self.time}")


def _z_columns(node_count: int) -> np.ndarray:
    """(2^n, n) matrix of Z eigenvalues: +1 for bit 0, -1 for bit 1."""
    idx = np.arange(1 << node_count)
    bits = (idx[:, None] >> np.arange(node_count)) & 1
    return 1.0 - 2.0 * bits


def hamiltonian_diagonal(graph: IsingGraph) -> np.ndarray:
    """Diagonal of the ZZ + Z part of the Hamiltonian, as a real vector."""
    z = _z_columns(graph.node_count)
    diag = z @ graph.node_weights
    for (i, j), w in graph.edge_weights.items():
        diag += w * z[:, i] * z[:, j]
    return diag


def build_hamiltonian(graph: IsingGraph) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the graph Hamiltonian.

    ZZ and Z terms populate the diagonal; the unit transverse field adds a
    symmetric 1 between basis states differing in exactly one bit.
    """
    dim = 1 << graph.node_count
    h = np.zeros((dim, dim), dtype=np.complex128)
    h[np.diag_indices(dim)] = hamiltonian_diagonal(graph)
    idx = np.arange(dim)
    for q in range(graph.node_count):
        h[idx, idx ^ (1 << q)] += 1.0
    return h


def hermitian_eigendecompose(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if np.max(np.abs(h - h.conj().T)) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian within tolerance")
    return np.linalg.eigh(h)


class ExactEvolver:
    """Applies U(t) = exp(-i t H) exactly, reusing one eigendecomposition."""

    def __init__(self, h: np.ndarray):
        self.eigenvalues, self.eigenvectors = hermitian_eigendecompose(h)
        self.dim = self.eigenvalues.size

    def evolve(self, initial: StateVector, t: float) -> StateVector:
        if initial.dim != self.dim:
            raise ValueError(f"state dimension {initial.dim} != Hamiltonian dimension {self.dim}")
        if t < 0:
            raise ValueError(f"time must be >= 0, got {t}")
        coeffs = self.eigenvectors.conj().T @ initial.amplitudes
        out = self.eigenvectors @ (np.exp(-1j * self.eigenvalues * t) * coeffs)
        return StateVector(initial.qubit_count, out)


def evolve_exact(h: np.ndarray, initial: StateVector, t: float) -> StateVector:
    """exp(-i t H) |initial> via eigendecomposition."""
    return ExactEvolver(h).evolve(initial, t)


def sample_evolution(graph: IsingGraph, initial: StateVector, times) -> list[TimeEvolvedSample]:
    """Evolve one initial state to every requested time under the graph Hamiltonian."""
    if initial.qubit_count != graph.node_count:
        raise ValueError(
            f"initial state has {initial.qubit_count} qubits, graph has {graph.node_count} nodes"
        )
    times = [float(t) for t in times]
    if any(t < 0 for t in times):
        raise ValueError("times must be >= 0")
    evolver = ExactEvolver(build_hamiltonian(graph))
    return [TimeEvolvedSample(t, evolver.evolve(initial, t)) for t in times]


def draw_times(count: int, t_max: float, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` evolution times uniformly from (0, t_max], excluding 0."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if t_max <= 0:
        raise ValueError("t_max must be > 0")
    return t_max * (1.0 - rng.random(count))
