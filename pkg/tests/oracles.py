"""Independent brute-force oracles used only by the tests.

Everything here recomputes quantities from first principles (explicit kron
products, dense matrix algebra, replayed scheduler state machines) so the
library paths under test are never on both sides of an assertion.
"""

from __future__ import annotations

import numpy as np

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_chain(single_qubit_ops: list[np.ndarray]) -> np.ndarray:
    total = single_qubit_ops[0]
    for op in single_qubit_ops[1:]:
        total = np.kron(total, op)
    return total


def embed_gate(matrix: np.ndarray, qubit: int, n: int) -> np.ndarray:
    ops = [PAULI["I"]] * n
    ops[qubit] = matrix
    return kron_chain(ops)


def dense_pauli_string(factors, n: int) -> np.ndarray:
    ops = [PAULI["I"]] * n
    for qubit, axis in dict(factors).items():
        ops[qubit] = PAULI[axis]
    return kron_chain(ops)


def dense_observable(obs, n: int) -> np.ndarray:
    """Dense matrix of a PauliSum/Projector via explicit kron products."""
    if hasattr(obs, "target"):
        return -np.outer(obs.target, np.conj(obs.target))
    total = np.zeros((1 << n, 1 << n), dtype=complex)
    for term in obs.terms:
        total += term.coeff * dense_pauli_string(term.factors, n)
    return total


def cz_matrix(a: int, b: int, n: int) -> np.ndarray:
    dim = 1 << n
    diag = np.ones(dim, dtype=complex)
    for idx in range(dim):
        if (idx >> (n - 1 - a)) & 1 and (idx >> (n - 1 - b)) & 1:
            diag[idx] = -1.0
    return np.diag(diag)


def cnot_matrix(control: int, target: int, n: int) -> np.ndarray:
    dim = 1 << n
    mat = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        row = col
        if (col >> (n - 1 - control)) & 1:
            row = col ^ (1 << (n - 1 - target))
        mat[row, col] = 1.0
    return mat


def entangler_matrix(spec, n: int) -> np.ndarray:
    total = np.eye(1 << n, dtype=complex)
    for sub in spec.sublayers:
        for a, b in sub:
            gate = cz_matrix(a, b, n) if spec.kind == "cz" else cnot_matrix(a, b, n)
            total = gate @ total
    return total


def circuit_unitary(circuit, gate_matrix_fn) -> np.ndarray:
    """Full 2^n x 2^n unitary from explicit matrix products."""
    n = circuit.n_qubits
    total = np.eye(1 << n, dtype=complex)
    for layer in range(circuit.n_layers):
        for qubit in range(n):
            gate = circuit.gates[layer * n + qubit]
            total = embed_gate(gate_matrix_fn(gate), qubit, n) @ total
        if circuit.has_entangler_after(layer):
            total = entangler_matrix(circuit.entangler, n) @ total
    return total


def dense_expectation(circuit, obs, gate_matrix_fn) -> float:
    n = circuit.n_qubits
    unitary = circuit_unitary(circuit, gate_matrix_fn)
    zero = np.zeros(1 << n, dtype=complex)
    zero[0] = 1.0
    state = unitary @ zero
    return float(np.vdot(state, dense_observable(obs, n) @ state).real)


def power_iteration_ground(matrix: np.ndarray, iters: int = 20000, seed: int = 0) -> float:
    """Lowest eigenvalue via shifted power iteration; safe for degenerate spectra."""
    dim = matrix.shape[0]
    shift = float(np.abs(matrix).sum(axis=1).max()) + 1.0  # Gershgorin bound
    shifted = shift * np.eye(dim) - matrix
    rng = np.random.default_rng(seed)
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    vec /= np.linalg.norm(vec)
    for _ in range(iters):
        vec = shifted @ vec
        vec /= np.linalg.norm(vec)
    return shift - float(np.vdot(vec, shifted @ vec).real)


def gate_profile_costs(circuit, gate_index: int, obs, axis: str, thetas: np.ndarray) -> np.ndarray:
    """Direct cost of the circuit at many angles for one fixed-axis gate.

    Builds the dense sandwich <psi| U(theta)^dag M_eff U(theta) |psi> with the
    circuit before/after the gate multiplied out explicitly, then evaluates
    every angle in one vectorized expression.
    """
    n = circuit.n_qubits
    dim = 1 << n
    before = np.eye(dim, dtype=complex)
    after = np.eye(dim, dtype=complex)
    for d in range(circuit.n_gates):
        from vqcopt.circuit import gate_unitary  # matrices only; application stays dense here

        embedded = embed_gate(gate_unitary(circuit.gates[d]), d % n, n)
        if d < gate_index:
            before = embedded @ before
        elif d > gate_index:
            after = embedded @ after
        if d % n == n - 1 and circuit.has_entangler_after(d // n):
            w = entangler_matrix(circuit.entangler, n)
            if d < gate_index:
                before = w @ before
            else:
                after = w @ after
    zero = np.zeros(dim, dtype=complex)
    zero[0] = 1.0
    psi = before @ zero
    m_eff = after.conj().T @ dense_observable(obs, n) @ after
    identity_part = psi
    sigma_part = embed_gate(PAULI[axis.upper()], gate_index % n, n) @ psi
    half = thetas[:, None] / 2.0
    states = np.cos(half) * identity_part[None, :] - 1j * np.sin(half) * sigma_part[None, :]
    return np.einsum("bi,ij,bj->b", np.conj(states), m_eff, states).real


def quantile_sorted(values, fraction: float) -> float:
    """Linear-interpolation quantile straight from the sorted definition."""
    ordered = sorted(values)
    if len(ordered) == 1:
        return float(ordered[0])
    position = fraction * (len(ordered) - 1)
    low = int(np.floor(position))
    high = int(np.ceil(position))
    weight = position - low
    return float(ordered[low] * (1.0 - weight) + ordered[high] * weight)


def replay_early_stopping(costs, threshold: float, patience: int):
    """Gate index (1-based) where the patience rule fires, or None."""
    counter = 0
    prev = None
    for index, cost in enumerate(costs, start=1):
        if prev is not None and abs(prev - cost) < threshold:
            counter += 1
            if counter == patience:
                return index
        prev = cost
    return None


def replay_cost_average(costs, threshold: float, window: int):
    """Gate index (1-based) where the windowed-average rule fires, or None."""
    history: list[float] = []
    for index, cost in enumerate(costs, start=1):
        if len(history) >= window:
            average = sum(history[-window:]) / window
            if abs(average - cost) < threshold:
                return index
        history.append(cost)
    return None
