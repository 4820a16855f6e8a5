"""Dense state-vector simulation: gates, entanglers, and expectation values.

Conventions
-----------
Qubit 0 is the most significant bit of the amplitude index, so basis state
|q0 q1 ... q_{n-1}> lives at index q0*2^(n-1) + ... + q_{n-1}. All kernels
accept arrays whose last axis is the state dimension; leading axes are
treated as a batch, which is how the circuit engine evaluates several
candidate gate parameters in one pass.

A Pauli string acts on a basis state as P|b> = phase(b) |b ^ xmask>, so each
string compiles to an index permutation plus a phase vector; expectation
values are then a handful of vectorized operations per term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import ConfigError, NumericError

MAX_QUBITS = 20

_PAULI_AXES = ("X", "Y", "Z")


# ---------------------------------------------------------------------------
# State vector


@dataclass
class StateVector:
    """2^n complex amplitudes owned by a single run; qubit 0 is the MSB."""

    n_qubits: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())


def init_zero_state(n_qubits: int) -> StateVector:
    """Prepare |0...0> on n_qubits qubits."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ConfigError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def _zero_amplitudes(n_qubits: int) -> np.ndarray:
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return amps


# ---------------------------------------------------------------------------
# Gate kernels (batch-aware: last axis is the state dimension)


def _apply_1q(states: np.ndarray, qubit: int, mat: np.ndarray, n: int) -> np.ndarray:
    right = 1 << (n - 1 - qubit)
    shape = states.shape
    psi = states.reshape(-1, 2, right)
    a = psi[:, 0, :]
    b = psi[:, 1, :]
    out = np.empty_like(psi)
    out[:, 0, :] = mat[0, 0] * a + mat[0, 1] * b
    out[:, 1, :] = mat[1, 0] * a + mat[1, 1] * b
    return out.reshape(shape)


def _apply_1q_multi(states: np.ndarray, qubit: int, mats: np.ndarray, n: int) -> np.ndarray:
    """Apply a different 2x2 matrix to each batch row of `states` (B, 2^n)."""
    batch = states.shape[0]
    right = 1 << (n - 1 - qubit)
    psi = states.reshape(batch, -1, 2, right)
    out = np.einsum("bij,bljr->blir", mats, psi)
    return out.reshape(batch, -1)


def _apply_cz(states: np.ndarray, q1: int, q2: int, n: int) -> None:
    """In-place CZ on the pair (q1, q2)."""
    i, j = sorted((q1, q2))
    right = 1 << (n - 1 - j)
    mid = 1 << (j - i - 1)
    psi = states.reshape(-1, 2, mid, 2, right)
    psi[:, 1, :, 1, :] *= -1.0


def _apply_cnot(states: np.ndarray, control: int, target: int, n: int) -> None:
    """In-place CNOT with the given control and target qubits."""
    i, j = sorted((control, target))
    right = 1 << (n - 1 - j)
    mid = 1 << (j - i - 1)
    psi = states.reshape(-1, 2, mid, 2, right)
    if control < target:
        lo = psi[:, 1, :, 0, :].copy()
        psi[:, 1, :, 0, :] = psi[:, 1, :, 1, :]
        psi[:, 1, :, 1, :] = lo
    else:
        lo = psi[:, 0, :, 1, :].copy()
        psi[:, 0, :, 1, :] = psi[:, 1, :, 1, :]
        psi[:, 1, :, 1, :] = lo


def _is_unitary(mat: np.ndarray, tol: float = 1e-10) -> bool:
    mat = np.asarray(mat, dtype=np.complex128)
    if mat.shape != (2, 2):
        return False
    return bool(np.max(np.abs(mat @ mat.conj().T - np.eye(2))) <= tol)


def apply_single_qubit(state: StateVector, qubit: int, matrix: np.ndarray) -> StateVector:
    """Apply a 2x2 unitary to one qubit; returns a new StateVector."""
    if not 0 <= qubit < state.n_qubits:
        raise ConfigError(f"qubit {qubit} out of range for {state.n_qubits}-qubit state")
    matrix = np.asarray(matrix, dtype=np.complex128)
    if not _is_unitary(matrix):
        raise NumericError("matrix is not unitary within 1e-10")
    amps = _apply_1q(state.amplitudes, qubit, matrix, state.n_qubits)
    return StateVector(state.n_qubits, amps)


# ---------------------------------------------------------------------------
# Entangling layer


@dataclass(frozen=True)
class EntanglerSpec:
    """Two-qubit layer: sub-layers of disjoint (control, target) pairs, CZ or CNOT."""

    kind: str
    sublayers: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self) -> None:
        if self.kind not in ("cz", "cnot"):
            raise ConfigError(f"entangler kind must be 'cz' or 'cnot', got {self.kind!r}")
        for sub in self.sublayers:
            seen: set[int] = set()
            for a, b in sub:
                if a == b or a < 0 or b < 0:
                    raise ConfigError(f"invalid entangler pair ({a}, {b})")
                if a in seen or b in seen:
                    raise ConfigError(f"qubit reused within one entangler sub-layer: ({a}, {b})")
                seen.update((a, b))

    def max_index(self) -> int:
        return max((max(a, b) for sub in self.sublayers for a, b in sub), default=-1)


def _apply_entangler(states: np.ndarray, spec: EntanglerSpec, n: int) -> None:
    for sub in spec.sublayers:
        for a, b in sub:
            if spec.kind == "cz":
                _apply_cz(states, a, b, n)
            else:
                _apply_cnot(states, a, b, n)


def apply_entangler(state: StateVector, spec: EntanglerSpec) -> StateVector:
    """Apply all gates of an entangling layer; returns a new StateVector."""
    if spec.max_index() >= state.n_qubits:
        raise ConfigError(
            f"entangler touches qubit {spec.max_index()} on a {state.n_qubits}-qubit state"
        )
    amps = state.amplitudes.copy()
    _apply_entangler(amps, spec, state.n_qubits)
    return StateVector(state.n_qubits, amps)


# ---------------------------------------------------------------------------
# Observables


@dataclass(frozen=True)
class PauliString:
    """Real coefficient times a product of X/Y/Z factors on distinct qubits."""

    coeff: float
    factors: tuple[tuple[int, str], ...]

    def __init__(self, coeff: float, factors: Union[Mapping[int, str], Iterable[tuple[int, str]]] = ()):
        if isinstance(coeff, complex):
            raise ConfigError("Pauli coefficients must be real")
        items = sorted(dict(factors).items())
        for qubit, axis in items:
            if qubit < 0:
                raise ConfigError(f"negative qubit index {qubit} in Pauli string")
            if axis not in _PAULI_AXES:
                raise ConfigError(f"Pauli factor must be one of X/Y/Z, got {axis!r}")
        object.__setattr__(self, "coeff", float(coeff))
        object.__setattr__(self, "factors", tuple(items))

    def max_qubit(self) -> int:
        return self.factors[-1][0] if self.factors else -1


def _compile_action(factors: tuple[tuple[int, str], ...], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Compile P|b> = phase[b] |b ^ xmask> into (permutation, phase) arrays."""
    dim = 1 << n
    idx = np.arange(dim)
    xmask = 0
    phase = np.ones(dim, dtype=np.complex128)
    for qubit, axis in factors:
        if qubit >= n:
            raise ConfigError(f"Pauli factor on qubit {qubit} exceeds {n}-qubit register")
        bitpos = n - 1 - qubit
        bit = (idx >> bitpos) & 1
        if axis == "X":
            xmask |= 1 << bitpos
        elif axis == "Y":
            xmask |= 1 << bitpos
            phase = phase * np.where(bit, -1j, 1j)
        else:
            phase = phase * (1.0 - 2.0 * bit)
    return idx ^ xmask, phase


class _CompiledPauliSum:
    """Per-register-size arrays: coeffs (K,), perms (K, 2^n), phases (K, 2^n)."""

    def __init__(self, terms: tuple[PauliString, ...], n: int):
        self.coeffs = np.array([t.coeff for t in terms], dtype=np.float64)
        perms = []
        phases = []
        for t in terms:
            perm, phase = _compile_action(t.factors, n)
            perms.append(perm)
            phases.append(phase)
        self.perms = np.array(perms)
        self.phases = np.array(phases)


class PauliSum:
    """Weighted sum of Pauli strings; duplicates merged, zero terms dropped."""

    def __init__(self, terms: Iterable[PauliString]):
        merged: dict[tuple[tuple[int, str], ...], float] = {}
        for term in terms:
            merged[term.factors] = merged.get(term.factors, 0.0) + term.coeff
        self.terms: tuple[PauliString, ...] = tuple(
            PauliString(c, f) for f, c in sorted(merged.items()) if c != 0.0
        )
        self._compiled: dict[int, _CompiledPauliSum] = {}

    def __len__(self) -> int:
        return len(self.terms)

    def max_qubit(self) -> int:
        return max((t.max_qubit() for t in self.terms), default=-1)

    def compiled(self, n_qubits: int) -> _CompiledPauliSum:
        cached = self._compiled.get(n_qubits)
        if cached is None:
            if self.max_qubit() >= n_qubits:
                raise ConfigError(
                    f"observable touches qubit {self.max_qubit()} on a {n_qubits}-qubit register"
                )
            cached = _CompiledPauliSum(self.terms, n_qubits)
            self._compiled[n_qubits] = cached
        return cached

    def __getstate__(self):
        return self.terms

    def __setstate__(self, terms):
        self.terms = terms
        self._compiled = {}


class Projector:
    """Rank-1 observable -|phi><phi| used for fidelity costs."""

    def __init__(self, target: np.ndarray):
        target = np.asarray(target, dtype=np.complex128).reshape(-1)
        dim = target.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise ConfigError(f"projector target length {dim} is not a power of two")
        norm = np.linalg.norm(target)
        if abs(norm - 1.0) > 1e-10:
            raise NumericError(f"projector target norm {norm} differs from 1 beyond 1e-10")
        self.target = target / norm
        self.n_qubits = dim.bit_length() - 1


Observable = Union[PauliSum, Projector]


# ---------------------------------------------------------------------------
# Expectation values


def _pauli_sum_expectation(psi: np.ndarray, compiled: _CompiledPauliSum) -> float:
    vals = (np.conj(psi)[compiled.perms] * compiled.phases) @ psi
    return float(compiled.coeffs @ vals.real)


def _pauli_term_values(states: np.ndarray, compiled: _CompiledPauliSum) -> np.ndarray:
    """Per-term expectations <P_k> for each batch row; shape (B, K)."""
    conj = np.conj(states)
    out = np.empty((states.shape[0], len(compiled.coeffs)), dtype=np.float64)
    for k in range(len(compiled.coeffs)):
        out[:, k] = ((conj[:, compiled.perms[k]] * compiled.phases[k]) * states).sum(axis=1).real
    return out


def _expectation_batch(states: np.ndarray, obs: Observable, n: int) -> np.ndarray:
    if isinstance(obs, Projector):
        if obs.n_qubits != n:
            raise ConfigError(f"projector is for {obs.n_qubits} qubits, state has {n}")
        overlaps = states @ np.conj(obs.target)
        return -np.abs(overlaps) ** 2
    compiled = obs.compiled(n)
    return _pauli_term_values(states, compiled) @ compiled.coeffs


def exact_expectation(state: StateVector, obs: Observable) -> float:
    """Exact <psi|M|psi> for a Pauli sum, or -|<phi|psi>|^2 for a projector."""
    if isinstance(obs, Projector):
        if obs.n_qubits != state.n_qubits:
            raise ConfigError(
                f"projector is for {obs.n_qubits} qubits, state has {state.n_qubits}"
            )
        return -float(np.abs(np.vdot(obs.target, state.amplitudes)) ** 2)
    return _pauli_sum_expectation(state.amplitudes, obs.compiled(state.n_qubits))


def _estimate_from_amplitudes(
    psi: np.ndarray, obs: Observable, n: int, shots_per_term: int, rng: np.random.Generator
) -> float:
    if isinstance(obs, Projector):
        fidelity = float(np.clip(np.abs(np.vdot(obs.target, psi)) ** 2, 0.0, 1.0))
        hits = rng.binomial(shots_per_term, fidelity)
        return -hits / shots_per_term
    compiled = obs.compiled(n)
    total = 0.0
    vals = (np.conj(psi)[compiled.perms] * compiled.phases) @ psi
    probs = np.clip((1.0 + vals.real) / 2.0, 0.0, 1.0)
    for coeff, p in zip(compiled.coeffs, probs):
        hits = rng.binomial(shots_per_term, p)
        total += coeff * (2.0 * hits / shots_per_term - 1.0)
    return total


def estimate_expectation(
    state: StateVector, obs: Observable, shots_per_term: int, rng: np.random.Generator
) -> float:
    """Shot-noise estimate: each term sampled with an independent binomial draw.

    Per term the estimator draws k ~ Binomial(shots, (1+<P>)/2) and returns
    c*(2k/shots - 1); a projector is measured as a single Bernoulli term on
    the overlap probability.
    """
    if shots_per_term < 1:
        raise ConfigError(f"shots_per_term must be >= 1, got {shots_per_term}")
    if isinstance(obs, Projector) and obs.n_qubits != state.n_qubits:
        raise ConfigError(f"projector is for {obs.n_qubits} qubits, state has {state.n_qubits}")
    return _estimate_from_amplitudes(
        state.amplitudes, obs, state.n_qubits, shots_per_term, rng
    )
