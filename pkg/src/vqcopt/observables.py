"""Cost-function builders and the exact ground-state oracle.

Provides the cyclic Heisenberg chain, the 1D Fermi-Hubbard chain mapped to
qubits with a Jordan-Wigner transformation, rank-1 fidelity projectors for
random target states, and a dense eigensolver for reference ground energies
(limited to 10 qubits).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, ConfigError
from .statevec import Observable, PauliString, PauliSum, Projector, _compile_action

DENSE_LIMIT = 10


@dataclass(frozen=True)
class GroundStateResult:
    energy: float
    degeneracy: int


# ---------------------------------------------------------------------------
# Hamiltonians


def heisenberg_hamiltonian(n_sites: int, coupling: float = 1.0, field: float = 1.0) -> PauliSum:
    """Cyclic Heisenberg chain: J * sum_i (XX + YY + ZZ) + h * sum_i Z_i.

    Bonds wrap around (site n-1 couples back to site 0), so the chain needs at
    least 3 sites; with 2 the single edge would be counted twice.
    """
    if n_sites < 3:
        raise ConfigError(f"cyclic Heisenberg chain needs n_sites >= 3, got {n_sites}")
    terms = []
    for i in range(n_sites):
        j = (i + 1) % n_sites
        for axis in ("X", "Y", "Z"):
            terms.append(PauliString(coupling, {i: axis, j: axis}))
        terms.append(PauliString(field, {i: "Z"}))
    return PauliSum(terms)


def _mode_index(site: int, spin_down: bool, n_sites: int, ordering: str) -> int:
    if ordering == "blocked":
        return site + (n_sites if spin_down else 0)
    return 2 * site + (1 if spin_down else 0)


def _hopping_terms(p: int, q: int, amplitude: float) -> list[PauliString]:
    """-t(c_p^dag c_q + h.c.) under Jordan-Wigner, with the parity Z string."""
    lo, hi = sorted((p, q))
    string = {k: "Z" for k in range(lo + 1, hi)}
    return [
        PauliString(amplitude, {**string, lo: "X", hi: "X"}),
        PauliString(amplitude, {**string, lo: "Y", hi: "Y"}),
    ]


def hubbard_hamiltonian(
    n_sites: int,
    tunneling: float = 0.5,
    interaction: float = 0.5,
    ordering: str = "blocked",
) -> PauliSum:
    """Open-chain Fermi-Hubbard model on 2*n_sites qubits via Jordan-Wigner.

    `ordering` selects the qubit layout: "blocked" keeps qubits 0..n_sites-1
    for spin-up modes and the rest for spin-down; "interleaved" alternates
    up/down per site. The spectrum is identical either way.
    """
    if n_sites < 1:
        raise ConfigError(f"n_sites must be >= 1, got {n_sites}")
    if ordering not in ("blocked", "interleaved"):
        raise ConfigError(f"ordering must be 'blocked' or 'interleaved', got {ordering!r}")
    if not (np.isfinite(tunneling) and np.isfinite(interaction)):
        raise ConfigError("tunneling and interaction must be finite")
    terms = []
    for spin_down in (False, True):
        for site in range(n_sites - 1):
            p = _mode_index(site, spin_down, n_sites, ordering)
            q = _mode_index(site + 1, spin_down, n_sites, ordering)
            terms.extend(_hopping_terms(p, q, -tunneling / 2.0))
    # U n_up n_down = U/4 (I - Z_a)(I - Z_b)
    for site in range(n_sites):
        a = _mode_index(site, False, n_sites, ordering)
        b = _mode_index(site, True, n_sites, ordering)
        terms.append(PauliString(interaction / 4.0, {}))
        terms.append(PauliString(-interaction / 4.0, {a: "Z"}))
        terms.append(PauliString(-interaction / 4.0, {b: "Z"}))
        terms.append(PauliString(interaction / 4.0, {a: "Z", b: "Z"}))
    return PauliSum(terms)


def fidelity_projector(target: np.ndarray) -> Projector:
    """Observable -|phi><phi| whose expectation is minus the fidelity."""
    return Projector(target)


def sample_random_state(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random state: 2^n standard-normal complex amplitudes, normalized."""
    if n_qubits < 1:
        raise ConfigError(f"n_qubits must be >= 1, got {n_qubits}")
    dim = 1 << n_qubits
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


# ---------------------------------------------------------------------------
# Dense realization and exact ground energy


def dense_matrix(obs: Observable, n_qubits: int) -> np.ndarray:
    """Full 2^n x 2^n matrix of an observable; capped at 10 qubits."""
    if n_qubits > DENSE_LIMIT:
        raise CapabilityError(
            f"dense realization limited to {DENSE_LIMIT} qubits, got {n_qubits}"
        )
    dim = 1 << n_qubits
    if isinstance(obs, Projector):
        if obs.n_qubits != n_qubits:
            raise ConfigError(f"projector is for {obs.n_qubits} qubits, asked for {n_qubits}")
        return -np.outer(obs.target, np.conj(obs.target))
    if obs.max_qubit() >= n_qubits:
        raise ConfigError(
            f"observable touches qubit {obs.max_qubit()} on a {n_qubits}-qubit register"
        )
    mat = np.zeros((dim, dim), dtype=np.complex128)
    idx = np.arange(dim)
    for term in obs.terms:
        perm, phase = _compile_action(term.factors, n_qubits)
        mat[perm, idx] += term.coeff * phase
    return mat


def exact_ground_energy(
    obs: Observable, n_qubits: int, degeneracy_tol: float = 1e-8
) -> GroundStateResult:
    """Lowest eigenvalue of the observable's dense Hermitian realization."""
    mat = dense_matrix(obs, n_qubits)
    eigvals = np.linalg.eigvalsh(mat)
    lowest = float(eigvals[0])
    tol = degeneracy_tol * max(1.0, abs(lowest))
    degeneracy = int(np.sum(eigvals <= lowest + tol))
    return GroundStateResult(energy=lowest, degeneracy=degeneracy)


# ---------------------------------------------------------------------------
# JSON term-list serialization (provenance logging)


def observable_to_json(obs: PauliSum) -> list[dict]:
    """Serialize a Pauli sum to [{"coeff": c, "paulis": {"3": "X", ...}}, ...]."""
    if not isinstance(obs, PauliSum):
        raise ConfigError("only Pauli-sum observables have a term-list serialization")
    return [
        {"coeff": term.coeff, "paulis": {str(q): axis for q, axis in term.factors}}
        for term in obs.terms
    ]


def observable_from_json(data: list[dict]) -> PauliSum:
    return PauliSum(
        PauliString(entry["coeff"], {int(q): axis for q, axis in entry["paulis"].items()})
        for entry in data
    )
