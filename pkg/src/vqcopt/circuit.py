"""Layered ansatz model: gate parameterizations, initialization, evaluation.

A circuit is L layers of n single-qubit gates in a flat layer-major list,
with a shared entangling layer applied after every layer except the last
(opt-in via `entangle_last` for the final one too). Three gate families are
supported: fixed-axis rotations (angle theta about X, Y or Z), free-axis pi
rotations -i(n.sigma), and free quaternions q0*I - i(q1*X + q2*Y + q3*Z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ConfigError
from .statevec import (
    MAX_QUBITS,
    EntanglerSpec,
    Observable,
    _apply_1q,
    _apply_1q_multi,
    _apply_entangler,
    _estimate_from_amplitudes,
    _expectation_batch,
    _zero_amplitudes,
)

AXES = ("x", "y", "z")

_SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
_IDENTITY = np.eye(2, dtype=np.complex128)


def canonical_angle(theta: float) -> float:
    """Fold an angle into (-pi, pi]."""
    theta = math.remainder(theta, 2.0 * math.pi)
    if theta <= -math.pi:
        theta += 2.0 * math.pi
    return theta


def canonical_quaternion(q: Sequence[float]) -> tuple[float, float, float, float]:
    """Normalize and fix the global sign: q0 >= 0, ties broken by the first nonzero."""
    arr = np.asarray(q, dtype=np.float64)
    norm = np.linalg.norm(arr)
    if norm < 1e-12:
        raise ConfigError("quaternion has (near) zero norm")
    arr = arr / norm
    for component in arr:
        if component > 0.0:
            break
        if component < 0.0:
            arr = -arr
            break
    return (float(arr[0]), float(arr[1]), float(arr[2]), float(arr[3]))


@dataclass(frozen=True)
class AxisAngle:
    """Rotation by theta about a fixed X/Y/Z axis."""

    axis: str
    theta: float

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise ConfigError(f"axis must be one of {AXES}, got {self.axis!r}")
        object.__setattr__(self, "theta", canonical_angle(self.theta))


@dataclass(frozen=True)
class FreeAxis:
    """Pi rotation -i(n.sigma) about a unit axis n."""

    axis_vector: tuple[float, float, float]

    def __post_init__(self) -> None:
        vec = np.asarray(self.axis_vector, dtype=np.float64)
        if vec.shape != (3,):
            raise ConfigError("axis_vector must have 3 components")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > 1e-12:
            raise ConfigError(f"axis_vector norm {norm} differs from 1 beyond 1e-12")
        object.__setattr__(self, "axis_vector", tuple(float(v) for v in vec))


@dataclass(frozen=True)
class Quaternion:
    """General single-qubit gate q0*I - i(q1*X + q2*Y + q3*Z), |q| = 1."""

    components: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        vec = np.asarray(self.components, dtype=np.float64)
        if vec.shape != (4,):
            raise ConfigError("quaternion must have 4 components")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > 1e-12:
            raise ConfigError(f"quaternion norm {norm} differs from 1 beyond 1e-12")
        object.__setattr__(self, "components", tuple(float(v) for v in vec))


GateParam = Union[AxisAngle, FreeAxis, Quaternion]


def gate_unitary(gate: GateParam) -> np.ndarray:
    """2x2 unitary realized by a gate parameter."""
    if isinstance(gate, AxisAngle):
        half = gate.theta / 2.0
        return math.cos(half) * _IDENTITY - 1j * math.sin(half) * _SIGMA[gate.axis]
    if isinstance(gate, FreeAxis):
        nx, ny, nz = gate.axis_vector
        return -1j * (nx * _SIGMA["x"] + ny * _SIGMA["y"] + nz * _SIGMA["z"])
    q0, q1, q2, q3 = gate.components
    return q0 * _IDENTITY - 1j * (q1 * _SIGMA["x"] + q2 * _SIGMA["y"] + q3 * _SIGMA["z"])


def to_quaternion(gate: GateParam) -> Quaternion:
    """Rewrite a gate as a quaternion without changing its unitary."""
    if isinstance(gate, Quaternion):
        return gate
    if isinstance(gate, FreeAxis):
        nx, ny, nz = gate.axis_vector
        return Quaternion((0.0, nx, ny, nz))
    half = gate.theta / 2.0
    vec = [math.cos(half), 0.0, 0.0, 0.0]
    vec[1 + AXES.index(gate.axis)] = math.sin(half)
    return Quaternion(tuple(vec))


# ---------------------------------------------------------------------------
# Circuit


def brick_entangler(n_qubits: int, kind: str = "cz") -> EntanglerSpec:
    """Staggered nearest-neighbor pairs: (0,1),(2,3),... then (1,2),(3,4),..."""
    even = tuple((i, i + 1) for i in range(0, n_qubits - 1, 2))
    odd = tuple((i, i + 1) for i in range(1, n_qubits - 1, 2))
    sublayers = tuple(sub for sub in (even, odd) if sub)
    return EntanglerSpec(kind=kind, sublayers=sublayers)


@dataclass
class Circuit:
    """L*n single-qubit gates (layer-major, qubit-ascending) plus an entangler."""

    n_qubits: int
    n_layers: int
    gates: list[GateParam]
    entangler: EntanglerSpec
    entangle_last: bool = False

    def __post_init__(self) -> None:
        if self.n_qubits < 1 or self.n_layers < 1:
            raise ConfigError("circuit needs n_qubits >= 1 and n_layers >= 1")
        if self.n_qubits > MAX_QUBITS:
            raise ConfigError(f"at most {MAX_QUBITS} qubits supported, got {self.n_qubits}")
        if len(self.gates) != self.n_qubits * self.n_layers:
            raise ConfigError(
                f"expected {self.n_qubits * self.n_layers} gates, got {len(self.gates)}"
            )
        if self.entangler.max_index() >= self.n_qubits:
            raise ConfigError("entangler touches a qubit outside the register")

    @property
    def n_gates(self) -> int:
        return len(self.gates)

    def qubit_of(self, gate_index: int) -> int:
        return gate_index % self.n_qubits

    def layer_of(self, gate_index: int) -> int:
        return gate_index // self.n_qubits

    def has_entangler_after(self, layer: int) -> bool:
        return layer < self.n_layers - 1 or self.entangle_last

    def copy(self) -> "Circuit":
        return replace(self, gates=list(self.gates))


def init_circuit(
    n_qubits: int, n_layers: int, mode: str, rng: np.random.Generator,
    entangler: Optional[EntanglerSpec] = None, entangle_last: bool = False,
) -> Circuit:
    """Random circuit in the representation required by an optimizer.

    rotosolve: uniform axis from {X, Y, Z} and angle from (-pi, pi] per gate;
    fraxis: axis uniform on the 2-sphere; fqs: quaternion uniform on the
    3-sphere (normalized Gaussian vectors).
    """
    if mode not in ("rotosolve", "fraxis", "fqs"):
        raise ConfigError(f"unknown init mode {mode!r}")
    if entangler is None:
        entangler = brick_entangler(n_qubits)
    gates: list[GateParam] = []
    for _ in range(n_qubits * n_layers):
        if mode == "rotosolve":
            axis = AXES[rng.integers(0, 3)]
            theta = math.pi - rng.uniform(0.0, 2.0 * math.pi)  # lands in (-pi, pi]
            gates.append(AxisAngle(axis, theta))
        elif mode == "fraxis":
            gates.append(FreeAxis(tuple(_random_unit(rng, 3))))
        else:
            gates.append(Quaternion(tuple(_random_unit(rng, 4))))
    return Circuit(n_qubits, n_layers, gates, entangler, entangle_last)


def _random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    while True:
        vec = rng.standard_normal(dim)
        norm = np.linalg.norm(vec)
        if norm > 1e-12:
            return vec / norm


# ---------------------------------------------------------------------------
# Evaluation engine


@dataclass
class NoiseSpec:
    """Measurement model: ideal expectations, or a binomial shot count per term."""

    shots_per_term: Optional[int] = None

    def __post_init__(self) -> None:
        if self.shots_per_term is not None and self.shots_per_term < 1:
            raise ConfigError(f"shots_per_term must be >= 1, got {self.shots_per_term}")

    @property
    def is_ideal(self) -> bool:
        return self.shots_per_term is None


IDEAL = NoiseSpec()


def _apply_gate_range(states: np.ndarray, circuit: Circuit, start: int, stop: int) -> np.ndarray:
    """Apply gates [start, stop) plus any entanglers whose layer completes in range."""
    n = circuit.n_qubits
    for d in range(start, stop):
        states = _apply_1q(states, circuit.qubit_of(d), gate_unitary(circuit.gates[d]), n)
        if circuit.qubit_of(d) == n - 1 and circuit.has_entangler_after(circuit.layer_of(d)):
            _apply_entangler(states, circuit.entangler, n)
    return states


def prefix_state(circuit: Circuit, gate_index: int) -> np.ndarray:
    """Amplitudes of |0...0> propagated through everything before `gate_index`."""
    states = _zero_amplitudes(circuit.n_qubits)
    return _apply_gate_range(states, circuit, 0, gate_index)


def advance_prefix(states: np.ndarray, circuit: Circuit, gate_index: int) -> np.ndarray:
    """Extend a prefix for `gate_index` into the prefix for `gate_index + 1`."""
    return _apply_gate_range(states, circuit, gate_index, gate_index + 1)


def _measure(
    states: np.ndarray, obs: Observable, n: int, noise: NoiseSpec, rng: Optional[np.random.Generator]
) -> np.ndarray:
    if noise.is_ideal:
        return _expectation_batch(states, obs, n)
    if rng is None:
        raise ConfigError("shot-noise evaluation requires an rng stream")
    return np.array(
        [_estimate_from_amplitudes(row, obs, n, noise.shots_per_term, rng) for row in states]
    )


def evaluate_circuit(
    circuit: Circuit,
    obs: Observable,
    noise: NoiseSpec = IDEAL,
    rng: Optional[np.random.Generator] = None,
    ledger=None,
) -> float:
    """One circuit evaluation: prepare |0...0>, run all layers, measure the cost."""
    states = _apply_gate_range(
        _zero_amplitudes(circuit.n_qubits)[None, :], circuit, 0, circuit.n_gates
    )
    if ledger is not None:
        ledger.spend(1)
    return float(_measure(states, obs, circuit.n_qubits, noise, rng)[0])


def evaluate_gate_candidates(
    circuit: Circuit,
    gate_index: int,
    candidates: Sequence[GateParam],
    obs: Observable,
    noise: NoiseSpec = IDEAL,
    rng: Optional[np.random.Generator] = None,
    ledger=None,
    prefix: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Cost of the circuit with gate `gate_index` replaced by each candidate.

    Charges one ledger evaluation per candidate. The shared prefix state is
    computed once (or passed in by sweep drivers that keep a rolling prefix);
    the candidates then run batched through the remaining gates.
    """
    if not 0 <= gate_index < circuit.n_gates:
        raise ConfigError(f"gate index {gate_index} out of range")
    n = circuit.n_qubits
    if prefix is None:
        prefix = prefix_state(circuit, gate_index)
    states = np.broadcast_to(prefix.reshape(-1), (len(candidates), 1 << n)).copy()
    mats = np.array([gate_unitary(g) for g in candidates])
    states = _apply_1q_multi(states, circuit.qubit_of(gate_index), mats, n)
    if circuit.qubit_of(gate_index) == n - 1 and circuit.has_entangler_after(
        circuit.layer_of(gate_index)
    ):
        _apply_entangler(states, circuit.entangler, n)
    states = _apply_gate_range(states, circuit, gate_index + 1, circuit.n_gates)
    if ledger is not None:
        ledger.spend(len(candidates))
    return _measure(states, obs, n, noise, rng)


# ---------------------------------------------------------------------------
# JSON checkpoint format


def gate_to_json(gate: GateParam) -> dict:
    if isinstance(gate, AxisAngle):
        return {"kind": "axis_angle", "axis": gate.axis, "theta": gate.theta}
    if isinstance(gate, FreeAxis):
        return {"kind": "free_axis", "axis_vector": list(gate.axis_vector)}
    return {"kind": "quaternion", "components": list(gate.components)}


def gate_from_json(data: dict) -> GateParam:
    kind = data.get("kind")
    if kind == "axis_angle":
        return AxisAngle(data["axis"], data["theta"])
    if kind == "free_axis":
        return FreeAxis(tuple(data["axis_vector"]))
    if kind == "quaternion":
        return Quaternion(tuple(data["components"]))
    raise ConfigError(f"unknown gate kind {kind!r}")


def circuit_to_json(circuit: Circuit) -> dict:
    return {
        "n_qubits": circuit.n_qubits,
        "n_layers": circuit.n_layers,
        "entangle_last": circuit.entangle_last,
        "entangler": {
            "kind": circuit.entangler.kind,
            "sublayers": [[list(pair) for pair in sub] for sub in circuit.entangler.sublayers],
        },
        "gates": [gate_to_json(g) for g in circuit.gates],
    }


def circuit_from_json(data: dict) -> Circuit:
    entangler = EntanglerSpec(
        kind=data["entangler"]["kind"],
        sublayers=tuple(
            tuple((int(a), int(b)) for a, b in sub) for sub in data["entangler"]["sublayers"]
        ),
    )
    return Circuit(
        n_qubits=int(data["n_qubits"]),
        n_layers=int(data["n_layers"]),
        gates=[gate_from_json(g) for g in data["gates"]],
        entangler=entangler,
        entangle_last=bool(data.get("entangle_last", False)),
    )
