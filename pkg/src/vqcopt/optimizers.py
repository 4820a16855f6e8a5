"""Closed-form single-gate minimizers and the sequential sweep driver.

Each update measures the circuit at a fixed set of probe parameters for one
gate, reconstructs the exact cost restriction to that gate's family, and
jumps to its global minimizer:

* rotosolve: the cost over the angle is a sinusoid a*cos(theta - b) + m,
  pinned by 3 evaluations at {phi, phi + pi/2, phi - pi/2};
* fraxis: the cost over the rotation axis n is a quadratic form n^T R n,
  pinned by 6 evaluations (3 basis axes + 3 diagonal pairs);
* fqs: the cost over the quaternion q is q^T S q, pinned by 10 evaluations
  (4 basis quaternions + 6 pairs).

The recorded per-gate cost is the minimizer's predicted value (lambda_min or
the sinusoid minimum), so no extra evaluation is spent; under shot noise the
prediction is itself noisy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .circuit import (
    IDEAL,
    AxisAngle,
    Circuit,
    FreeAxis,
    GateParam,
    NoiseSpec,
    Quaternion,
    advance_prefix,
    canonical_angle,
    canonical_quaternion,
    evaluate_gate_candidates,
    prefix_state,
)
from .errors import BudgetExhaustedError, ConfigError

EVALS_PER_UPDATE = {"rotosolve": 3, "fraxis": 6, "fqs": 10}

_SQRT1_2 = 1.0 / math.sqrt(2.0)

_FRAXIS_PAIRS = ((0, 1), (0, 2), (1, 2))
FRAXIS_PROBE_AXES: tuple[tuple[float, float, float], ...] = (
    (1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, 0.0, 1.0),
) + tuple(
    tuple(_SQRT1_2 * (np.eye(3)[j] + np.eye(3)[k])) for j, k in _FRAXIS_PAIRS
)

_FQS_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
FQS_PROBE_QUATERNIONS: tuple[tuple[float, float, float, float], ...] = tuple(
    tuple(np.eye(4)[k]) for k in range(4)
) + tuple(
    tuple(_SQRT1_2 * (np.eye(4)[j] + np.eye(4)[k])) for j, k in _FQS_PAIRS
)


@dataclass
class EvalLedger:
    """Circuit-evaluation budget; `evaluations_used` may never exceed it."""

    budget: int
    evaluations_used: int = 0

    @property
    def remaining(self) -> int:
        return self.budget - self.evaluations_used

    def can_afford(self, evals: int) -> bool:
        return self.remaining >= evals

    def spend(self, evals: int) -> None:
        if self.evaluations_used + evals > self.budget:
            raise BudgetExhaustedError(
                f"charging {evals} evaluations would exceed budget "
                f"{self.budget} (used {self.evaluations_used})"
            )
        self.evaluations_used += evals


@dataclass(frozen=True)
class GateUpdateResult:
    new_param: GateParam
    predicted_cost: float
    evals_spent: int


def make_budget(n_qubits: int, n_layers: int, rotosolve_iters: int = 100) -> int:
    """Evaluation budget matching `rotosolve_iters` full rotosolve sweeps."""
    if n_qubits < 1 or n_layers < 1 or rotosolve_iters < 1:
        raise ConfigError("make_budget arguments must be positive")
    return EVALS_PER_UPDATE["rotosolve"] * rotosolve_iters * n_layers * n_qubits


# ---------------------------------------------------------------------------
# Closed-form fits (pure functions of the probe costs)


def rotosolve_closed_form(
    cost_phi: float, cost_plus: float, cost_minus: float, phi: float
) -> tuple[float, float]:
    """Minimizing angle and minimum of the sinusoid through the three probes.

    atan2(0, 0) is taken as 0 so a flat landscape still yields a
    deterministic angle.
    """
    theta = phi - math.pi / 2.0 - math.atan2(
        2.0 * cost_phi - cost_plus - cost_minus, cost_plus - cost_minus
    )
    mean = (cost_plus + cost_minus) / 2.0
    amplitude = math.hypot(cost_phi - mean, (cost_plus - cost_minus) / 2.0)
    return canonical_angle(theta), mean - amplitude


def axis_quadratic_from_costs(costs: np.ndarray) -> np.ndarray:
    """Symmetric 3x3 form R with n^T R n equal to the cost, from the 6 probes."""
    r = np.zeros((3, 3))
    r[0, 0], r[1, 1], r[2, 2] = costs[0], costs[1], costs[2]
    for offset, (j, k) in enumerate(_FRAXIS_PAIRS):
        r[j, k] = r[k, j] = costs[3 + offset] - (r[j, j] + r[k, k]) / 2.0
    return r


def quaternion_quadratic_from_costs(costs: np.ndarray) -> np.ndarray:
    """Symmetric 4x4 form S with q^T S q equal to the cost, from the 10 probes."""
    s = np.zeros((4, 4))
    for k in range(4):
        s[k, k] = costs[k]
    for offset, (j, k) in enumerate(_FQS_PAIRS):
        s[j, k] = s[k, j] = costs[4 + offset] - (s[j, j] + s[k, k]) / 2.0
    return s


# ---------------------------------------------------------------------------
# Small symmetric eigensolver


def jacobi_eigh(mat: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a small symmetric matrix.

    Returns (eigenvalues ascending, eigenvectors as columns). Iterates until
    the off-diagonal Frobenius norm falls below tol relative to the matrix
    scale.
    """
    a = np.array(mat, dtype=np.float64)
    k = a.shape[0]
    if a.shape != (k, k) or np.max(np.abs(a - a.T)) > 1e-10 * max(1.0, np.max(np.abs(a))):
        raise ConfigError("jacobi_eigh expects a symmetric square matrix")
    a = (a + a.T) / 2.0
    vecs = np.eye(k)
    scale = max(1.0, float(np.linalg.norm(a)))
    off_mask = ~np.eye(k, dtype=bool)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(a[off_mask] ** 2)))
        if off <= tol * scale:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p, q]
                if abs(apq) <= 1e-30 * scale:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(k)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                vecs = vecs @ rot
    order = np.argsort(np.diag(a), kind="stable")
    return np.diag(a)[order].copy(), vecs[:, order]


def _first_nonzero_positive(vec: np.ndarray) -> np.ndarray:
    for component in vec:
        if component > 0.0:
            return vec
        if component < 0.0:
            return -vec
    return vec


def minimizing_eigenvector(
    mat: np.ndarray, prefer: Optional[np.ndarray] = None, degeneracy_tol: float = 1e-9
) -> tuple[float, np.ndarray]:
    """Lowest eigenvalue and a deterministic unit eigenvector.

    Within a degenerate lowest eigenspace the vector closest to `prefer` is
    chosen (minimal disturbance); the sign is then canonicalized so the first
    nonzero component is positive.
    """
    vals, vecs = jacobi_eigh(mat)
    lowest = float(vals[0])
    tol = degeneracy_tol * max(1.0, float(np.max(np.abs(vals))))
    space = vecs[:, vals <= lowest + tol]
    vec = space[:, 0]
    if prefer is not None:
        projected = space @ (space.T @ np.asarray(prefer, dtype=np.float64))
        norm = np.linalg.norm(projected)
        if norm > 1e-8:
            vec = projected / norm
    vec = _first_nonzero_positive(vec)
    return lowest, vec / np.linalg.norm(vec)


# ---------------------------------------------------------------------------
# Per-gate updates


def rotosolve_update(
    circuit: Circuit,
    gate_index: int,
    obs,
    noise: NoiseSpec = IDEAL,
    rng=None,
    ledger: Optional[EvalLedger] = None,
    prefix: Optional[np.ndarray] = None,
) -> GateUpdateResult:
    """Exact minimization of one fixed-axis angle; charges 3 evaluations."""
    gate = circuit.gates[gate_index]
    if not isinstance(gate, AxisAngle):
        raise ConfigError(f"rotosolve_update needs an AxisAngle gate at index {gate_index}")
    phi = gate.theta
    probes = [
        AxisAngle(gate.axis, phi),
        AxisAngle(gate.axis, phi + math.pi / 2.0),
        AxisAngle(gate.axis, phi - math.pi / 2.0),
    ]
    costs = evaluate_gate_candidates(circuit, gate_index, probes, obs, noise, rng, ledger, prefix)
    theta, predicted = rotosolve_closed_form(costs[0], costs[1], costs[2], phi)
    new_gate = AxisAngle(gate.axis, theta)
    circuit.gates[gate_index] = new_gate
    return GateUpdateResult(new_gate, float(predicted), 3)


def fraxis_update(
    circuit: Circuit,
    gate_index: int,
    obs,
    noise: NoiseSpec = IDEAL,
    rng=None,
    ledger: Optional[EvalLedger] = None,
    prefix: Optional[np.ndarray] = None,
) -> GateUpdateResult:
    """Exact minimization over the free rotation axis; charges 6 evaluations."""
    gate = circuit.gates[gate_index]
    if not isinstance(gate, FreeAxis):
        raise ConfigError(f"fraxis_update needs a FreeAxis gate at index {gate_index}")
    probes = [FreeAxis(v) for v in FRAXIS_PROBE_AXES]
    costs = evaluate_gate_candidates(circuit, gate_index, probes, obs, noise, rng, ledger, prefix)
    form = axis_quadratic_from_costs(costs)
    lowest, vec = minimizing_eigenvector(form, prefer=np.array(gate.axis_vector))
    new_gate = FreeAxis(tuple(vec))
    circuit.gates[gate_index] = new_gate
    return GateUpdateResult(new_gate, float(lowest), 6)


def fqs_update(
    circuit: Circuit,
    gate_index: int,
    obs,
    noise: NoiseSpec = IDEAL,
    rng=None,
    ledger: Optional[EvalLedger] = None,
    prefix: Optional[np.ndarray] = None,
) -> GateUpdateResult:
    """Exact minimization over the full quaternion; charges 10 evaluations."""
    gate = circuit.gates[gate_index]
    if not isinstance(gate, Quaternion):
        raise ConfigError(f"fqs_update needs a Quaternion gate at index {gate_index}")
    probes = [Quaternion(q) for q in FQS_PROBE_QUATERNIONS]
    costs = evaluate_gate_candidates(circuit, gate_index, probes, obs, noise, rng, ledger, prefix)
    form = quaternion_quadratic_from_costs(costs)
    lowest, vec = minimizing_eigenvector(form, prefer=np.array(gate.components))
    new_gate = Quaternion(canonical_quaternion(vec))
    circuit.gates[gate_index] = new_gate
    return GateUpdateResult(new_gate, float(lowest), 10)


UPDATE_FNS = {
    "rotosolve": rotosolve_update,
    "fraxis": fraxis_update,
    "fqs": fqs_update,
}


# ---------------------------------------------------------------------------
# Sweep driver


def sweep(
    circuit: Circuit,
    optimizer: str,
    obs,
    noise: NoiseSpec = IDEAL,
    rng=None,
    ledger: Optional[EvalLedger] = None,
    record=None,
    monitor=None,
) -> str:
    """Optimize every gate once, in layer-major order.

    Updates are atomic: a gate is only started when the ledger can afford its
    full probe cost, so a run never exceeds its budget. After each update the
    optional monitor observes the predicted cost and may request a stop
    (optimizer switching); the optional record collects the trace.

    Returns "completed", "budget" (stopped at a gate boundary), or "switched"
    (the monitor triggered).
    """
    evals = EVALS_PER_UPDATE[optimizer]
    update = UPDATE_FNS[optimizer]
    prefix = prefix_state(circuit, 0)
    for gate_index in range(circuit.n_gates):
        if ledger is not None and not ledger.can_afford(evals):
            return "budget"
        result = update(circuit, gate_index, obs, noise, rng, ledger, prefix=prefix)
        delta, triggered = (None, False) if monitor is None else monitor.observe(
            result.predicted_cost
        )
        if record is not None:
            record.add(
                cost=result.predicted_cost,
                evals_used=ledger.evaluations_used if ledger is not None else 0,
                phase=optimizer,
                delta=delta,
            )
        if triggered:
            return "switched"
        prefix = advance_prefix(prefix, circuit, gate_index)
    return "completed"
