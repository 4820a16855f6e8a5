"""Optimizer-switching schedulers and prior-work baselines.

Two cost-driven schedulers start every run with rotosolve and hand over to
fqs at most once:

* early stopping: a patience counter increments whenever the absolute change
  between consecutive per-gate costs stays below a threshold; reaching the
  patience limit triggers the switch. The counter never resets unless
  `reset_on_improvement` is set.
* cost average: once a window of w earlier costs exists, the switch triggers
  when |mean(latest w costs, excluding the newest) - newest| drops below the
  threshold.

The baselines from earlier work are also provided: gate-wise (each gate is
optimized with rotosolve with probability p, else fqs) and iteration-wise
(every N-th sweep runs fqs). Both churn gate representations; converting a
generic quaternion to a fixed-axis rotation samples a fresh axis and keeps
the best single-axis approximation, which is counted in the run record.

Every run draws from four independent seeded streams (init, axis, shots,
hybrid choice), so the pre-switch part of a cost-driven hybrid trace is
bitwise identical to a pure rotosolve run with the same seed.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .circuit import (
    AXES,
    IDEAL,
    AxisAngle,
    Circuit,
    NoiseSpec,
    Quaternion,
    advance_prefix,
    prefix_state,
    to_quaternion,
)
from .errors import ConfigError
from .optimizers import EVALS_PER_UPDATE, UPDATE_FNS, EvalLedger, sweep
from .records import RunRecord
from .rng import RunStreams


@dataclass(frozen=True)
class EarlyStopConfig:
    threshold: float
    patience: int
    reset_on_improvement: bool = False

    def __post_init__(self) -> None:
        if not (self.threshold > 0.0 and math.isfinite(self.threshold)):
            raise ConfigError(f"threshold must be finite and > 0, got {self.threshold}")
        if self.patience < 1:
            raise ConfigError(f"patience must be >= 1, got {self.patience}")


@dataclass(frozen=True)
class CostAverageConfig:
    threshold: float
    window: int

    def __post_init__(self) -> None:
        if not (self.threshold > 0.0 and math.isfinite(self.threshold)):
            raise ConfigError(f"threshold must be finite and > 0, got {self.threshold}")
        if self.window < 1:
            raise ConfigError(f"window must be >= 1, got {self.window}")


class EarlyStopMonitor:
    """Patience counter over consecutive-cost changes |<M>_prev - <M>_new|.

    The first observed cost only seeds <M>_prev; deltas exist from the second
    gate optimization onward. Once triggered the monitor keeps producing the
    delta stream but never triggers again.
    """

    def __init__(self, threshold: float, patience: int, reset_on_improvement: bool = False,
                 armed: bool = True):
        self.threshold = threshold
        self.patience = patience
        self.reset_on_improvement = reset_on_improvement
        self.counter = 0
        self.triggered = not armed
        self._prev: Optional[float] = None

    def observe(self, cost: float) -> tuple[Optional[float], bool]:
        delta = None
        fire = False
        if self._prev is not None:
            delta = abs(self._prev - cost)
            if not self.triggered:
                if delta < self.threshold:
                    self.counter += 1
                    if self.counter >= self.patience:
                        self.triggered = True
                        fire = True
                elif self.reset_on_improvement:
                    self.counter = 0
        self._prev = cost
        return delta, fire


class CostAverageMonitor:
    """Windowed-average comparison |<M>_avg - <M>| with warm-up suppression.

    Checks are suppressed until `window` earlier costs exist; the average
    excludes the newest value, which is the comparand. With armed=False the
    monitor only logs the delta stream (used for trace logging on standalone
    runs).
    """

    def __init__(self, threshold: float, window: int, armed: bool = True):
        self.threshold = threshold
        self.window = window
        self.triggered = not armed
        self._history: deque[float] = deque(maxlen=window)

    def observe(self, cost: float) -> tuple[Optional[float], bool]:
        delta = None
        fire = False
        if len(self._history) >= self.window:
            average = sum(self._history) / self.window
            delta = abs(average - cost)
            if not self.triggered and delta < self.threshold:
                self.triggered = True
                fire = True
        self._history.append(cost)
        return delta, fire


# ---------------------------------------------------------------------------
# Representation conversion for the baselines


def axis_angle_from_quaternion(
    gate: Quaternion, axis_rng: np.random.Generator
) -> tuple[AxisAngle, bool]:
    """Single-axis form of a quaternion gate.

    When only one vector component is nonzero the conversion is exact (up to
    a global phase for non-canonical signs). Otherwise a fresh axis is
    sampled and the angle maximizing the overlap with the original unitary is
    kept; the second return value flags this lossy case.
    """
    q0 = gate.components[0]
    vector = gate.components[1:]
    live = [k for k, v in enumerate(vector) if abs(v) > 1e-12]
    if len(live) <= 1:
        index = live[0] if live else 2  # pure identity defaults to the z axis
        return AxisAngle(AXES[index], 2.0 * math.atan2(vector[index], q0)), False
    index = int(axis_rng.integers(0, 3))
    return AxisAngle(AXES[index], 2.0 * math.atan2(vector[index], q0)), True


def _convert_all_to_quaternion(circuit: Circuit, record: RunRecord) -> None:
    if all(isinstance(g, Quaternion) for g in circuit.gates):
        return
    circuit.gates = [to_quaternion(g) for g in circuit.gates]
    record.conversions += 1


def _convert_all_to_axis_angle(
    circuit: Circuit, axis_rng: np.random.Generator, record: RunRecord
) -> None:
    if all(isinstance(g, AxisAngle) for g in circuit.gates):
        return
    converted: list[AxisAngle] = []
    for gate in circuit.gates:
        if isinstance(gate, AxisAngle):
            converted.append(gate)
            continue
        new_gate, lossy = axis_angle_from_quaternion(to_quaternion(gate), axis_rng)
        converted.append(new_gate)
        record.lossy_conversions += int(lossy)
    circuit.gates = list(converted)
    record.conversions += 1


# ---------------------------------------------------------------------------
# Run drivers


def run_standalone(
    circuit: Circuit,
    optimizer: str,
    obs,
    noise: NoiseSpec,
    ledger: EvalLedger,
    streams: RunStreams,
    delta_log_window: Optional[int] = None,
) -> RunRecord:
    """Repeated sweeps with a single optimizer until the budget is exhausted.

    `delta_log_window` optionally fills the trace's delta column with the
    windowed-average stream without any switching behavior.
    """
    if optimizer not in EVALS_PER_UPDATE:
        raise ConfigError(f"unknown optimizer {optimizer!r}")
    record = RunRecord(seed=streams.seed, budget=ledger.budget)
    monitor = None
    if delta_log_window is not None:
        monitor = CostAverageMonitor(threshold=math.inf, window=delta_log_window, armed=False)
    while sweep(circuit, optimizer, obs, noise, streams.shots, ledger, record, monitor) != "budget":
        pass
    return record


def _run_cost_switching(
    circuit: Circuit,
    monitor,
    trigger: str,
    obs,
    noise: NoiseSpec,
    ledger: EvalLedger,
    streams: RunStreams,
) -> RunRecord:
    record = RunRecord(seed=streams.seed, budget=ledger.budget)
    # Phase 1: rotosolve sweeps until the monitor fires or the budget ends.
    while True:
        status = sweep(circuit, "rotosolve", obs, noise, streams.shots, ledger, record, monitor)
        if status == "switched":
            break
        if status == "budget":
            record.mark_switch("none")
            return record
    _convert_all_to_quaternion(circuit, record)
    record.mark_switch(trigger)
    # Phase 2: fqs for whatever budget remains; the monitor only logs now.
    while sweep(circuit, "fqs", obs, noise, streams.shots, ledger, record, monitor) != "budget":
        pass
    return record


def run_early_stopping(
    circuit: Circuit,
    cfg: EarlyStopConfig,
    obs,
    noise: NoiseSpec,
    ledger: EvalLedger,
    streams: RunStreams,
) -> RunRecord:
    """Rotosolve, then one switch to fqs when the patience counter fills up."""
    monitor = EarlyStopMonitor(cfg.threshold, cfg.patience, cfg.reset_on_improvement)
    return _run_cost_switching(circuit, monitor, "patience", obs, noise, ledger, streams)


def run_cost_average(
    circuit: Circuit,
    cfg: CostAverageConfig,
    obs,
    noise: NoiseSpec,
    ledger: EvalLedger,
    streams: RunStreams,
) -> RunRecord:
    """Rotosolve, then one switch to fqs on the windowed-average criterion."""
    monitor = CostAverageMonitor(cfg.threshold, cfg.window)
    return _run_cost_switching(circuit, monitor, "average", obs, noise, ledger, streams)


def run_gate_wise(
    circuit: Circuit,
    p: float,
    obs,
    noise: NoiseSpec,
    ledger: EvalLedger,
    streams: RunStreams,
) -> RunRecord:
    """Per-gate coin flip: rotosolve with probability p, fqs otherwise.

    The run ends at the first gate whose chosen optimizer cannot be afforded.
    """
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"probability p must be in [0, 1], got {p}")
    record = RunRecord(seed=streams.seed, budget=ledger.budget)
    while True:
        prefix = prefix_state(circuit, 0)
        for gate_index in range(circuit.n_gates):
            optimizer = "rotosolve" if streams.hybrid.random() < p else "fqs"
            if not ledger.can_afford(EVALS_PER_UPDATE[optimizer]):
                return record
            gate = circuit.gates[gate_index]
            if optimizer == "rotosolve" and not isinstance(gate, AxisAngle):
                new_gate, lossy = axis_angle_from_quaternion(to_quaternion(gate), streams.axis)
                circuit.gates[gate_index] = new_gate
                record.conversions += 1
                record.lossy_conversions += int(lossy)
            elif optimizer == "fqs" and not isinstance(gate, Quaternion):
                circuit.gates[gate_index] = to_quaternion(gate)
                record.conversions += 1
            result = UPDATE_FNS[optimizer](
                circuit, gate_index, obs, noise, streams.shots, ledger, prefix=prefix
            )
            record.add(
                cost=result.predicted_cost,
                evals_used=ledger.evaluations_used,
                phase=optimizer,
                delta=None,
            )
            prefix = advance_prefix(prefix, circuit, gate_index)


def run_iteration_hybrid(
    circuit: Circuit,
    period: int,
    obs,
    noise: NoiseSpec,
    ledger: EvalLedger,
    streams: RunStreams,
) -> RunRecord:
    """Every `period`-th sweep runs fqs, the others rotosolve.

    The whole circuit is converted at sweep boundaries whenever the
    representation changes; period=2 alternates R, F, R, F, ...
    """
    if period < 1:
        raise ConfigError(f"period must be >= 1, got {period}")
    record = RunRecord(seed=streams.seed, budget=ledger.budget)
    sweep_number = 0
    while True:
        sweep_number += 1
        optimizer = "fqs" if sweep_number % period == 0 else "rotosolve"
        if not ledger.can_afford(EVALS_PER_UPDATE[optimizer]):
            return record
        if optimizer == "fqs":
            _convert_all_to_quaternion(circuit, record)
        else:
            _convert_all_to_axis_angle(circuit, streams.axis, record)
        if sweep(circuit, optimizer, obs, noise, streams.shots, ledger, record) == "budget":
            return record
