"""Experiment orchestration: config ingestion, seeded multi-run execution,
summary statistics, and the flat-file output layout.

An experiment directory contains:
  config.json   resolved configuration (plus budget, qubit count, ground
                energy, and the Hamiltonian term list for provenance)
  runs.jsonl    one JSON object per run record
  trace_<seed>.csv  per-gate trace: gate_opt_index, evals_used, cost,
                delta_avg, phase
  summary.json  quartile statistics of final costs and relative errors

Outputs are deterministic for a fixed config and seed; only wall_time fields
in runs.jsonl vary between invocations.
"""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .circuit import Circuit, NoiseSpec, brick_entangler, init_circuit
from .errors import ConfigError, UndefinedMetricError
from .hybrid import (
    CostAverageConfig,
    EarlyStopConfig,
    run_cost_average,
    run_early_stopping,
    run_gate_wise,
    run_iteration_hybrid,
    run_standalone,
)
from .observables import (
    DENSE_LIMIT,
    exact_ground_energy,
    fidelity_projector,
    heisenberg_hamiltonian,
    hubbard_hamiltonian,
    observable_to_json,
    sample_random_state,
)
from .optimizers import EvalLedger, make_budget
from .records import RunRecord
from .rng import RunStreams
from .statevec import Observable, PauliSum

STANDALONE_OPTIMIZERS = ("rotosolve", "fraxis", "fqs")
HYBRID_OPTIMIZERS = ("early_stopping", "cost_average", "gate_wise", "iteration")


# ---------------------------------------------------------------------------
# Configuration


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise ConfigError(f"missing required field '{key}' in {context}")
    return mapping[key]


def _parse_problem(problem: dict) -> dict:
    kind = _require(problem, "kind", "problem")
    if kind == "heisenberg":
        return {
            "kind": kind,
            "n": int(_require(problem, "n", "problem")),
            "coupling": float(problem.get("coupling", 1.0)),
            "field": float(problem.get("field", 1.0)),
        }
    if kind == "hubbard":
        return {
            "kind": kind,
            "n_sites": int(_require(problem, "n_sites", "problem")),
            "tunneling": float(problem.get("tunneling", 0.5)),
            "interaction": float(problem.get("interaction", 0.5)),
            "ordering": problem.get("ordering", "blocked"),
        }
    if kind == "fidelity":
        return {"kind": kind, "n": int(_require(problem, "n", "problem"))}
    raise ConfigError(f"unknown problem kind {kind!r}")


def _parse_optimizer(optimizer: dict) -> dict:
    kind = _require(optimizer, "kind", "optimizer")
    if kind in STANDALONE_OPTIMIZERS:
        return {"kind": kind}
    if kind == "early_stopping":
        return {
            "kind": kind,
            "threshold": float(_require(optimizer, "threshold", "optimizer")),
            "patience": int(_require(optimizer, "patience", "optimizer")),
            "reset_on_improvement": bool(optimizer.get("reset_on_improvement", False)),
        }
    if kind == "cost_average":
        return {
            "kind": kind,
            "threshold": float(_require(optimizer, "threshold", "optimizer")),
            "window": int(_require(optimizer, "window", "optimizer")),
        }
    if kind == "gate_wise":
        return {"kind": kind, "p": float(_require(optimizer, "p", "optimizer"))}
    if kind == "iteration":
        return {"kind": kind, "period": int(_require(optimizer, "period", "optimizer"))}
    raise ConfigError(f"unknown optimizer kind {kind!r}")


def _parse_noise(noise: Optional[dict]) -> dict:
    if noise is None:
        return {"kind": "ideal"}
    kind = noise.get("kind", "ideal")
    if kind == "ideal":
        return {"kind": "ideal"}
    if kind == "shots":
        shots = int(_require(noise, "shots_per_term", "noise"))
        if shots < 1:
            raise ConfigError(f"noise.shots_per_term must be >= 1, got {shots}")
        return {"kind": "shots", "shots_per_term": shots}
    raise ConfigError(f"unknown noise kind {kind!r}")


@dataclass
class ExperimentConfig:
    problem: dict
    layers: int
    optimizer: dict
    runs: int
    noise: dict = field(default_factory=lambda: {"kind": "ideal"})
    rotosolve_iters: int = 100
    base_seed: int = 0
    entangler: str = "cz"
    entangle_last: bool = False
    delta_log_window: Optional[int] = None
    reference_energy: Optional[float] = None
    reference_energies: dict = field(default_factory=dict)
    l_equals_n: bool = False
    label: Optional[str] = None

    def __post_init__(self) -> None:
        self.problem = _parse_problem(self.problem)
        self.optimizer = _parse_optimizer(self.optimizer)
        self.noise = _parse_noise(self.noise)
        if self.l_equals_n:
            self.layers = self.n_qubits
        if self.layers < 1:
            raise ConfigError(f"layers must be >= 1, got {self.layers}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if self.rotosolve_iters < 1:
            raise ConfigError(f"rotosolve_iters must be >= 1, got {self.rotosolve_iters}")
        if self.entangler not in ("cz", "cnot"):
            raise ConfigError(f"entangler must be 'cz' or 'cnot', got {self.entangler!r}")
        if self.delta_log_window is not None and self.delta_log_window < 1:
            raise ConfigError("delta_log_window must be >= 1 when set")
        if self.label is None:
            self.label = _default_label(self.optimizer)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        for key in ("problem", "layers", "optimizer", "runs"):
            _require(data, key, "config")
        return cls(**data)

    @property
    def n_qubits(self) -> int:
        if self.problem["kind"] == "hubbard":
            return 2 * self.problem["n_sites"]
        return self.problem["n"]

    @property
    def budget(self) -> int:
        return make_budget(self.n_qubits, self.layers, self.rotosolve_iters)

    def noise_spec(self) -> NoiseSpec:
        if self.noise["kind"] == "ideal":
            return NoiseSpec()
        return NoiseSpec(shots_per_term=self.noise["shots_per_term"])

    def to_resolved_dict(self) -> dict:
        resolved = {
            "problem": self.problem,
            "layers": self.layers,
            "optimizer": self.optimizer,
            "noise": self.noise,
            "runs": self.runs,
            "rotosolve_iters": self.rotosolve_iters,
            "base_seed": self.base_seed,
            "entangler": self.entangler,
            "entangle_last": self.entangle_last,
            "delta_log_window": self.delta_log_window,
            "l_equals_n": self.l_equals_n,
            "label": self.label,
            "n_qubits": self.n_qubits,
            "budget": self.budget,
        }
        return resolved


def _default_label(optimizer: dict) -> str:
    kind = optimizer["kind"]
    if kind == "early_stopping":
        return f"early_stopping(E_t={optimizer['threshold']}, P={optimizer['patience']})"
    if kind == "cost_average":
        return f"cost_average(E_t={optimizer['threshold']}, w={optimizer['window']})"
    if kind == "gate_wise":
        return f"gate_wise(p={optimizer['p']})"
    if kind == "iteration":
        return f"iteration(N={optimizer['period']})"
    return kind


# ---------------------------------------------------------------------------
# Problem construction


def build_observable(cfg: ExperimentConfig, init_rng: np.random.Generator) -> Observable:
    """Observable for one run; fidelity problems draw a fresh target state."""
    problem = cfg.problem
    if problem["kind"] == "heisenberg":
        return heisenberg_hamiltonian(problem["n"], problem["coupling"], problem["field"])
    if problem["kind"] == "hubbard":
        return hubbard_hamiltonian(
            problem["n_sites"], problem["tunneling"], problem["interaction"], problem["ordering"]
        )
    return fidelity_projector(sample_random_state(problem["n"], init_rng))


def resolve_ground_energy(cfg: ExperimentConfig) -> Optional[float]:
    """Reference E_g: exact for <= 10 qubits, user-supplied above, -1 for fidelity."""
    if cfg.problem["kind"] == "fidelity":
        return -1.0
    n = cfg.n_qubits
    if n <= DENSE_LIMIT:
        rng = np.random.default_rng(0)  # builders are deterministic; rng unused
        return exact_ground_energy(build_observable(cfg, rng), n).energy
    if cfg.reference_energy is not None:
        return float(cfg.reference_energy)
    by_size = cfg.reference_energies.get(str(n))
    if by_size is not None:
        return float(by_size)
    raise ConfigError(
        f"{n} qubits exceeds the dense solver limit ({DENSE_LIMIT}); supply "
        f"'reference_energy' or 'reference_energies[\"{n}\"]' in the config"
    )


def relative_error(energy: float, ground_energy: float) -> float:
    """|E - E_g| / |E_g|; undefined for E_g = 0."""
    if ground_energy == 0.0:
        raise UndefinedMetricError("relative error is undefined for E_g = 0")
    return abs(energy - ground_energy) / abs(ground_energy)


# ---------------------------------------------------------------------------
# Run execution


def _init_mode(optimizer: dict) -> str:
    if optimizer["kind"] in STANDALONE_OPTIMIZERS:
        return optimizer["kind"]
    return "rotosolve"  # every hybrid starts in the rotosolve representation


def build_run_circuit(cfg: ExperimentConfig, streams: RunStreams) -> Circuit:
    return init_circuit(
        cfg.n_qubits,
        cfg.layers,
        _init_mode(cfg.optimizer),
        streams.init,
        entangler=brick_entangler(cfg.n_qubits, cfg.entangler),
        entangle_last=cfg.entangle_last,
    )


def execute_run(cfg: ExperimentConfig, seed: int) -> RunRecord:
    """One seeded, self-contained run of the configured optimizer."""
    streams = RunStreams(seed)
    obs = build_observable(cfg, streams.init)  # fidelity target drawn before the circuit
    circuit = build_run_circuit(cfg, streams)
    ledger = EvalLedger(budget=cfg.budget)
    noise = cfg.noise_spec()
    optimizer = cfg.optimizer
    start = time.perf_counter()
    if optimizer["kind"] in STANDALONE_OPTIMIZERS:
        record = run_standalone(
            circuit, optimizer["kind"], obs, noise, ledger, streams,
            delta_log_window=cfg.delta_log_window,
        )
    elif optimizer["kind"] == "early_stopping":
        es = EarlyStopConfig(
            optimizer["threshold"], optimizer["patience"], optimizer["reset_on_improvement"]
        )
        record = run_early_stopping(circuit, es, obs, noise, ledger, streams)
    elif optimizer["kind"] == "cost_average":
        ca = CostAverageConfig(optimizer["threshold"], optimizer["window"])
        record = run_cost_average(circuit, ca, obs, noise, ledger, streams)
    elif optimizer["kind"] == "gate_wise":
        record = run_gate_wise(circuit, optimizer["p"], obs, noise, ledger, streams)
    else:
        record = run_iteration_hybrid(circuit, optimizer["period"], obs, noise, ledger, streams)
    record.wall_time = time.perf_counter() - start
    return record


# ---------------------------------------------------------------------------
# Statistics


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float

    def to_json_dict(self) -> dict:
        return {
            "mean": self.mean,
            "median": self.median,
            "q1": self.q1,
            "q3": self.q3,
            "whisker_low": self.whisker_low,
            "whisker_high": self.whisker_high,
        }


def compute_stats(values: Sequence[float]) -> SummaryStats:
    """Linear-interpolation quartiles with 1.5*IQR whiskers clipped to the data."""
    vals = np.asarray(list(values), dtype=np.float64)
    if vals.size == 0:
        raise ConfigError("compute_stats needs at least one value")
    q1, median, q3 = np.percentile(vals, [25.0, 50.0, 75.0])
    iqr = q3 - q1
    low_fence = q1 - 1.5 * iqr
    high_fence = q3 + 1.5 * iqr
    return SummaryStats(
        mean=float(vals.mean()),
        median=float(median),
        q1=float(q1),
        q3=float(q3),
        whisker_low=float(vals[vals >= low_fence].min()),
        whisker_high=float(vals[vals <= high_fence].max()),
    )


# ---------------------------------------------------------------------------
# Output files


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_trace_csv(path: Path, record: RunRecord) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["gate_opt_index", "evals_used", "cost", "delta_avg", "phase"])
        for entry in record.entries:
            writer.writerow(
                [
                    entry.gate_opt_index,
                    entry.evals_used,
                    repr(entry.cost),
                    "" if entry.delta is None else repr(entry.delta),
                    entry.phase,
                ]
            )


def run_experiment(
    cfg: ExperimentConfig, outdir: Path, jobs: Optional[int] = None
) -> tuple[list[RunRecord], dict]:
    """Execute all seeded runs and write the experiment directory.

    Runs are independent and dispatched to a process pool when jobs > 1; the
    collector writes files in seed order afterwards, so outputs do not depend
    on scheduling.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    ground = resolve_ground_energy(cfg)  # fail before any compute if unavailable
    seeds = [cfg.base_seed + i for i in range(cfg.runs)]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs > 1 and cfg.runs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(execute_run, [cfg] * len(seeds), seeds))
    else:
        records = [execute_run(cfg, seed) for seed in seeds]

    resolved = cfg.to_resolved_dict()
    resolved["ground_energy"] = ground
    template_obs = build_observable(cfg, np.random.default_rng(0))
    resolved["hamiltonian"] = (
        observable_to_json(template_obs) if isinstance(template_obs, PauliSum) else None
    )
    _write_json(outdir / "config.json", resolved)

    final_costs = [r.final_cost for r in records]
    rel_errors = None
    if ground is not None and ground != 0.0:
        rel_errors = [relative_error(cost, ground) for cost in final_costs]

    with (outdir / "runs.jsonl").open("w") as handle:
        for index, record in enumerate(records):
            row = record.to_json_dict()
            row["relative_error"] = None if rel_errors is None else rel_errors[index]
            handle.write(json.dumps(row, sort_keys=True) + "\n")
    for record in records:
        _write_trace_csv(outdir / f"trace_{record.seed}.csv", record)

    summary = {
        "runs": cfg.runs,
        "budget": cfg.budget,
        "n_qubits": cfg.n_qubits,
        "label": cfg.label,
        "ground_energy": ground,
        "final_costs": final_costs,
        "final_cost_stats": compute_stats(final_costs).to_json_dict(),
        "relative_errors": rel_errors,
        "relative_error_stats": (
            compute_stats(rel_errors).to_json_dict() if rel_errors is not None else None
        ),
    }
    _write_json(outdir / "summary.json", summary)
    return records, summary


def load_config(path: Path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    return ExperimentConfig.from_dict(data)
