"""Sequential single-qubit circuit optimizers with cost-driven hybrid switching.

A state-vector simulator, spin-chain and fermionic cost functions, the
rotosolve/fraxis/fqs per-gate minimizers, switching schedulers, and a seeded
benchmark harness with a CLI.
"""

from .circuit import (
    AxisAngle,
    Circuit,
    FreeAxis,
    NoiseSpec,
    Quaternion,
    brick_entangler,
    canonical_angle,
    canonical_quaternion,
    circuit_from_json,
    circuit_to_json,
    evaluate_circuit,
    gate_unitary,
    init_circuit,
    to_quaternion,
)
from .errors import (
    BudgetExhaustedError,
    CapabilityError,
    ConfigError,
    NumericError,
    UndefinedMetricError,
)
from .harness import (
    ExperimentConfig,
    SummaryStats,
    compute_stats,
    execute_run,
    load_config,
    relative_error,
    resolve_ground_energy,
    run_experiment,
)
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
    GroundStateResult,
    dense_matrix,
    exact_ground_energy,
    fidelity_projector,
    heisenberg_hamiltonian,
    hubbard_hamiltonian,
    observable_from_json,
    observable_to_json,
    sample_random_state,
)
from .optimizers import (
    EvalLedger,
    GateUpdateResult,
    fqs_update,
    fraxis_update,
    jacobi_eigh,
    make_budget,
    rotosolve_update,
    sweep,
)
from .records import RunRecord, SwitchEvent, TraceEntry
from .rng import RunStreams
from .statevec import (
    EntanglerSpec,
    Observable,
    PauliString,
    PauliSum,
    Projector,
    StateVector,
    apply_entangler,
    apply_single_qubit,
    estimate_expectation,
    exact_expectation,
    init_zero_state,
)

__version__ = "0.1.0"
