"""Run records: per-gate cost traces, switch events, and JSON forms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class TraceEntry:
    gate_opt_index: int  # 1-based count of gate optimizations in the run
    evals_used: int
    cost: float
    delta: Optional[float]  # scheduler's delta stream value, None until defined
    phase: str  # optimizer that produced this update


@dataclass(frozen=True)
class SwitchEvent:
    gate_optimization_index: int
    evaluations_at_switch: int
    trigger: str  # "patience" | "average" | "none"

    def to_json_dict(self) -> dict:
        return {
            "gate_optimization_index": self.gate_optimization_index,
            "evaluations_at_switch": self.evaluations_at_switch,
            "trigger": self.trigger,
        }


@dataclass
class RunRecord:
    """Everything one optimization run produced: trace, switch, final energy."""

    seed: int
    budget: int
    entries: list[TraceEntry] = field(default_factory=list)
    switch: Optional[SwitchEvent] = None
    wall_time: float = 0.0
    conversions: int = 0  # representation-conversion events (hybrid bookkeeping)
    lossy_conversions: int = 0  # gates converted via best single-axis approximation

    def add(self, cost: float, evals_used: int, phase: str, delta: Optional[float]) -> TraceEntry:
        entry = TraceEntry(len(self.entries) + 1, evals_used, cost, delta, phase)
        self.entries.append(entry)
        return entry

    @property
    def final_cost(self) -> float:
        return self.entries[-1].cost if self.entries else math.nan

    @property
    def evaluations_used(self) -> int:
        return self.entries[-1].evals_used if self.entries else 0

    def mark_switch(self, trigger: str) -> None:
        if self.switch is not None:
            raise RuntimeError("a run may switch optimizers at most once")
        self.switch = SwitchEvent(len(self.entries), self.evaluations_used, trigger)

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "budget": self.budget,
            "final_cost": None if math.isnan(self.final_cost) else self.final_cost,
            "evaluations_used": self.evaluations_used,
            "n_gate_optimizations": len(self.entries),
            "switch": self.switch.to_json_dict() if self.switch else None,
            "conversions": self.conversions,
            "lossy_conversions": self.lossy_conversions,
            "wall_time": self.wall_time,
        }
