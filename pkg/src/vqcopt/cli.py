"""Command-line entry points.

Subcommands:
  run           execute an experiment config and write its output directory
  ground-state  print the exact reference energy for a config's problem
  sweep         scalability protocol: rerun the config across system sizes
                with the layer count tied to the qubit count (L = n)

Exit codes: 0 success, 2 configuration error, 3 numeric error. When --outdir
is omitted the root defaults to $VQC_OUTDIR (falling back to ./runs) plus the
config file stem.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

from .errors import ConfigError, NumericError
from .harness import ExperimentConfig, load_config, resolve_ground_energy, run_experiment


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vqcopt")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment config")
    run_p.add_argument("--config", required=True, type=Path)
    run_p.add_argument("--outdir", type=Path, default=None)
    run_p.add_argument("--jobs", type=int, default=None)
    run_p.add_argument("--seed", type=int, default=None, help="override base_seed")

    gs_p = sub.add_parser("ground-state", help="print the exact ground energy")
    gs_p.add_argument("--config", required=True, type=Path)

    sweep_p = sub.add_parser("sweep", help="rerun the config across system sizes (L = n)")
    sweep_p.add_argument("--config", required=True, type=Path)
    sweep_p.add_argument("--vary", required=True, help="e.g. n=7,9,11,13,15")
    sweep_p.add_argument("--outdir", type=Path, default=None)
    sweep_p.add_argument("--jobs", type=int, default=None)
    sweep_p.add_argument("--seed", type=int, default=None)

    return parser


def _default_outdir(config_path: Path) -> Path:
    root = Path(os.environ.get("VQC_OUTDIR", "runs"))
    return root / config_path.stem


def _with_overrides(cfg: ExperimentConfig, seed) -> ExperimentConfig:
    if seed is None:
        return cfg
    return dataclasses.replace(cfg, base_seed=seed)


def _parse_vary(vary: str) -> list[int]:
    key, _, values = vary.partition("=")
    if key.strip() != "n" or not values:
        raise ConfigError(f"--vary must look like n=7,9,11, got {vary!r}")
    try:
        sizes = [int(v) for v in values.split(",")]
    except ValueError:
        raise ConfigError(f"--vary sizes must be integers, got {values!r}")
    if any(n < 1 for n in sizes):
        raise ConfigError("--vary sizes must be positive")
    return sizes


def _resize_problem(cfg: ExperimentConfig, n: int) -> ExperimentConfig:
    if cfg.problem["kind"] not in ("heisenberg", "fidelity"):
        raise ConfigError(
            f"sweep sets the qubit count directly; problem kind "
            f"{cfg.problem['kind']!r} has no 'n' field"
        )
    problem = dict(cfg.problem)
    problem["n"] = n
    return dataclasses.replace(cfg, problem=problem, layers=n)


def _cmd_run(args) -> int:
    cfg = _with_overrides(load_config(args.config), args.seed)
    outdir = args.outdir if args.outdir is not None else _default_outdir(args.config)
    _, summary = run_experiment(cfg, outdir, jobs=args.jobs)
    print(f"wrote {cfg.runs} runs to {outdir}")
    stats = summary["relative_error_stats"] or summary["final_cost_stats"]
    print(f"median={stats['median']:.6g} mean={stats['mean']:.6g}")
    return 0


def _cmd_ground_state(args) -> int:
    cfg = load_config(args.config)
    energy = resolve_ground_energy(cfg)
    print(f"{energy!r}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _with_overrides(load_config(args.config), args.seed)
    outdir = args.outdir if args.outdir is not None else _default_outdir(args.config)
    for n in _parse_vary(args.vary):
        sized = _resize_problem(cfg, n)
        resolve_ground_energy(sized)  # fail early on missing reference energies
        subdir = Path(outdir) / f"n{n:02d}"
        run_experiment(sized, subdir, jobs=args.jobs)
        print(f"n={n}: wrote {sized.runs} runs to {subdir}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "ground-state": _cmd_ground_state, "sweep": _cmd_sweep}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
