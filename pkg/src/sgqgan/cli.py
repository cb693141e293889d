"""Command-line front end.

    sgqgan <command> --config <path> [--seed <u64>] [--out <prefix>]

Commands: learn-state, characterize, multiphase, sweep. Each run writes a
manifest JSON echoing the fully resolved config (the manifest is itself a
valid config and re-runs the experiment exactly), per-trial trajectory CSV
and an aggregate CSV; characterize additionally writes the reconstructed
chi matrix, sweep writes the grid result table instead of trajectories.

Exit codes: 0 success, 2 config error, 3 runtime error. SGQGAN_THREADS
caps trial concurrency (0 = auto); output bytes do not depend on it.
"""

import argparse
import csv
import sys

import numpy as np

from . import __version__, kernels
from .config import ExperimentConfig, grid_points, parse_config, resolve_state_text
from .errors import RangeError, SchemaError, SgqganError
from .interference import HomMeasurementModel
from .multiphase import PhaseScene, estimate
from .output import write_aggregate_csv, write_json, write_trials_csv
from .parallel import threads_from_env
from .process import BlackBoxProcess, characterize, parse_waveplates
from .seeding import scene_rng
from .state_learning import StateLearningTask, Trajectory, aggregate, learn

__all__ = ["main", "execute"]


def _manifest_dict(cfg: ExperimentConfig, extra=None) -> dict:
    doc = cfg.to_json_dict()
    if extra:
        doc.update(extra)
    doc["provenance"] = {
        "package": "sgqgan",
        "version": __version__,
        "kernel_backend": kernels.backend(),
    }
    return doc


def _model(cfg: ExperimentConfig) -> HomMeasurementModel:
    return HomMeasurementModel(
        mode=cfg.model_mode,
        pairs_per_setting=cfg.pairs_per_setting,
        background_rate=cfg.background_rate,
    )


def _build_scene(cfg: ExperimentConfig) -> PhaseScene:
    if cfg.scene_psi is not None:
        psi = np.array(cfg.scene_psi, dtype=np.float64)
    else:
        psi = scene_rng(cfg.master_seed).uniform(-np.pi, np.pi, size=cfg.scene_n)
    return PhaseScene(
        n=cfg.scene_n,
        A=np.array(cfg.scene_A, dtype=np.float64),
        sigma=cfg.scene_sigma,
        psi=psi,
        phi=np.zeros(cfg.scene_n),
    )


def _run_learn_state(cfg: ExperimentConfig, threads: int):
    task = StateLearningTask(
        target=resolve_state_text(cfg.target),
        initial=resolve_state_text(cfg.initial),
        sched=cfg.sched,
        model=_model(cfg),
        iterations=cfg.iterations,
        trials=cfg.trials,
        master_seed=cfg.master_seed,
    )
    result = learn(task, threads=threads)
    return result.trajectory, "fidelity", {}


def _run_multiphase(cfg: ExperimentConfig, threads: int):
    scene = _build_scene(cfg)
    result = estimate(
        scene,
        sched=cfg.sched,
        model=_model(cfg),
        iterations=cfg.iterations,
        trials=cfg.trials,
        master_seed=cfg.master_seed,
        threads=threads,
    )
    resolved_scene = {
        "n": cfg.scene_n,
        "A": list(cfg.scene_A),
        "sigma": cfg.scene_sigma,
        "psi": [float(v) for v in scene.psi],
    }
    return result.trajectory, "accuracy", {"scene": resolved_scene}


def _complex_pairs(matrix: np.ndarray) -> list:
    return [[z.real, z.imag] for z in np.asarray(matrix).reshape(-1)]


def _run_characterize(cfg: ExperimentConfig, threads: int, prefix: str):
    box = BlackBoxProcess(parse_waveplates(cfg.process))
    result = characterize(
        box,
        probes=[resolve_state_text(p) for p in cfg.probes],
        sched=cfg.sched,
        model=_model(cfg),
        iterations=cfg.iterations,
        master_seed=cfg.master_seed,
        threads=threads,
    )
    chi_doc = result.process_map.to_json_dict()
    chi_doc["unitary"] = _complex_pairs(result.unitary.matrix)
    write_json(f"{prefix}.chi.json", chi_doc)
    series = np.vstack([t.series[0] for t in result.probe_trajectories])
    mean, std = aggregate(series)
    return Trajectory(series=series, mean=mean, std=std), "fidelity", {}


def _run_sweep(cfg: ExperimentConfig, threads: int, prefix: str) -> list:
    names = [name for name, _ in cfg.grid]
    rows = []
    for overrides, point_cfg in grid_points(cfg):
        if point_cfg.command == "learn-state":
            trajectory, _, _ = _run_learn_state(point_cfg, threads)
        else:
            trajectory, _, _ = _run_multiphase(point_cfg, threads)
        rows.append(
            [overrides[name] for name in names]
            + [trajectory.mean[-1], trajectory.std[-1]]
        )
    with open(f"{prefix}.sweep.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names + ["mean_final", "std_final"])
        for row in rows:
            writer.writerow(
                [v if isinstance(v, str) else repr(float(v)) for v in row[:-2]]
                + [repr(float(row[-2])), repr(float(row[-1]))]
            )
    return [f"{prefix}.sweep.csv"]


def execute(cfg: ExperimentConfig, threads: int | None = None) -> list:
    """Run a resolved config; returns the list of files written."""
    if threads is None:
        threads = threads_from_env()
    prefix = cfg.output_prefix
    written = []
    extra = {}
    if cfg.command == "sweep":
        written += _run_sweep(cfg, threads, prefix)
    else:
        if cfg.command == "learn-state":
            trajectory, label, extra = _run_learn_state(cfg, threads)
        elif cfg.command == "multiphase":
            trajectory, label, extra = _run_multiphase(cfg, threads)
        else:
            trajectory, label, extra = _run_characterize(cfg, threads, prefix)
            written.append(f"{prefix}.chi.json")
        write_trials_csv(f"{prefix}.trials.csv", trajectory.series, label)
        write_aggregate_csv(f"{prefix}.aggregate.csv", trajectory.mean, trajectory.std)
        written += [f"{prefix}.trials.csv", f"{prefix}.aggregate.csv"]
    write_json(f"{prefix}.manifest.json", _manifest_dict(cfg, extra))
    written.append(f"{prefix}.manifest.json")
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sgqgan",
        description="Self-guided adversarial learning of quantum states, "
        "processes and phases against simulated HOM interference.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command in ("learn-state", "characterize", "multiphase", "sweep"):
        p = sub.add_parser(command)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument("--out", default=None, help="output path prefix override")
    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
        if cfg.command != args.command:
            raise SchemaError(
                "$.command", f"config says {cfg.command!r}, CLI says {args.command!r}"
            )
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise RangeError("--seed", args.seed, "must be a u64")
            cfg = cfg.with_master_seed(args.seed)
        if args.out is not None:
            cfg = cfg.with_output_prefix(args.out)
    except (SchemaError, RangeError, OSError) as exc:
        print(f"sgqgan: config error: {exc}", file=sys.stderr)
        return 2

    try:
        written = execute(cfg)
    except (SgqganError, OSError, ValueError) as exc:
        print(f"sgqgan: {exc}", file=sys.stderr)
        return 3
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
