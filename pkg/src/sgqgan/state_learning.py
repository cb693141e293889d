"""Single-state learning loop: the generator chasing one quantum true state.

Each trial is an independent SPSA run whose objective is the measured HOM
overlap between the true state and the current candidate. Root fidelity to
the target is recorded after every update; trials aggregate into mean and
standard-deviation bands reproducible from one master seed.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels, spsa
from .errors import LengthMismatch
from .interference import HomMeasurementModel, measure_overlap
from .parallel import map_trials
from .seeding import trial_streams
from .states import KET_V, PureState, normalize, root_fidelity

__all__ = [
    "StateLearningTask",
    "Trajectory",
    "StateLearningResult",
    "builtin_targets",
    "learn",
    "aggregate",
]


def builtin_targets() -> dict[str, PureState]:
    """The six demo targets, renormalized from their quoted amplitudes.

    psi_t1..t3 are reachable with one half-wave plate (real amplitudes);
    psi_t4..t6 need a half- plus quarter-wave plate (complex amplitudes).
    """
    return {
        "psi_t1": normalize([1, 0]),
        "psi_t2": normalize([0.90, 0.44]),
        "psi_t3": normalize([0.69, 0.72]),
        "psi_t4": normalize([0.94, 0.34]),
        "psi_t5": normalize([0.75, 0.07 + 0.65j]),
        "psi_t6": normalize([0.82, 0.57 + 0.11j]),
    }


@dataclass(frozen=True)
class StateLearningTask:
    target: PureState
    initial: PureState = KET_V
    sched: spsa.GainSchedule = spsa.DEFAULT_GAINS
    model: HomMeasurementModel = field(default_factory=HomMeasurementModel)
    iterations: int = 20
    trials: int = 100
    master_seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.target.dim != self.initial.dim:
            raise LengthMismatch("target and initial state dimensions differ")


@dataclass(frozen=True)
class Trajectory:
    """Per-trial metric series (trials x iterations) with aggregate bands."""

    series: np.ndarray
    mean: np.ndarray
    std: np.ndarray


@dataclass(frozen=True)
class StateLearningResult:
    trajectory: Trajectory
    final_states: list
    logs: list


def aggregate(trials) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise mean and sample standard deviation of equal-length series."""
    series = [np.asarray(t, dtype=np.float64) for t in trials]
    length = series[0].size
    if any(t.size != length for t in series):
        raise LengthMismatch("trial series have different lengths")
    stack = np.vstack(series)
    mean = stack.mean(axis=0)
    std = np.zeros(length) if len(series) == 1 else stack.std(axis=0, ddof=1)
    return mean, std


def _fast_path_ok(task: StateLearningTask) -> bool:
    # The fused kernel cannot resample directions, so only use it where a
    # perturbed vector can never come close to zero norm.
    return (
        task.model.mode == "analytic"
        and task.sched.b * np.sqrt(task.target.dim) < 0.9
    )


def _run_trial(task: StateLearningTask, trial: int):
    direction_rng, noise_rng = trial_streams(task.master_seed, trial)
    iterations = task.iterations
    dim = task.target.dim
    if _fast_path_ok(task):
        directions = spsa.sample_directions(
            iterations, dim, spsa.COMPLEX_ALPHABET, direction_rng
        )
        alphas = task.sched.alphas(iterations)
        betas = task.sched.betas(iterations)
        final, fid, f_plus, f_minus = kernels.spsa_amp_run(
            task.target.amps, task.initial.amps, directions, alphas, betas
        )
        logs = [
            spsa.IterationLog(
                k, float(f_plus[k]), float(f_minus[k]), directions[k],
                float(alphas[k]), float(betas[k]), float(fid[k]),
            )
            for k in range(iterations)
        ]
        return PureState(final), fid, logs

    model = task.model.with_generator(noise_rng)

    def objective(state: PureState) -> float:
        return measure_overlap(model, task.target, state)[0]

    result = spsa.run(
        objective,
        task.initial,
        task.sched,
        iterations,
        direction_rng,
        metric=lambda state: root_fidelity(state, task.target),
    )
    fids = np.array([log.post_update_metric for log in result.logs])
    return result.final, fids, result.logs


def learn(task: StateLearningTask, threads: int = 1) -> StateLearningResult:
    """Run `task.trials` independent seeded learning runs and aggregate.

    Trial t uses the direction/noise streams derived from
    (task.master_seed, t); see sgqgan.seeding. Errors from a trial propagate
    tagged with the trial index.
    """

    def one(trial: int):
        try:
            return _run_trial(task, trial)
        except Exception as exc:
            raise type(exc)(f"trial {trial}: {exc}") from exc

    outcomes = map_trials(one, task.trials, threads)
    series = np.vstack([fids for _, fids, _ in outcomes])
    mean, std = aggregate(series)
    return StateLearningResult(
        trajectory=Trajectory(series=series, mean=mean, std=std),
        final_states=[state for state, _, _ in outcomes],
        logs=[logs for _, _, logs in outcomes],
    )
