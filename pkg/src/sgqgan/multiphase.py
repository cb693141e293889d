"""Simultaneous estimation of many phases from frequency-bin interference.

A scene holds n frequency bins with weights A_k, hidden phases psi_k and
probe phases phi_k. The optimizer ascends 1 - P(0) (matched phases minimize
the zero-delay coincidence probability), so the unique per-bin optimum is
phi_k = psi_k. Accuracy is the mean cosine similarity mapped onto [0, 1]:
for uniform weights it coincides with the objective itself.

Because the objective gradient carries the bin weight A_k = 1/n, the
default gain amplitude scales with n (``default_gains``); all gains remain
config-exposed. Default iteration counts scale the same way
(``default_iterations``).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels, spsa
from .errors import LengthMismatch
from .interference import HomMeasurementModel, measure_multiphase, validate_bin_weights
from .parallel import map_trials
from .seeding import trial_streams
from .state_learning import Trajectory, aggregate

__all__ = [
    "PhaseScene",
    "MultiphaseResult",
    "accuracy",
    "uniform_scene",
    "estimate",
    "default_gains",
    "default_iterations",
]


@dataclass(frozen=True, eq=False)
class PhaseScene:
    """Frequency-bin scene: weights A, RMS bandwidth sigma, phases psi/phi.

    Phases are wrapped into (-pi, pi] on construction; weights must be
    non-negative and sum to 1 within 1e-9. Bin center frequencies are
    optional metadata; when signal, idler and pump frequencies are all
    given they must satisfy energy conservation omega_s + omega_i = omega_p.
    """

    n: int
    A: np.ndarray
    sigma: float
    psi: np.ndarray
    phi: np.ndarray
    omega_signal: np.ndarray | None = None
    omega_idler: np.ndarray | None = None
    omega_pump: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("scene needs n >= 1 bins")
        weights = np.asarray(self.A, dtype=np.float64)
        psi = np.asarray(self.psi, dtype=np.float64)
        phi = np.asarray(self.phi, dtype=np.float64)
        if not (weights.size == psi.size == phi.size == self.n):
            raise LengthMismatch("A, psi and phi must all have length n")
        validate_bin_weights(weights)
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        psi = kernels.wrap_phases(psi)
        phi = kernels.wrap_phases(phi)
        for name, arr in (("A", weights), ("psi", psi), ("phi", phi)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if (
            self.omega_signal is not None
            and self.omega_idler is not None
            and self.omega_pump is not None
        ):
            total = np.asarray(self.omega_signal) + np.asarray(self.omega_idler)
            if not np.allclose(total, self.omega_pump, rtol=1e-9):
                raise ValueError(
                    "bin frequencies violate omega_s + omega_i = omega_p"
                )

    def with_probe(self, phi) -> "PhaseScene":
        return replace(self, phi=np.asarray(phi, dtype=np.float64))


def accuracy(psi, phi) -> float:
    """Mean of (1 + cos(psi_k - phi_k))/2: 1 iff all phases match mod 2pi."""
    psi = np.asarray(psi, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    if psi.size != phi.size:
        raise LengthMismatch(f"phase vectors of length {psi.size} and {phi.size}")
    return float(kernels.phase_accuracy(psi, phi))


def uniform_scene(n: int, sigma: float = 1.0, rng=None) -> PhaseScene:
    """Scene with A_k = 1/n, hidden phases i.i.d. uniform, probe phases 0."""
    if rng is None:
        rng = np.random.default_rng(0)
    psi = rng.uniform(-math.pi, math.pi, size=n)
    return PhaseScene(
        n=n, A=np.full(n, 1.0 / n), sigma=sigma, psi=psi, phi=np.zeros(n)
    )


def default_gains(n: int) -> spsa.GainSchedule:
    """Default gain schedule for an n-phase scene: a = 3n, rest standard."""
    return spsa.GainSchedule(a=3.0 * n)


def default_iterations(n: int) -> int:
    """Default iteration budget for an n-phase scene."""
    return max(100, 30 * n)


@dataclass(frozen=True)
class MultiphaseResult:
    trajectory: Trajectory
    final_phis: list


def _run_trial(scene, sched, model, iterations, master_seed, trial):
    direction_rng, noise_rng = trial_streams(master_seed, trial)
    directions = spsa.sample_directions(
        iterations, scene.n, spsa.REAL_ALPHABET, direction_rng
    )
    if model.mode == "analytic":
        phi, acc, _, _ = kernels.spsa_phase_run(
            scene.A,
            scene.psi,
            scene.phi,
            directions,
            sched.alphas(iterations),
            sched.betas(iterations),
        )
        return phi, acc

    trial_model = model.with_generator(noise_rng)
    phi = np.array(scene.phi, dtype=np.float64)
    acc = np.empty(iterations)
    for k in range(iterations):
        delta = directions[k]
        beta_k = sched.beta(k)
        plus, minus = spsa.perturbed_pair(phi, delta, beta_k)
        f_plus = 1.0 - measure_multiphase(trial_model, scene.with_probe(plus))
        f_minus = 1.0 - measure_multiphase(trial_model, scene.with_probe(minus))
        phi = spsa.step(phi, spsa.gradient(f_plus, f_minus, beta_k, delta), sched.alpha(k))
        acc[k] = accuracy(scene.psi, phi)
    return phi, acc


def estimate(
    scene: PhaseScene,
    sched: spsa.GainSchedule | None = None,
    model: HomMeasurementModel | None = None,
    iterations: int | None = None,
    trials: int = 50,
    master_seed: int = 0,
    threads: int = 1,
) -> MultiphaseResult:
    """Recover the scene's hidden phases by SPSA over the probe phases.

    The objective is 1 - measured P(0). Accuracy against the hidden phases
    is recorded after every update. Analytic trials run through the fused
    kernel; sampled trials share the identical direction streams, so at
    large pair budgets they converge to the analytic trajectories.
    """
    if sched is None:
        sched = default_gains(scene.n)
    if model is None:
        model = HomMeasurementModel()
    if iterations is None:
        iterations = default_iterations(scene.n)
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")

    def one(trial: int):
        try:
            return _run_trial(scene, sched, model, iterations, master_seed, trial)
        except Exception as exc:
            raise type(exc)(f"trial {trial}: {exc}") from exc

    outcomes = map_trials(one, trials, threads)
    series = np.vstack([acc for _, acc in outcomes])
    mean, std = aggregate(series)
    return MultiphaseResult(
        trajectory=Trajectory(series=series, mean=mean, std=std),
        final_phis=[phi for phi, _ in outcomes],
    )
