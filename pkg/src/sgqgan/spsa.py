"""Simultaneous-perturbation stochastic approximation over quantum data.

One iteration measures the objective at two symmetric perturbations of the
current point along a random direction, forms the two-sided gradient
estimate

    g_k = (f_plus - f_minus) / (2 beta_k) * delta_k,

and ascends: point_{k+1} = point_k + alpha_k g_k. Two parameter spaces are
supported and dispatched on the point type:

* complex probability amplitudes (PureState) with direction symbols drawn
  from {1, -1, i, -i}; perturbed and updated vectors are renormalized
  before any measurement, because photons carry normalized states;
* real phase vectors (float ndarray) with direction symbols {1, -1};
  updates are wrapped into (-pi, pi].

Gain schedules follow alpha_k = a/(k+1+A)^s and beta_k = b/(k+1)^t.
"""

import csv
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, DomainError, ZeroVector
from .states import PureState

__all__ = [
    "GainSchedule",
    "DEFAULT_GAINS",
    "COMPLEX_ALPHABET",
    "REAL_ALPHABET",
    "sample_direction",
    "sample_directions",
    "perturbed_pair",
    "gradient",
    "step",
    "IterationLog",
    "SpsaResult",
    "run",
    "write_iteration_log_csv",
]

COMPLEX_SYMBOLS = np.array([1, -1, 1j, -1j], dtype=np.complex128)
COMPLEX_ALPHABET = "complex4"
REAL_ALPHABET = "real2"


@dataclass(frozen=True)
class GainSchedule:
    """Decaying step sizes for update (a, A, s) and perturbation (b, t)."""

    a: float = 3.0
    A: float = 0.0
    s: float = 0.602
    b: float = 0.1
    t: float = 0.101

    def __post_init__(self):
        for name in ("a", "s", "b", "t"):
            if getattr(self, name) <= 0:
                raise DomainError(f"gain parameter {name} must be > 0")
        if self.A < 0:
            raise DomainError("gain parameter A must be >= 0")

    def alpha(self, k: int) -> float:
        return self.a / (k + 1 + self.A) ** self.s

    def beta(self, k: int) -> float:
        return self.b / (k + 1) ** self.t

    def alphas(self, iterations: int) -> np.ndarray:
        k = np.arange(iterations, dtype=np.float64)
        return self.a / (k + 1 + self.A) ** self.s

    def betas(self, iterations: int) -> np.ndarray:
        k = np.arange(iterations, dtype=np.float64)
        return self.b / (k + 1) ** self.t


DEFAULT_GAINS = GainSchedule()


def sample_direction(dim: int, alphabet: str, rng: np.random.Generator) -> np.ndarray:
    """One random direction: i.i.d. unit symbols from the given alphabet."""
    return sample_directions(1, dim, alphabet, rng)[0]


def sample_directions(
    count: int, dim: int, alphabet: str, rng: np.random.Generator
) -> np.ndarray:
    """Pre-draw a (count, dim) block of directions from one stream.

    Runs draw their whole direction block up front so that analytic and
    sampled executions of the same seed share identical directions.
    """
    if alphabet == COMPLEX_ALPHABET:
        return COMPLEX_SYMBOLS[rng.integers(0, 4, size=(count, dim))]
    if alphabet == REAL_ALPHABET:
        return (rng.integers(0, 2, size=(count, dim)) * 2 - 1).astype(np.float64)
    raise DomainError(f"unknown direction alphabet {alphabet!r}")


def _alphabet_for(point) -> str:
    return COMPLEX_ALPHABET if isinstance(point, PureState) else REAL_ALPHABET


def perturbed_pair(point, delta: np.ndarray, beta_k: float):
    """Two symmetric perturbations of a point along a direction.

    Amplitude points are renormalized into PureStates; phase points are
    plain componentwise offsets (unwrapped, since only cosines of
    differences are ever measured).
    """
    if isinstance(point, PureState):
        if len(delta) != point.dim:
            raise DimensionMismatch("direction length != state dimension")
        kick = beta_k * delta
        return PureState(point.amps + kick), PureState(point.amps - kick)
    point = np.asarray(point, dtype=np.float64)
    if len(delta) != point.size:
        raise DimensionMismatch("direction length != phase-vector length")
    kick = beta_k * np.asarray(delta, dtype=np.float64)
    return point + kick, point - kick


def gradient(f_plus: float, f_minus: float, beta_k: float, delta: np.ndarray):
    """Two-sided gradient estimate (f_plus - f_minus) / (2 beta_k) * delta."""
    return ((f_plus - f_minus) / (2.0 * beta_k)) * delta


def step(point, g: np.ndarray, alpha_k: float):
    """Ascend by alpha_k * g; renormalize amplitudes or wrap phases."""
    if isinstance(point, PureState):
        return PureState(point.amps + alpha_k * g)
    moved = np.asarray(point, dtype=np.float64) + alpha_k * np.asarray(
        g, dtype=np.float64
    )
    return kernels.wrap_phases(moved)


@dataclass(frozen=True)
class IterationLog:
    """Per-iteration record of a run."""

    k: int
    f_plus: float
    f_minus: float
    direction: np.ndarray
    alpha_k: float
    beta_k: float
    post_update_metric: float


@dataclass(frozen=True)
class SpsaResult:
    final: object
    logs: list


def run(
    objective,
    initial,
    sched: GainSchedule,
    iterations: int,
    rng: np.random.Generator,
    metric=None,
) -> SpsaResult:
    """Run SPSA for exactly `iterations` iterations (2 objective calls each).

    `objective` maps a point to a measured value in [0, 1]; `metric`, when
    given, is evaluated on the point after each update and stored in the
    log. Deterministic for a fixed generator state and a deterministic
    objective. Measurement errors propagate with the iteration index
    attached.
    """
    if iterations < 1:
        raise DomainError(f"iterations must be >= 1, got {iterations}")
    point = initial
    dim = point.dim if isinstance(point, PureState) else np.asarray(point).size
    alphabet = _alphabet_for(point)
    directions = sample_directions(iterations, dim, alphabet, rng)
    logs = []
    for k in range(iterations):
        delta = directions[k]
        beta_k = sched.beta(k)
        try:
            plus, minus = perturbed_pair(point, delta, beta_k)
        except ZeroVector:
            delta = sample_direction(dim, alphabet, rng)
            plus, minus = perturbed_pair(point, delta, beta_k)
        try:
            f_plus = objective(plus)
            f_minus = objective(minus)
        except Exception as exc:
            raise type(exc)(f"iteration {k}: {exc}") from exc
        alpha_k = sched.alpha(k)
        point = step(point, gradient(f_plus, f_minus, beta_k, delta), alpha_k)
        value = float(metric(point)) if metric is not None else float("nan")
        logs.append(
            IterationLog(k, float(f_plus), float(f_minus), delta, alpha_k, beta_k, value)
        )
    return SpsaResult(point, logs)


def write_iteration_log_csv(path, logs) -> None:
    """Write IterationLogs as CSV: k, f_plus, f_minus, alpha_k, beta_k, metric."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "f_plus", "f_minus", "alpha_k", "beta_k", "metric"])
        for log in logs:
            writer.writerow(
                [
                    log.k,
                    repr(log.f_plus),
                    repr(log.f_minus),
                    repr(log.alpha_k),
                    repr(log.beta_k),
                    repr(log.post_update_metric),
                ]
            )
