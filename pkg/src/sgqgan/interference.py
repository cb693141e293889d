"""Hong-Ou-Mandel measurement models: the discriminator of the learning game.

Two regimes are modeled. For independent single photons meeting at a
balanced beam splitter the coincidence (anti-bunching) probability is
(1 - f)/2 where f is the state overlap, so the dip depth estimates f. For
frequency-bin entangled pairs carrying per-bin phase offsets the
zero-delay coincidence probability follows the sum-over-bins fringe
formula implemented in `coincidence_prob_multiphase`.

`analytic` mode returns exact probabilities; `sampled` mode draws photon
pair counts (binomial) plus optional accidental background counts
(Poisson) and estimates from count ratios, which is where shot noise
enters the learning loop.
"""

import csv
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .errors import (
    DegenerateBaseline,
    DimensionMismatch,
    DomainError,
    InvalidAmplitudes,
)
from .states import PureState, overlap

__all__ = [
    "HomMeasurementModel",
    "CoincidenceRecord",
    "coincidence_prob_dip",
    "measure_overlap",
    "coincidence_prob_multiphase",
    "measure_multiphase",
    "write_coincidence_csv",
]

MODES = ("analytic", "sampled")


@dataclass(frozen=True)
class CoincidenceRecord:
    """Audit trail of one visibility measurement.

    Counts are populated only by sampled measurements; analytic ones carry
    zeros and the exact overlap.
    """

    setting_id: str
    counts_dip: int
    counts_baseline: int
    estimated_overlap: float


@dataclass
class HomMeasurementModel:
    """Measurement backend with a photon-pair budget and background noise.

    `pairs_per_setting` is the number of photon pairs N spent per visibility
    setting; `background_rate` is the mean accidental-coincidence count
    added independently to dip and baseline counts. The model owns its RNG:
    use one instance per logical thread; independent instances with
    distinct seeds may run concurrently.
    """

    mode: str = "analytic"
    pairs_per_setting: int = 1000
    background_rate: float = 0.0
    rng_seed: int = 0
    _rng: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "sampled" and self.pairs_per_setting < 1:
            raise DomainError("pairs_per_setting must be >= 1 in sampled mode")
        if self.background_rate < 0:
            raise DomainError("background_rate must be >= 0")
        self._rng = np.random.default_rng(self.rng_seed)

    def with_generator(self, rng: np.random.Generator) -> "HomMeasurementModel":
        """Copy of this model driven by an externally derived generator."""
        clone = replace(self)
        clone._rng = rng
        return clone


def coincidence_prob_dip(f: float) -> float:
    """Coincidence probability (1 - f)/2 for two photons of overlap f."""
    if not 0.0 <= f <= 1.0:
        raise DomainError(f"overlap must lie in [0, 1], got {f}")
    return (1.0 - f) / 2.0


def _sampled_counts(model: HomMeasurementModel, p_dip: float):
    """Dip/baseline count pair; resamples once on a zero baseline."""
    n = model.pairs_per_setting
    bg = model.background_rate
    for _ in range(2):
        dip = int(model._rng.binomial(n, p_dip))
        baseline = int(model._rng.binomial(n, 0.5))
        if bg > 0:
            dip += int(model._rng.poisson(bg))
            baseline += int(model._rng.poisson(bg))
        if baseline > 0:
            return dip, baseline
    raise DegenerateBaseline("baseline counts were zero twice in a row")


def measure_overlap(
    model: HomMeasurementModel,
    true_state: PureState,
    probe: PureState,
    setting_id: str = "",
) -> tuple[float, CoincidenceRecord]:
    """Estimate |<probe|true>|^2 from a HOM dip/baseline measurement.

    Sampled mode normalizes dip counts by concurrently sampled baseline
    (fully distinguishable) counts, mirroring experimental practice, and
    clamps the estimate into [0, 1].
    """
    if true_state.dim != probe.dim:
        raise DimensionMismatch(
            f"true state d={true_state.dim}, probe d={probe.dim}"
        )
    f = overlap(true_state, probe)
    if model.mode == "analytic":
        return f, CoincidenceRecord(setting_id, 0, 0, f)
    dip, baseline = _sampled_counts(model, coincidence_prob_dip(f))
    estimate = min(max(1.0 - dip / baseline, 0.0), 1.0)
    return estimate, CoincidenceRecord(setting_id, dip, baseline, estimate)


def coincidence_prob_multiphase(scene, tau: float) -> float:
    """Zero- or finite-delay coincidence probability of a phase scene.

    P(tau) = sum_k A_k/2 [1 - cos(psi_k - phi_k) exp(-sigma^2 tau^2)].
    Scene weights are validated at scene construction.
    """
    p = kernels.multiphase_prob(scene.A, scene.psi, scene.phi, scene.sigma, tau)
    return float(p)


def measure_multiphase(model: HomMeasurementModel, scene) -> float:
    """Estimate the zero-delay coincidence probability P(0) of a scene.

    Sampled mode draws binomial counts over the pair budget, adds background
    counts, and normalizes by budget plus expected background.
    """
    p = coincidence_prob_multiphase(scene, 0.0)
    if model.mode == "analytic":
        return p
    n = model.pairs_per_setting
    bg = model.background_rate
    counts = int(model._rng.binomial(n, p))
    if bg > 0:
        counts += int(model._rng.poisson(bg))
    return min(max(counts / (n + bg), 0.0), 1.0)


def validate_bin_weights(weights: np.ndarray) -> None:
    """Raise InvalidAmplitudes unless weights are >= 0 and sum to 1 (1e-9)."""
    if np.any(weights < 0):
        raise InvalidAmplitudes("bin weights must be non-negative")
    total = float(np.sum(weights))
    if abs(total - 1.0) > 1e-9:
        raise InvalidAmplitudes(f"bin weights sum to {total!r}, expected 1")


def write_coincidence_csv(path, records) -> None:
    """Write CoincidenceRecords as CSV rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["setting_id", "counts_dip", "counts_baseline", "estimated_overlap"]
        )
        for rec in records:
            writer.writerow(
                [
                    rec.setting_id,
                    rec.counts_dip,
                    rec.counts_baseline,
                    repr(rec.estimated_overlap),
                ]
            )
