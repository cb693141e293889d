"""Deterministic derivation of per-trial random streams from one master seed.

Every aggregate in this package is reproducible from a single integer. Child
streams come from numpy SeedSequence spawn keys with a fixed layout:

    (0, trial, 0)   perturbation-direction stream of trial `trial`
    (0, trial, 1)   measurement-noise stream of trial `trial`
    (1, probe)      per-probe master seed during process characterization
    (2,)            hidden-phase draw for generated multiphase scenes

Direction and noise streams are separate so that sampled and analytic runs
of the same trial share the identical direction sequence.
"""

import numpy as np

__all__ = ["trial_streams", "probe_seed", "scene_rng"]


def trial_streams(master_seed: int, trial: int):
    """(direction_rng, noise_rng) for one trial."""
    direction = np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(0, trial, 0))
    )
    noise = np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(0, trial, 1))
    )
    return direction, noise


def probe_seed(master_seed: int, probe_index: int) -> int:
    """64-bit master seed for the learning run of one characterization probe."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(1, probe_index))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def scene_rng(master_seed: int) -> np.random.Generator:
    """Generator used to draw hidden phases for generated scenes."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(2,)))
