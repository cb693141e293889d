"""Shared test utilities: independent oracles and random generators."""

import cmath
import math

import numpy as np

from sgqgan import JonesUnitary, PureState, normalize


def random_state(rng, dim=2) -> PureState:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return normalize(z)


def haar_unitary(rng) -> JonesUnitary:
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return JonesUnitary(q * (d / np.abs(d)))


def overlap_oracle(amps_a, amps_b) -> float:
    """|<a|b>|^2 via plain scalar complex arithmetic (normalizing inputs)."""
    norm_a = math.sqrt(sum(abs(z) ** 2 for z in amps_a))
    norm_b = math.sqrt(sum(abs(z) ** 2 for z in amps_b))
    inner = sum((za / norm_a).conjugate() * (zb / norm_b) for za, zb in zip(amps_a, amps_b))
    return abs(inner) ** 2


def multiphase_prob_oracle(weights, psi, phi, sigma, tau) -> float:
    """Brute-force fringe formula, scalar math only."""
    damp = math.exp(-(sigma**2) * (tau**2))
    total = 0.0
    for w, p, q in zip(weights, psi, phi):
        total += (w / 2.0) * (1.0 - math.cos(p - q) * damp)
    return total


def wrap_oracle(x: float) -> float:
    """Wrap a single angle into (-pi, pi] with scalar math."""
    y = math.fmod(x + math.pi, 2.0 * math.pi)
    if y <= 0.0:
        y += 2.0 * math.pi
    return y - math.pi


def rotate_global_phase(state: PureState, theta: float):
    """Raw (non-canonical) amplitudes of state multiplied by e^{i theta}."""
    return state.amps * cmath.exp(1j * theta)
