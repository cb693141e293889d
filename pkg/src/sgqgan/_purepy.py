"""Pure-numpy implementations of the numeric hot kernels.

This module is the fallback backend: `sgqgan.kernels` prefers the compiled
extension `sgqgan._native` and falls back to these functions when the
extension is unavailable. Both backends implement the same contracts; the
compiled one exists because the SPSA measurement loops dominate runtime.
"""

import numpy as np

from .errors import ZeroVector

_NORM_FLOOR = 1e-12
_TWO_PI = 2.0 * np.pi


def canonical_normalize(amps: np.ndarray) -> np.ndarray:
    """Return a unit-norm copy with the first significant entry real >= 0."""
    v = np.asarray(amps, dtype=np.complex128)
    norm = np.sqrt((v.real * v.real + v.imag * v.imag).sum())
    if norm <= _NORM_FLOOR:
        raise ZeroVector(f"vector norm {norm:.3e} <= {_NORM_FLOOR:.0e}")
    v = v / norm
    idx = int(np.argmax(np.abs(v) > _NORM_FLOOR))
    pivot = v[idx]
    return v * (pivot.conjugate() / abs(pivot))


def overlap_abs2(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 for complex vectors, clamped into [0, 1]."""
    inner = np.vdot(a, b)
    value = (inner * inner.conjugate()).real
    return min(max(value, 0.0), 1.0)


def multiphase_prob(weights, psi, phi, sigma: float, tau: float) -> float:
    """Two-photon coincidence probability for a frequency-bin scene.

    P(tau) = sum_k w_k/2 * (1 - cos(psi_k - phi_k) * exp(-sigma^2 tau^2)).
    """
    damp = np.exp(-(sigma * sigma) * (tau * tau))
    terms = 0.5 * np.asarray(weights) * (1.0 - np.cos(np.asarray(psi) - np.asarray(phi)) * damp)
    return float(np.sum(terms))


def phase_accuracy(psi, phi) -> float:
    """Mean cosine similarity of two phase vectors, mapped onto [0, 1]."""
    return float(np.mean((1.0 + np.cos(np.asarray(psi) - np.asarray(phi))) / 2.0))


def wrap_phases(x) -> np.ndarray:
    """Wrap angles into (-pi, pi]."""
    w = np.mod(np.asarray(x, dtype=np.float64) + np.pi, _TWO_PI) - np.pi
    if np.isscalar(w) or w.ndim == 0:
        return np.float64(np.pi) if w == -np.pi else w
    w[w == -np.pi] = np.pi
    return w


def spsa_phase_run(weights, psi, phi0, directions, alphas, betas):
    """Analytic SPSA ascent over a real phase vector.

    Objective is 1 - P(0) for the scene (weights, psi, probe). Directions are
    pre-drawn +/-1 entries of shape (K, n); alphas/betas are the per-iteration
    gains. Returns (final probe phases, accuracy series, f_plus series,
    f_minus series); accuracy is recorded post-update.
    """
    weights = np.asarray(weights, dtype=np.float64)
    psi = np.asarray(psi, dtype=np.float64)
    phi = np.array(phi0, dtype=np.float64)
    directions = np.asarray(directions)
    iterations = directions.shape[0]
    acc = np.empty(iterations)
    f_plus = np.empty(iterations)
    f_minus = np.empty(iterations)
    for k in range(iterations):
        delta = directions[k]
        step = betas[k] * delta
        f_plus[k] = 1.0 - multiphase_prob(weights, psi, phi + step, 0.0, 0.0)
        f_minus[k] = 1.0 - multiphase_prob(weights, psi, phi - step, 0.0, 0.0)
        gain = (f_plus[k] - f_minus[k]) / (2.0 * betas[k]) * alphas[k]
        phi = wrap_phases(phi + gain * delta)
        acc[k] = phase_accuracy(psi, phi)
    return phi, acc, f_plus, f_minus


def spsa_amp_run(target, initial, directions, alphas, betas):
    """Analytic SPSA ascent over complex probability amplitudes.

    Objective is |<probe|target>|^2 with the probe renormalized before each
    measurement. Directions are pre-drawn unit symbols of shape (K, d).
    Returns (final amplitudes, root-fidelity series, f_plus series, f_minus
    series); root fidelity is recorded post-update.
    """
    target = np.asarray(target, dtype=np.complex128)
    phi = canonical_normalize(initial)
    directions = np.asarray(directions, dtype=np.complex128)
    iterations = directions.shape[0]
    fid = np.empty(iterations)
    f_plus = np.empty(iterations)
    f_minus = np.empty(iterations)
    for k in range(iterations):
        delta = directions[k]
        step = betas[k] * delta
        f_plus[k] = overlap_abs2(canonical_normalize(phi + step), target)
        f_minus[k] = overlap_abs2(canonical_normalize(phi - step), target)
        gain = (f_plus[k] - f_minus[k]) / (2.0 * betas[k]) * alphas[k]
        phi = canonical_normalize(phi + gain * delta)
        fid[k] = np.sqrt(overlap_abs2(phi, target))
    return phi, fid, f_plus, f_minus
