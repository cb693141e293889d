#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Usage: python benchmarks/kernel_benchmark.py [--repeats N]

Covers the primitives plus the two fused SPSA loops (the actual hot paths:
the multiphase run dominates the n=100 workloads).
"""

import argparse
import time

import numpy as np

import sgqgan._purepy as purepy

try:
    import sgqgan._native as native
except ImportError:
    native = None


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def make_cases(rng):
    n = 100
    iterations = 3000
    weights = np.full(n, 1.0 / n)
    psi = rng.uniform(-np.pi, np.pi, n)
    phi = rng.uniform(-np.pi, np.pi, n)
    phase_dirs = (rng.integers(0, 2, size=(iterations, n)) * 2 - 1).astype(float)
    ks = np.arange(iterations, dtype=float)
    alphas = 3.0 * n / (ks + 1) ** 0.602
    betas = 0.1 / (ks + 1) ** 0.101

    amp = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    target = purepy.canonical_normalize(rng.standard_normal(2) + 1j * rng.standard_normal(2))
    symbols = np.array([1, -1, 1j, -1j])
    amp_dirs = symbols[rng.integers(0, 4, size=(iterations, 2))]

    def case(impl):
        return {
            "canonical_normalize (d=2, x10k)": lambda: [
                impl.canonical_normalize(amp) for _ in range(10_000)
            ],
            "overlap_abs2 (d=2, x10k)": lambda: [
                impl.overlap_abs2(target, target) for _ in range(10_000)
            ],
            "multiphase_prob (n=100, x10k)": lambda: [
                impl.multiphase_prob(weights, psi, phi, 1.0, 0.5) for _ in range(10_000)
            ],
            "phase_accuracy (n=100, x10k)": lambda: [
                impl.phase_accuracy(psi, phi) for _ in range(10_000)
            ],
            "spsa_phase_run (n=100, K=3000)": lambda: impl.spsa_phase_run(
                weights, psi, np.zeros(n), phase_dirs, alphas, betas
            ),
            "spsa_amp_run (d=2, K=3000)": lambda: impl.spsa_amp_run(
                target, np.array([0, 1], dtype=complex), amp_dirs,
                3.0 / (ks + 1) ** 0.602, betas
            ),
        }

    return case


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5, help="best-of repeats")
    args = parser.parse_args()

    if native is None:
        print("compiled kernels not built; showing python backend only")

    case = make_cases(np.random.default_rng(0))
    py_cases = case(purepy)
    nat_cases = case(native) if native is not None else None

    width = max(len(k) for k in py_cases)
    header = f"{'kernel':<{width}}  {'python':>10}  {'native':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name in py_cases:
        t_py = best_of(py_cases[name], args.repeats)
        if nat_cases is None:
            print(f"{name:<{width}}  {t_py * 1e3:>8.2f}ms  {'-':>10}  {'-':>8}")
            continue
        t_nat = best_of(nat_cases[name], args.repeats)
        print(
            f"{name:<{width}}  {t_py * 1e3:>8.2f}ms  {t_nat * 1e3:>8.2f}ms"
            f"  {t_py / t_nat:>7.1f}x"
        )


if __name__ == "__main__":
    main()
