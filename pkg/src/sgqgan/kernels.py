"""Numeric kernel backend selection.

The compiled extension (`sgqgan._native`, Cython) is preferred; the pure
numpy module (`sgqgan._purepy`) is the fallback. Override with the
environment variable SGQGAN_KERNELS = auto | native | python (read once at
import). Both backends satisfy the same contracts; see
benchmarks/kernel_benchmark.py for a speed comparison.
"""

import os

_requested = os.environ.get("SGQGAN_KERNELS", "auto")
if _requested not in ("auto", "native", "python"):
    raise ValueError(
        f"SGQGAN_KERNELS must be auto, native or python (got {_requested!r})"
    )

if _requested == "python":
    from . import _purepy as _impl

    BACKEND = "python"
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        if _requested == "native":
            raise
        from . import _purepy as _impl  # type: ignore[no-redef]

        BACKEND = "python"

canonical_normalize = _impl.canonical_normalize
overlap_abs2 = _impl.overlap_abs2
multiphase_prob = _impl.multiphase_prob
phase_accuracy = _impl.phase_accuracy
wrap_phases = _impl.wrap_phases
spsa_phase_run = _impl.spsa_phase_run
spsa_amp_run = _impl.spsa_amp_run


def backend() -> str:
    """Name of the kernel backend selected at import ('native' or 'python')."""
    return BACKEND
