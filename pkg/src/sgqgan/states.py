"""Pure states at small dimension, wave-plate optics and overlap metrics.

Conventions used throughout the package:

* States are canonical: unit norm, and the first amplitude of modulus
  > 1e-12 is real and non-negative. Global phase therefore never appears
  in stored data, which makes state equality testable.
* The computational basis for polarization qubits is (|H>, |V>); |H> sits
  at the +z pole of the Bloch sphere.
* Wave-plate angles are fast-axis angles in radians from horizontal.
"""

import re
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, NotUnitary

__all__ = [
    "PureState",
    "JonesUnitary",
    "normalize",
    "overlap",
    "root_fidelity",
    "bloch_coords",
    "hwp",
    "qwp",
    "apply_unitary",
    "parse_state",
    "named_qubit_states",
    "KET_H",
    "KET_V",
    "KET_D",
    "KET_R",
]


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit-norm complex amplitude vector in canonical gauge.

    Any vector with norm > 1e-12 may be passed in; construction normalizes
    and gauge-fixes it. Raises ZeroVector otherwise.
    """

    amps: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if arr.size < 2:
            raise DimensionMismatch(f"states need dimension >= 2, got {arr.size}")
        arr = kernels.canonical_normalize(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "amps", arr)

    @property
    def dim(self) -> int:
        return self.amps.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, PureState):
            return NotImplemented
        return bool(np.array_equal(self.amps, other.amps))

    def __hash__(self):
        return hash(self.amps.tobytes())

    def __repr__(self):
        entries = ", ".join(_format_amp(a) for a in self.amps)
        return f"PureState({entries})"


@dataclass(frozen=True, eq=False)
class JonesUnitary:
    """2x2 unitary Jones matrix. Validates U+U = I and |det U| = 1."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise DimensionMismatch(f"Jones matrices are 2x2, got {m.shape}")
        if not np.allclose(m.conj().T @ m, np.eye(2), atol=1e-10):
            raise NotUnitary("U+U deviates from identity by more than 1e-10")
        if abs(abs(np.linalg.det(m)) - 1.0) > 1e-10:
            raise NotUnitary("|det U| deviates from 1 by more than 1e-10")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dag(self) -> "JonesUnitary":
        return JonesUnitary(self.matrix.conj().T)


def normalize(amps) -> PureState:
    """Normalize an amplitude vector into a canonical PureState.

    Raises ZeroVector when the input norm is <= 1e-12.
    """
    return PureState(np.asarray(amps, dtype=np.complex128))


def overlap(a: PureState, b: PureState) -> float:
    """|<a|b>|^2, the bunching-side observable of a HOM measurement."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"overlap of d={a.dim} with d={b.dim}")
    return kernels.overlap_abs2(a.amps, b.amps)


def root_fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|; equals the trace fidelity tr sqrt(sqrt(p) q sqrt(p)) for pure states."""
    return float(np.sqrt(overlap(a, b)))


def bloch_coords(s: PureState) -> tuple[float, float, float]:
    """Bloch-sphere coordinates (x, y, z) of a qubit state; |H> -> (0, 0, 1)."""
    if s.dim != 2:
        raise DimensionMismatch(f"Bloch coordinates need d=2, got d={s.dim}")
    a, b = s.amps
    cross = np.conj(a) * b
    return (
        float(2.0 * cross.real),
        float(2.0 * cross.imag),
        float(abs(a) ** 2 - abs(b) ** 2),
    )


def hwp(theta: float) -> JonesUnitary:
    """Half-wave plate at fast-axis angle theta (radians)."""
    c, s = np.cos(2.0 * theta), np.sin(2.0 * theta)
    return JonesUnitary(np.array([[c, s], [s, -c]], dtype=np.complex128))


def qwp(theta: float) -> JonesUnitary:
    """Quarter-wave plate at fast-axis angle theta (radians)."""
    c, s = np.cos(theta), np.sin(theta)
    off = (1.0 - 1.0j) * s * c
    return JonesUnitary(
        np.array(
            [[c * c + 1.0j * s * s, off], [off, s * s + 1.0j * c * c]],
            dtype=np.complex128,
        )
    )


def apply_unitary(u: JonesUnitary, s: PureState) -> PureState:
    """Apply a Jones matrix to a state; the result is canonicalized."""
    if s.dim != u.matrix.shape[1]:
        raise DimensionMismatch(f"matrix is {u.matrix.shape}, state is d={s.dim}")
    return PureState(u.matrix @ s.amps)


_BARE_I = re.compile(r"(?<![\d.])i")


def _parse_complex(token: str) -> complex:
    text = token.strip().replace(" ", "")
    if not text:
        raise ValueError("empty amplitude")
    text = _BARE_I.sub("1i", text).replace("i", "j")
    try:
        return complex(text)
    except ValueError as exc:
        raise ValueError(f"bad amplitude {token.strip()!r}") from exc


def parse_state(text: str) -> PureState:
    """Parse a comma-separated amplitude literal, e.g. ``0.75, 0.07+0.65i``.

    Amplitudes use ``i`` for the imaginary unit; the state is renormalized
    on load.
    """
    parts = text.split(",")
    if len(parts) < 2:
        raise ValueError(f"state literal needs >= 2 amplitudes: {text!r}")
    return normalize([_parse_complex(p) for p in parts])


def _format_amp(z: complex) -> str:
    if z.imag == 0:
        return repr(float(z.real))
    return f"{float(z.real)!r}{float(z.imag):+}i"


KET_H = normalize([1, 0])
KET_V = normalize([0, 1])
KET_D = normalize([1, 1])
KET_R = normalize([1, 1j])


def named_qubit_states() -> dict[str, PureState]:
    """Common polarization states by name (H, V, D, A, R, L)."""
    return {
        "H": KET_H,
        "V": KET_V,
        "D": KET_D,
        "A": normalize([1, -1]),
        "R": KET_R,
        "L": normalize([1, -1j]),
    }
