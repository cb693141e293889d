"""Adaptive characterization of an unknown unitary wave-plate process.

The process is a black box queried with probe states. Each output state is
learned through the HOM-driven SPSA loop, then a single unitary is fitted
over all probes and expanded into a chi (process) matrix over the Pauli
basis {I, X, Y, Z}.

The central subtlety: every learned output state carries an arbitrary
global phase (states are canonical, physics is phase-blind), so the probe
images alone overconstrain nothing about relative phases. The unitary fit
below alternates a phase re-alignment of each learned image with an
orthogonal-Procrustes projection; at least two non-orthogonal probes are
what makes the relative phases identifiable at all. Defaults use three:
|H>, |D>, |R>.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import InsufficientProbes, InvalidDensityMatrix
from .seeding import probe_seed
from .spsa import DEFAULT_GAINS, GainSchedule
from .state_learning import StateLearningTask, Trajectory, learn
from .states import (
    KET_D,
    KET_H,
    KET_R,
    JonesUnitary,
    PureState,
    apply_unitary,
    hwp,
    qwp,
)

__all__ = [
    "PAULI_LABELS",
    "PAULI_BASIS",
    "ProcessMap",
    "BlackBoxProcess",
    "apply_process",
    "chi_from_unitary",
    "characterize",
    "CharacterizationResult",
    "process_fidelity",
    "parse_waveplates",
    "DEFAULT_PROBES",
]

PAULI_LABELS = ("I", "X", "Y", "Z")
PAULI_BASIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)

DEFAULT_PROBES = (KET_H, KET_D, KET_R)


@dataclass(frozen=True, eq=False)
class ProcessMap:
    """chi-matrix representation of a dynamical map over the Pauli basis.

    Validates Hermiticity (1e-10), trace preservation (1e-8) and complete
    positivity up to -1e-8 on the eigenvalues.
    """

    chi: np.ndarray

    def __post_init__(self):
        chi = np.asarray(self.chi, dtype=np.complex128)
        if chi.shape != (4, 4):
            raise InvalidDensityMatrix(f"chi must be 4x4, got {chi.shape}")
        if not np.allclose(chi, chi.conj().T, atol=1e-10):
            raise InvalidDensityMatrix("chi is not Hermitian within 1e-10")
        tp = np.einsum(
            "mn,nji,mjk->ik", chi, PAULI_BASIS.conj(), PAULI_BASIS
        )
        if not np.allclose(tp, np.eye(2), atol=1e-8):
            raise InvalidDensityMatrix("chi is not trace-preserving within 1e-8")
        if np.linalg.eigvalsh(chi).min() < -1e-8:
            raise InvalidDensityMatrix("chi has an eigenvalue below -1e-8")
        chi.flags.writeable = False
        object.__setattr__(self, "chi", chi)

    @property
    def basis_labels(self) -> tuple:
        return PAULI_LABELS

    def to_json_dict(self) -> dict:
        """Basis labels plus row-major [re, im] entry pairs."""
        flat = self.chi.reshape(-1)
        return {
            "basis": list(PAULI_LABELS),
            "entries": [[z.real, z.imag] for z in flat],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ProcessMap":
        entries = np.array([complex(re, im) for re, im in data["entries"]])
        return cls(entries.reshape(4, 4))


class BlackBoxProcess:
    """Opaque unitary process: query in, output state out.

    The constructing code knows the unitary; the query interface does not
    expose it (outputs are canonicalized, so even the global phase of the
    hidden matrix leaves no trace).
    """

    def __init__(self, unitary: JonesUnitary):
        self._unitary = unitary

    def query(self, state: PureState) -> PureState:
        return apply_unitary(self._unitary, state)


def _check_density_matrix(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (2, 2):
        raise InvalidDensityMatrix(f"expected a 2x2 density matrix, got {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=1e-9):
        raise InvalidDensityMatrix("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-9 or abs(np.trace(rho).imag) > 1e-9:
        raise InvalidDensityMatrix("density matrix trace is not 1")
    if np.linalg.eigvalsh(rho).min() < -1e-9:
        raise InvalidDensityMatrix("density matrix has a negative eigenvalue")
    return rho


def apply_process(p: ProcessMap, rho: np.ndarray) -> np.ndarray:
    """Evaluate the dynamical map: sum_mn chi_mn E_m rho E_n+."""
    rho = _check_density_matrix(rho)
    return np.einsum(
        "mn,mij,jk,nlk->il", p.chi, PAULI_BASIS, rho, PAULI_BASIS.conj()
    )


def chi_from_unitary(u: JonesUnitary) -> ProcessMap:
    """Rank-1 chi matrix of a unitary: chi = c c+ with U = sum_m c_m E_m."""
    if not isinstance(u, JonesUnitary):
        u = JonesUnitary(u)  # raises NotUnitary on bad input
    coeffs = np.array([np.trace(e.conj().T @ u.matrix) / 2.0 for e in PAULI_BASIS])
    return ProcessMap(np.outer(coeffs, coeffs.conj()))


def process_fidelity(estimate: JonesUnitary, reference: JonesUnitary) -> float:
    """|tr(U_est+ U_ref)| / 2, insensitive to either global phase."""
    return float(abs(np.trace(estimate.matrix.conj().T @ reference.matrix)) / 2.0)


def _fit_unitary(probes, images, sweeps: int = 60) -> JonesUnitary:
    """Best unitary mapping probes onto phase-ambiguous images.

    Alternates the optimal per-image phase with the orthogonal-Procrustes
    solution; converges in a few sweeps for data this clean.
    """
    phases = np.zeros(len(probes))
    m = np.eye(2, dtype=np.complex128)
    for _ in range(sweeps):
        c = np.zeros((2, 2), dtype=np.complex128)
        for theta, img, probe in zip(phases, images, probes):
            c += np.exp(1j * theta) * np.outer(img.amps, probe.amps.conj())
        u, _, vh = np.linalg.svd(c)
        m = u @ vh
        phases = np.array(
            [np.angle(np.vdot(img.amps, m @ probe.amps)) for img, probe in zip(images, probes)]
        )
    return JonesUnitary(m)


@dataclass(frozen=True)
class CharacterizationResult:
    unitary: JonesUnitary
    process_map: ProcessMap
    learned_outputs: list
    probe_trajectories: list


def characterize(
    process: BlackBoxProcess,
    probes=None,
    sched: GainSchedule = DEFAULT_GAINS,
    model=None,
    iterations: int = 30,
    master_seed: int = 0,
    threads: int = 1,
) -> CharacterizationResult:
    """Learn the black box's action on each probe and reconstruct it.

    Runs one learning trial per probe (probe j is seeded from
    (master_seed, probe j)), fits the unitary across all probes, and
    expands it into a chi matrix. Raises InsufficientProbes unless the
    probes contain at least two linearly independent states.
    """
    probes = list(DEFAULT_PROBES if probes is None else probes)
    stack = np.vstack([p.amps for p in probes]) if probes else np.zeros((0, 2))
    if len(probes) < 2 or np.linalg.matrix_rank(stack, tol=1e-9) < 2:
        raise InsufficientProbes(
            "need at least 2 linearly independent probes to pin down a unitary"
        )
    template = StateLearningTask(
        target=KET_H,  # replaced per probe
        sched=sched,
        iterations=iterations,
        trials=1,
    )
    if model is not None:
        template = replace(template, model=model)

    learned = []
    trajectories = []
    for j, probe in enumerate(probes):
        task = replace(
            template,
            target=process.query(probe),
            master_seed=probe_seed(master_seed, j),
        )
        result = learn(task, threads=threads)
        learned.append(result.final_states[0])
        trajectories.append(result.trajectory)
    unitary = _fit_unitary(probes, learned)
    return CharacterizationResult(
        unitary=unitary,
        process_map=chi_from_unitary(unitary),
        learned_outputs=learned,
        probe_trajectories=trajectories,
    )


def parse_waveplates(text: str) -> JonesUnitary:
    """Build a unitary from a wave-plate list like ``hwp:22.5,qwp:45``.

    Angles are fast-axis angles in degrees; plates are listed in the order
    the photon traverses them, so later entries multiply on the left.
    """
    makers = {"hwp": hwp, "qwp": qwp}
    matrix = np.eye(2, dtype=np.complex128)
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ValueError("empty wave-plate entry")
        kind, sep, angle_text = part.partition(":")
        kind = kind.strip().lower()
        if not sep or kind not in makers:
            raise ValueError(f"bad wave-plate entry {part!r}; expected hwp:<deg> or qwp:<deg>")
        try:
            angle = float(angle_text)
        except ValueError:
            raise ValueError(f"bad wave-plate angle in {part!r}") from None
        matrix = makers[kind](np.deg2rad(angle)).matrix @ matrix
    return JonesUnitary(matrix)
