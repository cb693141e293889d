"""Self-guided adversarial learning of quantum data against HOM interference.

A generator proposes quantum states (or phase vectors); a fixed
discriminator -- a modeled Hong-Ou-Mandel interference measurement --
reports how distinguishable the proposal is from the hidden truth; SPSA
turns two such measurements per iteration into an update. The package
applies the loop to single-qubit state learning, black-box unitary process
characterization and simultaneous estimation of many phases, with analytic
and shot-noise measurement backends and a fully seeded CLI harness.
"""

__version__ = "0.1.0"

from . import kernels
from .errors import (
    DegenerateBaseline,
    DimensionMismatch,
    DomainError,
    InsufficientProbes,
    InvalidAmplitudes,
    InvalidDensityMatrix,
    LengthMismatch,
    NotUnitary,
    RangeError,
    SchemaError,
    SgqganError,
    ZeroVector,
)
from .states import (
    KET_D,
    KET_H,
    KET_R,
    KET_V,
    JonesUnitary,
    PureState,
    apply_unitary,
    bloch_coords,
    hwp,
    named_qubit_states,
    normalize,
    overlap,
    parse_state,
    qwp,
    root_fidelity,
)
from .interference import (
    CoincidenceRecord,
    HomMeasurementModel,
    coincidence_prob_dip,
    coincidence_prob_multiphase,
    measure_multiphase,
    measure_overlap,
    write_coincidence_csv,
)
from .spsa import (
    COMPLEX_ALPHABET,
    DEFAULT_GAINS,
    REAL_ALPHABET,
    GainSchedule,
    IterationLog,
    SpsaResult,
    gradient,
    perturbed_pair,
    run,
    sample_direction,
    sample_directions,
    step,
    write_iteration_log_csv,
)
from .state_learning import (
    StateLearningResult,
    StateLearningTask,
    Trajectory,
    aggregate,
    builtin_targets,
    learn,
)
from .process import (
    PAULI_BASIS,
    PAULI_LABELS,
    BlackBoxProcess,
    CharacterizationResult,
    ProcessMap,
    apply_process,
    characterize,
    chi_from_unitary,
    parse_waveplates,
    process_fidelity,
)
from .multiphase import (
    MultiphaseResult,
    PhaseScene,
    accuracy,
    default_gains,
    default_iterations,
    estimate,
    uniform_scene,
)
from .config import ExperimentConfig, parse_config
from .cli import execute, main
