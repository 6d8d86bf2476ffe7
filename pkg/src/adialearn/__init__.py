"""Adiabatic evolution of rotated Hamiltonians, plus a small classifier on top.

Hamiltonians live as unit vectors in the su(D) coordinate space; rotating
the vector preserves the spectrum and conjugates the operator.  Driving
the rotation slowly and integrating the Schrodinger equation gives the
adiabatic forward path; applying the arc unitaries directly gives the
ideal one.  The learning layer chains feature-encoding and trainable
rotation arcs into a binary classifier read out from one observable.
"""

from .su_basis import BasisError, LieBasis, build_su_basis, structure_constants
from .ham_space import (
    HamiltonianVector,
    RotationStep,
    RotationTrack,
    hamiltonian_matrix,
    rotate_vector,
    rotation_generator,
    rotation_matrix,
    rotation_unitary,
)
from .evolver import (
    DegeneracyError,
    EvolutionTrace,
    Schedule,
    adiabatic_evolve,
    expectation,
    fidelity,
    ground_state,
    ideal_evolve,
)
from .learning import (
    EncodingBlock,
    LearningModel,
    TrainConfig,
    TrainReport,
    VariationalBlock,
    batch_predict_ideal,
    build_track,
    classify,
    loss,
    parameter_shift_gradient,
    predict_adiabatic,
    predict_ideal,
    train,
)
from .tasks import (
    BOUNDARY_RADIUS_CASE2,
    CASE1_REFERENCE_WEIGHTS,
    CASE2_REFERENCE_WEIGHTS,
    Dataset,
    Sample,
    accuracy,
    case1_model,
    case2_model,
    gen_case1,
    gen_case2,
    label_case1,
    label_case2,
)
from .invariants import CheckResult, run_checks
from .config import ExperimentConfig, load_config

__version__ = "0.1.0"
