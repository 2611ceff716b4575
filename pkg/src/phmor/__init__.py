"""Structure-preserving interpolatory model reduction for linear port-Hamiltonian systems."""

from .basis import (
    InertiaTriple,
    InterpolationSet,
    SymplecticProjector,
    assemble_VW,
    build_projector,
    congruence_to_canonical,
    congruence_to_target,
    inertia,
    krylov_block,
    make_symplectic_basis,
)
from .estimators import InterpolatoryReducer
from .generators import gen_msd_chain, gen_random_ph
from .reduction import ReductionResult, reduce, reduce_baseline, reduce_dissipative, reduce_lossless, reduced_transfer_eval
from .symplectic import (
    FormMatrix,
    SymplecticMap,
    canonical_J,
    extend_forms,
    extended_projector,
    extended_symplectic_inverse,
    is_symplectic,
    symplectic_form,
    symplectic_inverse,
)
from .system import (
    PHSystem,
    StateSpace,
    Trajectory,
    audit_tolerance,
    energy_audit,
    hamiltonian,
    simulate,
    to_state_space,
    transfer_eval,
    transfer_matrix,
)
from .verification import (
    VerificationReport,
    check_ph_structure,
    frequency_sweep,
    interpolation_report,
    positive_real_sweep,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "assemble_VW",
    "audit_tolerance",
    "build_projector",
    "canonical_J",
    "check_ph_structure",
    "congruence_to_canonical",
    "congruence_to_target",
    "energy_audit",
    "extend_forms",
    "extended_projector",
    "extended_symplectic_inverse",
    "FormMatrix",
    "frequency_sweep",
    "gen_msd_chain",
    "gen_random_ph",
    "hamiltonian",
    "inertia",
    "InertiaTriple",
    "interpolation_report",
    "InterpolationSet",
    "InterpolatoryReducer",
    "is_symplectic",
    "krylov_block",
    "make_symplectic_basis",
    "PHSystem",
    "positive_real_sweep",
    "reduce",
    "reduce_baseline",
    "reduce_dissipative",
    "reduce_lossless",
    "reduced_transfer_eval",
    "ReductionResult",
    "simulate",
    "StateSpace",
    "symplectic_form",
    "symplectic_inverse",
    "SymplecticMap",
    "SymplecticProjector",
    "to_state_space",
    "Trajectory",
    "transfer_eval",
    "transfer_matrix",
    "VerificationReport",
    "verify",
]
