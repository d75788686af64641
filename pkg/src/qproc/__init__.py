"""Simulation of programmable quantum processors.

A processor is a fixed unitary ``G`` on ``data (x) program``; the state of the
program register selects the channel applied to the data.  The package builds
those channels, scores them with process fidelity, finds optimal programs and
bounds the program dimension needed to approximate a set of unitaries.
"""

from qproc.linalg import (
    DimensionError,
    NotPSDError,
    ValidationError,
    hermitian_eig,
    hs_inner,
    matrix_exp_skew,
    operator_norm,
    psd_sqrt,
    uhlmann_fidelity,
)
from qproc.processor import (
    Channel,
    Processor,
    ValidationReport,
    apply_channel,
    choi_state,
    from_global_unitary,
    mixed_program_channel,
    outcome_probabilities,
    program_kraus,
    success_probability,
    validate,
)
from qproc.fidelity import (
    MMatrix,
    OptimalProgramResult,
    best_basis_program,
    epsilon_g,
    m_matrix,
    optimal_program,
    process_fidelity,
    process_fidelity_unitary,
)
from qproc.bounds import (
    BoundReport,
    UnitarySet,
    dimension_bound,
    eta,
    k_q,
    linear_independence_oracle,
    overlap_bound,
    q_value,
)

__version__ = "0.1.0"
