"""Schmidt-decomposition entanglement analysis for small qubit systems.

The package answers one question two independent ways: is a pure multi-qubit
state entangled across a cut?  Route one takes the SVD of the state's
correlation matrix; route two diagonalizes the reduced density matrix from a
partial trace.  On top of that sit a teleportation simulator and an
entanglement witness built from the operator Schmidt decomposition, all
driven by a bra-ket expression parser and served over a CLI and HTTP API.
"""

from .errors import ConsistencyError, InputError, KetParseError
from .ketparse import Partition, StateVector, format_state, parse, state_from_text
from .linalg import (
    eig_hermitian,
    matrix_from_json,
    matrix_to_json,
    outer,
    partial_trace,
    svd,
    tensor,
)
from .schmidt import (
    AnalysisOutcome,
    Method,
    SchmidtResult,
    Verdict,
    analyze,
    correlation_matrix,
    decompose_ptrace,
    decompose_svd,
)
from .teleport import (
    BellOutcome,
    Pauli,
    TeleportTranscript,
    bell_basis,
    compose_joint,
    run,
    run_shots,
)
from .witness import (
    OperatorSchmidt,
    WitnessReport,
    WitnessVerdict,
    build_witness,
    evaluate_witness,
    operator_schmidt,
    realign,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisOutcome",
    "BellOutcome",
    "ConsistencyError",
    "InputError",
    "KetParseError",
    "Method",
    "OperatorSchmidt",
    "Partition",
    "Pauli",
    "SchmidtResult",
    "StateVector",
    "TeleportTranscript",
    "Verdict",
    "WitnessReport",
    "WitnessVerdict",
    "analyze",
    "bell_basis",
    "build_witness",
    "compose_joint",
    "correlation_matrix",
    "decompose_ptrace",
    "decompose_svd",
    "eig_hermitian",
    "evaluate_witness",
    "format_state",
    "matrix_from_json",
    "matrix_to_json",
    "operator_schmidt",
    "outer",
    "partial_trace",
    "parse",
    "realign",
    "run",
    "run_shots",
    "state_from_text",
    "svd",
    "tensor",
    "__version__",
]
