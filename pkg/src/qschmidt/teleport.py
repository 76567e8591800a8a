"""Single-qubit teleportation simulated at the state-vector level.

Pipeline: compose |Psi> = |psi> (x) |Phi+>, project lab A's two qubits onto
the Bell basis with a seeded random source, send the two classical bits,
apply the matching Pauli in lab B, compare with the input.

Randomness: ``run``/``run_shots`` seed ``numpy.random.default_rng`` (the
PCG64 generator), so transcripts are reproducible from the integer seed
alone.  One uniform draw is consumed per measurement.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InputError
from .ketparse import StateVector
from .linalg import tensor

ZERO_BRANCH_TOL = 1e-12


class BellOutcome(str, Enum):
    PHI_PLUS = "phi_plus"
    PHI_MINUS = "phi_minus"
    PSI_PLUS = "psi_plus"
    PSI_MINUS = "psi_minus"

    @property
    def classical_bits(self) -> str:
        return _BITS[self]

    @classmethod
    def from_bits(cls, bits: str) -> "BellOutcome":
        for outcome, encoding in _BITS.items():
            if encoding == bits:
                return outcome
        raise InputError(f"no Bell outcome with classical bits {bits!r}")


_BITS = {
    BellOutcome.PHI_PLUS: "00",
    BellOutcome.PHI_MINUS: "01",
    BellOutcome.PSI_PLUS: "10",
    BellOutcome.PSI_MINUS: "11",
}

_OUTCOMES = tuple(BellOutcome)


class Pauli(str, Enum):
    I = "I"  # noqa: E741  (standard Pauli name)
    X = "X"
    Y = "Y"
    Z = "Z"


PAULI_MATRICES: dict[Pauli, np.ndarray] = {
    Pauli.I: np.eye(2, dtype=np.complex128),
    Pauli.X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    Pauli.Y: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    Pauli.Z: np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

_CORRECTION: dict[BellOutcome, Pauli] = {
    BellOutcome.PHI_PLUS: Pauli.I,
    BellOutcome.PHI_MINUS: Pauli.Z,
    BellOutcome.PSI_PLUS: Pauli.X,
    BellOutcome.PSI_MINUS: Pauli.Y,
}


@dataclass(frozen=True)
class TeleportTranscript:
    """Everything one protocol run produced, reproducible from the seed."""

    input_state: StateVector
    joint_state: StateVector
    outcome: BellOutcome
    outcome_probabilities: np.ndarray
    correction: Pauli
    output_state: StateVector
    fidelity: float


def bell_basis() -> tuple[StateVector, StateVector, StateVector, StateVector]:
    """The four Bell states, in the fixed order Phi+, Phi-, Psi+, Psi-."""
    s = 1 / np.sqrt(2)
    return (
        StateVector(2, np.array([s, 0, 0, s])),
        StateVector(2, np.array([s, 0, 0, -s])),
        StateVector(2, np.array([0, s, s, 0])),
        StateVector(2, np.array([0, s, -s, 0])),
    )


def compose_joint(psi: StateVector) -> StateVector:
    """|psi> (x) |Phi+>; qubit order (psi, A half of pair, B half of pair)."""
    _require_one_qubit(psi)
    phi_plus = bell_basis()[0]
    joint = tensor(psi.amplitudes.reshape(-1, 1), phi_plus.amplitudes.reshape(-1, 1))
    return StateVector(3, joint.ravel())


def _require_one_qubit(psi: StateVector) -> None:
    if psi.qubits != 1:
        raise InputError(f"expected 1 qubit, got {psi.qubits}")


def branch_states(joint: StateVector) -> tuple[np.ndarray, list[np.ndarray]]:
    """Probabilities and unnormalized Bob states for each Bell outcome.

    Branch k is (<Bell_k| (x) I) |joint>: b_k[j] = sum_a conj(Bell_k[a]) *
    joint[2a + j], with a running over lab A's two qubits.  p_k = |b_k|^2.
    """
    if joint.qubits != 3:
        raise InputError(f"expected the 3-qubit joint state, got {joint.qubits} qubits")
    grid = joint.amplitudes.reshape(4, 2)
    branches = [bell.amplitudes.conj() @ grid for bell in bell_basis()]
    probs = np.array([float(np.vdot(b, b).real) for b in branches])
    return probs, branches


def bell_measure(joint: StateVector, rng: np.random.Generator) -> tuple[BellOutcome, StateVector]:
    """Sample a Bell outcome and return Bob's renormalized post-measurement state.

    Branches with probability below 1e-12 are never sampled.
    """
    probs, branches = branch_states(joint)
    draw = float(rng.random())
    chosen = None
    acc = 0.0
    for k, p in enumerate(probs):
        acc += float(p)
        if draw < acc and p > ZERO_BRANCH_TOL:
            chosen = k
            break
    if chosen is None:
        chosen = int(np.argmax(probs))
    bob = branches[chosen]
    return _OUTCOMES[chosen], StateVector(1, bob / np.linalg.norm(bob))


def correction_pauli(outcome: BellOutcome) -> Pauli:
    return _CORRECTION[outcome]


def correction_for(outcome: BellOutcome) -> np.ndarray:
    """The 2x2 Pauli matrix Bob applies for a given 2-bit message."""
    return PAULI_MATRICES[_CORRECTION[outcome]].copy()


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2, insensitive to global phase."""
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def run(psi: StateVector, seed: int) -> TeleportTranscript:
    """One full protocol run, deterministic for a given seed."""
    rng = np.random.default_rng(seed)
    return _run_with(psi, rng)


def _run_with(psi: StateVector, rng: np.random.Generator) -> TeleportTranscript:
    _require_one_qubit(psi)
    joint = compose_joint(psi)
    probs, _ = branch_states(joint)
    outcome, bob = bell_measure(joint, rng)
    pauli = correction_pauli(outcome)
    corrected = PAULI_MATRICES[pauli] @ bob.amplitudes
    output = StateVector(1, corrected / np.linalg.norm(corrected))
    return TeleportTranscript(
        input_state=psi,
        joint_state=joint,
        outcome=outcome,
        outcome_probabilities=probs,
        correction=pauli,
        output_state=output,
        fidelity=fidelity(psi, output),
    )


def run_shots(psi: StateVector, seed: int, shots: int) -> list[TeleportTranscript]:
    """``shots`` consecutive runs drawn from one seeded generator stream."""
    if shots < 1:
        raise InputError(f"shots must be positive, got {shots}")
    rng = np.random.default_rng(seed)
    return [_run_with(psi, rng) for _ in range(shots)]
