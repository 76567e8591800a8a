"""Pydantic request/response models shared by the HTTP service and the CLI.

Complex numbers are rendered as two-element [re, im] arrays; matrices list
their entries row-major under that encoding.  JSON serialization keeps full
IEEE round-trip precision for floats.
"""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field

ComplexPair = tuple[float, float]


class MatrixPayload(BaseModel):
    """The matrix JSON format: row-major [re, im] entry pairs."""

    model_config = ConfigDict(extra="forbid")

    rows: int
    cols: int
    entries: list[ComplexPair]


class StatePayload(BaseModel):
    """A pure state: canonical text plus exact amplitudes."""

    text: str
    qubits: int
    amplitudes: list[ComplexPair]


# ---------------------------------------------------------------------------
# requests


class AnalyzeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    state: str = Field(description="bra-ket expression for the state")
    partition: int = Field(default=1, description="qubits in subsystem A")
    threshold: Optional[float] = Field(
        default=None,
        description="Schmidt coefficient cutoff; defaults to SCHMIDT_THRESHOLD "
        "from the environment, else 1e-10",
    )


class TeleportRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    state: str = Field(description="bra-ket expression, one qubit")
    seed: int = Field(default=0, description="RNG seed (PCG64)")
    shots: int = Field(default=1, ge=1, description="number of protocol runs")


class WitnessRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    target: Union[str, MatrixPayload] = Field(
        description="witness target X: bra-ket text (projector taken) or matrix"
    )
    test: Union[str, MatrixPayload] = Field(
        description="state to test: bra-ket text (projector taken) or matrix"
    )
    partition: int = Field(default=1, description="qubits in subsystem A")
    threshold: Optional[float] = Field(default=None)


# ---------------------------------------------------------------------------
# reports


class MethodReport(BaseModel):
    method: str
    coefficients: list[float]
    schmidt_number: int
    verdict: str
    basis_a: list[list[ComplexPair]]
    basis_b: list[list[ComplexPair]]
    residual: float


class AnalysisReport(BaseModel):
    input: str
    qubits: int
    partition: int
    threshold: float
    norm_drift: float
    drifted: bool
    verdict: str
    schmidt_number: int
    coefficients: list[float]
    methods: list[MethodReport]
    max_deviation: float
    canonical_form: str
    separable_factors: Optional[tuple[str, str]]


class TeleportShot(BaseModel):
    outcome: str
    classical_bits: str
    correction: str
    fidelity: float
    output_state: StatePayload


class TeleportReport(BaseModel):
    input: str
    seed: int
    shots: int
    input_state: StatePayload
    joint_state: StatePayload
    outcome_probabilities: list[float]
    results: list[TeleportShot]
    histogram: dict[str, int]
    mean_fidelity: float


class WitnessReportModel(BaseModel):
    target: Optional[str]
    dim_a: int
    dim_b: int
    mu1: float
    coefficients: list[float]
    expectation: float
    verdict: str


class ErrorReport(BaseModel):
    error: str
    kind: str
    position: Optional[int] = None
