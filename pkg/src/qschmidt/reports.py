"""Build response models from core results; shared by the service and CLI.

Threshold resolution order: explicit request value, then the
SCHMIDT_THRESHOLD environment variable, then the library default 1e-10.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import InputError
from .ketparse import Partition, StateVector, format_state, state_from_text
from .linalg import matrix_from_json, outer
from .models import (
    AnalysisReport,
    AnalyzeRequest,
    MatrixPayload,
    MethodReport,
    StatePayload,
    TeleportReport,
    TeleportRequest,
    TeleportShot,
    WitnessReportModel,
    WitnessRequest,
)
from .schmidt import DEFAULT_THRESHOLD, AnalysisOutcome, SchmidtResult, analyze
from .teleport import BellOutcome, run_shots
from .witness import build_witness, evaluate_witness, operator_schmidt

THRESHOLD_ENV = "SCHMIDT_THRESHOLD"


def resolve_threshold(explicit: float | None) -> float:
    if explicit is not None:
        value = explicit
    else:
        raw = os.environ.get(THRESHOLD_ENV)
        if raw is None:
            return DEFAULT_THRESHOLD
        try:
            value = float(raw)
        except ValueError:
            raise InputError(f"{THRESHOLD_ENV} must be a number, got {raw!r}") from None
    if not np.isfinite(value) or value < 0:
        raise InputError(f"threshold must be a nonnegative finite number, got {value}")
    return value


def _pairs(vector: np.ndarray) -> list[tuple[float, float]]:
    return [(float(z.real), float(z.imag)) for z in vector]


def _columns(matrix: np.ndarray) -> list[list[tuple[float, float]]]:
    return [_pairs(matrix[:, k]) for k in range(matrix.shape[1])]


def state_payload(state: StateVector) -> StatePayload:
    return StatePayload(
        text=format_state(state),
        qubits=state.qubits,
        amplitudes=_pairs(state.amplitudes),
    )


# ---------------------------------------------------------------------------
# analyze


def _method_report(result: SchmidtResult, residual: float) -> MethodReport:
    return MethodReport(
        method=result.method.value,
        coefficients=[float(c) for c in result.coefficients],
        schmidt_number=result.schmidt_number,
        verdict=result.verdict.value,
        basis_a=_columns(result.basis_a),
        basis_b=_columns(result.basis_b),
        residual=float(residual),
    )


def _separable_factors(result: SchmidtResult, part: Partition) -> tuple[str, str] | None:
    if result.schmidt_number != 1:
        return None
    a = StateVector(part.k, result.basis_a[:, 0])
    b = StateVector(part.qubits - part.k, result.basis_b[:, 0])
    return format_state(a), format_state(b)


def build_analysis(request: AnalyzeRequest) -> AnalysisReport:
    state = state_from_text(request.state)
    part = Partition(request.partition, state.qubits)
    threshold = resolve_threshold(request.threshold)
    outcome: AnalysisOutcome = analyze(state, part, threshold)

    svd_res = outcome.svd_result
    canonical = StateVector.from_amplitudes(svd_res.reconstruct())
    return AnalysisReport(
        input=request.state,
        qubits=state.qubits,
        partition=part.k,
        threshold=threshold,
        norm_drift=float(state.norm_drift),
        drifted=state.drifted,
        verdict=outcome.verdict.value,
        schmidt_number=svd_res.schmidt_number,
        coefficients=[float(c) for c in svd_res.coefficients],
        methods=[
            _method_report(svd_res, outcome.svd_residual),
            _method_report(outcome.ptrace_result, outcome.ptrace_residual),
        ],
        max_deviation=float(outcome.max_deviation),
        canonical_form=format_state(canonical),
        separable_factors=_separable_factors(svd_res, part),
    )


# ---------------------------------------------------------------------------
# teleport


def build_teleport(request: TeleportRequest) -> TeleportReport:
    state = state_from_text(request.state)
    transcripts = run_shots(state, request.seed, request.shots)
    first = transcripts[0]
    histogram = {outcome.value: 0 for outcome in BellOutcome}
    shots = []
    for t in transcripts:
        histogram[t.outcome.value] += 1
        shots.append(
            TeleportShot(
                outcome=t.outcome.value,
                classical_bits=t.outcome.classical_bits,
                correction=t.correction.value,
                fidelity=float(t.fidelity),
                output_state=state_payload(t.output_state),
            )
        )
    return TeleportReport(
        input=request.state,
        seed=request.seed,
        shots=request.shots,
        input_state=state_payload(state),
        joint_state=state_payload(first.joint_state),
        outcome_probabilities=[float(p) for p in first.outcome_probabilities],
        results=shots,
        histogram=histogram,
        mean_fidelity=float(np.mean([t.fidelity for t in transcripts])),
    )


# ---------------------------------------------------------------------------
# witness


def _operator_from(source: str | MatrixPayload, what: str) -> tuple[np.ndarray, str | None]:
    if isinstance(source, str):
        state = state_from_text(source)
        return outer(state.amplitudes, state.amplitudes), source
    matrix = matrix_from_json(source.model_dump())
    if matrix.shape[0] != matrix.shape[1]:
        raise InputError(f"{what} matrix must be square, got shape {matrix.shape}")
    return matrix, None


def _witness_dims(side: int, partition: int) -> tuple[int, int]:
    if partition < 1:
        raise InputError(f"partition must be at least 1, got {partition}")
    dim_a = 2**partition
    if side % dim_a != 0 or side // dim_a < 2:
        raise InputError(
            f"partition {partition} does not split a side-{side} operator "
            f"(needs side divisible by {dim_a} with a remainder dimension >= 2)"
        )
    return dim_a, side // dim_a


def build_witness_report(request: WitnessRequest) -> WitnessReportModel:
    target, target_text = _operator_from(request.target, "target")
    test, _ = _operator_from(request.test, "test")
    if test.shape != target.shape:
        raise InputError(
            f"test operator shape {test.shape} does not match target shape {target.shape}"
        )
    dim_a, dim_b = _witness_dims(target.shape[0], request.partition)
    threshold = resolve_threshold(request.threshold)

    osd = operator_schmidt(target, dim_a, dim_b, threshold)
    w, mu1 = build_witness(target, dim_a, dim_b)
    report = evaluate_witness(w, test, mu1=mu1)
    return WitnessReportModel(
        target=target_text,
        dim_a=dim_a,
        dim_b=dim_b,
        mu1=float(mu1),
        coefficients=[float(c) for c in osd.coefficients],
        expectation=float(report.expectation),
        verdict=report.verdict.value,
    )
